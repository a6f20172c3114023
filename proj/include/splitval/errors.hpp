#pragma once

#include <stdexcept>
#include <string>

namespace splitval {

// Base class for every failure thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// An input violates a documented precondition (zero where a nonzero value is
// required, wrong degree, non-monic modulus, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// An integer resisted factorization within the configured budget.  We report
// this instead of returning a wrong or partial answer.
class UnfactoredError : public Error {
public:
  using Error::Error;
};

// Two congruences in a CRT system share a common modulus factor.
class CrtIncompatibleError : public Error {
public:
  CrtIncompatibleError(const std::string& what, std::size_t i, std::size_t j)
      : Error(what), first(i), second(j) {}
  std::size_t first;   // indices of the offending pair
  std::size_t second;
};

// A place-dependent computation was requested at a prime where the relevant
// order is (or may be) ramified; the conservative response is a refusal.
class RamifiedPrimeError : public Error {
public:
  using Error::Error;
};

// The requested operation is only meaningful after the place set S is
// enlarged (e.g. a denominator prime of t_0 escaped S).
class NeedsSInclusionError : public Error {
public:
  using Error::Error;
};

// A certification routine (irreducibility, primality at scale, ...) ran out
// of applicable criteria.  This is "don't know", never "no".
class CannotCertifyError : public Error {
public:
  using Error::Error;
};

// A randomized construction exhausted its retry budget.
class RetryExhaustedError : public Error {
public:
  using Error::Error;
};

// A bounded witness search came up empty.  This is inconclusive: the witness
// may exist beyond the search region.
class NoWitnessError : public Error {
public:
  using Error::Error;
};

// An instance is unusable as given (e.g. a norm hypothesis fails outright,
// making every downstream statement vacuous).
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// Textual input (instance files, polynomial expressions) failed to parse.
class ParseError : public Error {
public:
  ParseError(const std::string& what, int line = 0, int column = 0)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

}  // namespace splitval
