#pragma once

// Local machinery over the places of Q:
//   - Hilbert symbols (a,b)_v for rational a, b at the real place, at 2 and
//     at odd primes, by the classical unit/valuation formulas;
//   - the product-formula defect over all places (always 0; recomputing it
//     is a consistency check for the symbol code and the factorizer);
//   - Dirichlet characters of finite order with exact value bookkeeping in
//     (1/n)Z/Z, and local invariants of the associated cyclic algebras;
//   - a three-valued local norm test for x in K^* relative to L = K[y]/(g),
//     exact at real places (Sturm data specialized through an embedding),
//     exact for quadratic extensions of Q (Hilbert symbols, including 2 and
//     ramified primes), and exact at unramified finite places through
//     residue degrees; everything else reports Undetermined with a reason.

#include <map>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "number_field.hpp"
#include "polyq.hpp"

namespace splitval {

// --- places of Q -----------------------------------------------------------

struct PlaceOfQ {
  bool is_real = false;
  Int p = 0;  // meaningful when finite

  static PlaceOfQ real() { return {true, Int(0)}; }
  static PlaceOfQ finite(const Int& p) {
    if (p < 2) throw DomainError("PlaceOfQ: finite place needs a prime");
    return {false, p};
  }

  bool is_finite() const { return !is_real; }

  friend bool operator==(const PlaceOfQ& a, const PlaceOfQ& b) {
    return a.is_real == b.is_real && (a.is_real || a.p == b.p);
  }
  friend bool operator!=(const PlaceOfQ& a, const PlaceOfQ& b) { return !(a == b); }
  friend bool operator<(const PlaceOfQ& a, const PlaceOfQ& b) {
    if (a.is_real != b.is_real) return a.is_real;  // real sorts first
    if (a.is_real) return false;
    return a.p < b.p;
  }

  std::string str() const { return is_real ? "real" : p.get_str(); }
};

// --- Hilbert symbols -------------------------------------------------------

inline int legendre_symbol(const Int& u, const Int& p) {
  Int r = powmod(mod(u, p), (p - 1) / 2, p);
  if (r == 0) throw DomainError("legendre_symbol: argument divisible by p");
  return r == 1 ? 1 : -1;
}

inline int hilbert_symbol(const Rat& a, const Rat& b, const PlaceOfQ& v) {
  if (sgn(a) == 0 || sgn(b) == 0)
    throw DomainError("hilbert_symbol: arguments must be nonzero");
  if (v.is_real) return (sgn(a) < 0 && sgn(b) < 0) ? -1 : 1;
  const Int& p = v.p;
  auto [alpha, u] = split_at_prime(a, p);
  auto [beta, w] = split_at_prime(b, p);
  if (p == 2) {
    // (-1)^{eps(u)eps(w) + alpha*omega(w) + beta*omega(u)}
    auto unit_mod = [&](const Rat& x, const Int& m) {
      return mod(num(x) * invmod(mod(den(x), m), m), m);
    };
    Int u8 = unit_mod(u, 8), w8 = unit_mod(w, 8);
    long eps_u = Int((u8 - 1) / 2).get_si() % 2;
    long eps_w = Int((w8 - 1) / 2).get_si() % 2;
    long om_u = Int((u8 * u8 - 1) / 8).get_si() % 2;
    long om_w = Int((w8 * w8 - 1) / 8).get_si() % 2;
    long e = eps_u * eps_w + alpha * om_w + beta * om_u;
    return (e % 2 == 0) ? 1 : -1;
  }
  Int up = mod(num(u) * invmod(mod(den(u), p), p), p);
  Int wp = mod(num(w) * invmod(mod(den(w), p), p), p);
  int s = 1;
  if (beta % 2 != 0) s *= legendre_symbol(up, p);
  if (alpha % 2 != 0) s *= legendre_symbol(wp, p);
  if (alpha % 2 != 0 && beta % 2 != 0 && ((p - 1) / 2) % 2 != 0) s = -s;
  return s;
}

struct ReciprocityReport {
  int defect = 0;  // 0 iff the product of local symbols is +1
  std::vector<PlaceOfQ> minus_places;
};

inline ReciprocityReport reciprocity_defect(const Rat& a, const Rat& b,
                                            Factorizer& fz) {
  if (sgn(a) == 0 || sgn(b) == 0)
    throw DomainError("reciprocity_defect: arguments must be nonzero");
  std::vector<Int> ps{Int(2)};
  for (const auto& [p, e] : fz.factor(a).terms) ps.push_back(p);
  for (const auto& [p, e] : fz.factor(b).terms) ps.push_back(p);
  std::sort(ps.begin(), ps.end());
  ps.erase(std::unique(ps.begin(), ps.end()), ps.end());

  ReciprocityReport rep;
  if (hilbert_symbol(a, b, PlaceOfQ::real()) == -1)
    rep.minus_places.push_back(PlaceOfQ::real());
  for (const Int& p : ps)
    if (hilbert_symbol(a, b, PlaceOfQ::finite(p)) == -1)
      rep.minus_places.push_back(PlaceOfQ::finite(p));
  rep.defect = static_cast<int>(rep.minus_places.size() % 2);
  return rep;
}

// --- Dirichlet characters and cyclic-algebra invariants -------------------

// A character chi of (Z/m)^* with exact order n; values are recorded as
// exponents k meaning chi(x) = e^{2 pi i k / n}, i.e. the class k/n in
// (1/n)Z/Z.
class DirichletCharacter {
public:
  static DirichletCharacter quadratic_from_kronecker(const Int& d) {
    if (d == 0) throw DomainError("character: d must be nonzero");
    Int m = splitval::abs(d);
    if (mod(d, Int(4)) != 0 && mod(d, Int(4)) != 1)
      m = 4 * m;  // make the modulus usable for non-fundamental d
    if (m > 1000000)
      throw DomainError("character: modulus too large for a value table");
    DirichletCharacter chi;
    chi.m_ = m;
    chi.n_ = 2;
    bool nontrivial = false;
    for (Int x = 1; x < m; ++x) {
      if (gcd(x, m) != 1) continue;
      int k = mpz_kronecker(d.get_mpz_t(), x.get_mpz_t());
      chi.table_[x] = (k == 1) ? 0 : 1;
      if (k == -1) nontrivial = true;
    }
    if (!nontrivial) chi.n_ = 1;
    chi.check_table();
    return chi;
  }

  // Cyclic character on (Z/q)^* for an odd prime q: requires g to generate
  // and n | q-1; sends g to the class 1/n.
  static DirichletCharacter from_generator(const Int& q, const Int& g, long n) {
    if (!is_prime(q) || q == 2) throw DomainError("character: q must be an odd prime");
    if (q > 1000000)
      throw DomainError("character: modulus too large for a value table");
    if (n < 1 || mod(q - 1, Int(n)) != 0)
      throw DomainError("character: order must divide q-1");
    DirichletCharacter chi;
    chi.m_ = q;
    chi.n_ = n;
    Int qm1 = q - 1;
    Int x = 1;
    for (Int j = 0; j < qm1; ++j) {
      chi.table_[x] = mod(j, Int(n)).get_si();
      x = mod(x * g, q);
    }
    if (Int(static_cast<long>(chi.table_.size())) != qm1)
      throw DomainError("character: g does not generate (Z/q)^*");
    chi.check_table();
    return chi;
  }

  static DirichletCharacter from_table(const Int& m, long n,
                                       std::map<Int, long> table) {
    DirichletCharacter chi;
    chi.m_ = m;
    chi.n_ = n;
    chi.table_ = std::move(table);
    chi.check_table();
    return chi;
  }

  const Int& modulus() const { return m_; }
  long order() const { return n_; }

  long exponent(const Int& x) const {
    Int r = mod(x, m_);
    auto it = table_.find(r);
    if (it == table_.end())
      throw DomainError("character: argument not coprime to the modulus");
    return it->second;
  }

  // The class chi(x) = k/n in (1/n)Z/Z, reported as a rational in [0,1).
  Rat value(const Int& x) const { return make_rat(exponent(x), n_); }

private:
  void check_table() const {
    // table must cover exactly the units, be multiplicative, and have exact
    // order n_
    long g = n_;
    for (Int x = 1; x < m_; ++x) {
      bool unit = gcd(x, m_) == 1;
      if (unit != (table_.count(mod(x, m_)) == 1))
        throw DomainError("character: table domain mismatch");
    }
    for (auto& [x, e] : table_) {
      if (e < 0 || e >= n_) throw DomainError("character: exponent out of range");
      g = std::gcd(g, e);
    }
    if (n_ > 1 && g != 1)
      throw DomainError("character: order is not exactly n");
    std::vector<Int> units;
    for (auto& [x, e] : table_) units.push_back(x);
    std::size_t limit = units.size() <= 64 ? units.size() : 64;
    for (std::size_t i = 0; i < limit; ++i)
      for (std::size_t j = 0; j < units.size(); ++j) {
        Int xy = mod(units[i] * units[j], m_);
        long want = (table_.at(units[i]) + table_.at(units[j])) % n_;
        if (table_.at(xy) != want)
          throw DomainError("character: table is not multiplicative");
      }
    if (table_.count(Int(1)) && table_.at(Int(1)) != 0)
      throw DomainError("character: chi(1) must be 1");
  }

  Int m_;
  long n_ = 1;
  std::map<Int, long> table_;
};

// Local invariant inv_p of the cyclic algebra (chi, a) at a finite prime p
// not dividing the conductor: v_p(a) * chi(p) in (1/n)Z/Z.
inline Rat cyclic_invariant(const Rat& a, const Int& p,
                            const DirichletCharacter& chi) {
  if (sgn(a) == 0) throw DomainError("cyclic_invariant: a must be nonzero");
  if (mod(chi.modulus(), p) == 0)
    throw RamifiedPrimeError("cyclic invariant at a prime dividing the modulus");
  long v = valuation_nonzero(a, p);
  long k = mod(Int(v) * chi.exponent(p), Int(chi.order())).get_si();
  return make_rat(k, chi.order());
}

// Sum of the computable (unramified finite) invariants of (chi, a); the
// places dividing the modulus are reported separately so the caller can see
// what the product formula still owes.
struct CyclicInvariantSum {
  Rat unramified_sum;           // in (1/n)Z/Z, normalized to [0,1)
  std::vector<Int> skipped;     // primes dividing the modulus with v_p(a) != 0
};

inline CyclicInvariantSum cyclic_invariant_sum(const Rat& a,
                                               const DirichletCharacter& chi,
                                               Factorizer& fz) {
  CyclicInvariantSum out;
  out.unramified_sum = Rat(0);
  for (const auto& [p, e] : fz.factor(a).terms) {
    if (mod(chi.modulus(), p) == 0) {
      out.skipped.push_back(p);
      continue;
    }
    out.unramified_sum += cyclic_invariant(a, p, chi);
  }
  // reduce into [0,1)
  Int fl;
  mpz_fdiv_q(fl.get_mpz_t(), num(out.unramified_sum).get_mpz_t(),
             den(out.unramified_sum).get_mpz_t());
  out.unramified_sum -= Rat(fl);
  return out;
}

// --- the three-valued local norm test -------------------------------------

enum class NormStatus { IsNorm, NotNorm, Undetermined };

enum class VerdictReason {
  None,
  RamifiedCase,           // place interacts with bad primes; no exact rule wired
  InsufficientPrecision,  // input only known to a precision that blurs the answer
  MissingTarget,          // no target value available at this place
};

inline const char* to_string(NormStatus s) {
  switch (s) {
    case NormStatus::IsNorm: return "is-norm";
    case NormStatus::NotNorm: return "not-norm";
    default: return "undetermined";
  }
}

inline const char* to_string(VerdictReason r) {
  switch (r) {
    case VerdictReason::None: return "none";
    case VerdictReason::RamifiedCase: return "ramified-case";
    case VerdictReason::InsufficientPrecision: return "insufficient-precision";
    default: return "missing-target";
  }
}

struct NormVerdict {
  NormStatus status = NormStatus::Undetermined;
  VerdictReason reason = VerdictReason::None;
  std::string detail;

  static NormVerdict yes(std::string d = "") {
    return {NormStatus::IsNorm, VerdictReason::None, std::move(d)};
  }
  static NormVerdict no(std::string d = "") {
    return {NormStatus::NotNorm, VerdictReason::None, std::move(d)};
  }
  static NormVerdict unknown(VerdictReason r, std::string d = "") {
    return {NormStatus::Undetermined, r, std::move(d)};
  }

  bool is_norm() const { return status == NormStatus::IsNorm; }
  bool not_norm() const { return status == NormStatus::NotNorm; }
  bool undetermined() const { return status == NormStatus::Undetermined; }
};

// AND-style aggregation: NotNorm dominates, then Undetermined.
inline NormVerdict combine_verdicts(const std::vector<NormVerdict>& parts) {
  NormVerdict out = NormVerdict::yes();
  for (const NormVerdict& v : parts) {
    if (v.not_norm()) return v;
    if (v.undetermined()) out = v;
  }
  return out;
}

// Number of real roots of g specialized through the real embedding with the
// given index: the Sturm chain is computed once over K, and only the signs
// of the leading coefficients are taken through the embedding (valid since
// embeddings are injective, so no degree drop happens).
inline int real_root_count_at_embedding(const NumberFieldPtr& K, const KPoly& g,
                                        int embedding_index) {
  if (g.degree() < 1) return 0;
  std::vector<KPoly> chain{g, g.derivative()};
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    KPoly r = divmod(chain[chain.size() - 2], chain.back()).second;
    chain.push_back(-r);
  }
  if (chain.back().is_zero()) chain.pop_back();

  auto variations = [&](bool at_plus) {
    int count = 0, prev = 0;
    for (const KPoly& h : chain) {
      int s = K->sign_at_embedding(h.lc(), embedding_index);
      if (!at_plus && h.degree() % 2 == 1) s = -s;
      if (s == 0) throw DomainError("specialized Sturm chain degenerated");
      if (prev != 0 && s != prev) ++count;
      prev = s;
    }
    return count;
  };
  return variations(false) - variations(true);
}

// Is x a local norm for L/K at the real embedding with the given index?
// Exact: norms from a product of R's and C's are everything when some
// component is real, and the positive reals otherwise.
inline NormVerdict local_norm_real(const RelativeExtension& L, const KElem& x,
                                   int embedding_index) {
  if (x.is_zero()) throw DomainError("local_norm_real: x must be nonzero");
  const NumberFieldPtr& K = L.base();
  int real_components = real_root_count_at_embedding(K, L.rel_poly(), embedding_index);
  if (real_components > 0)
    return NormVerdict::yes("a real component makes every element a norm");
  int s = K->sign_at_embedding(x, embedding_index);
  if (s > 0) return NormVerdict::yes("positive at a totally complex fiber");
  return NormVerdict::no("negative at embedding #" +
                         std::to_string(embedding_index) +
                         " with no real component");
}

// Is x a local norm for L/K at the place w of K (finite, unramified data)?
inline NormVerdict local_norm_at_place(const RelativeExtension& L, const KElem& x,
                                       const PlaceAbove& w) {
  if (x.is_zero()) throw DomainError("local_norm_at_place: x must be nonzero");
  const NumberFieldPtr& K = L.base();
  if (L.is_bad_prime(w.p))
    return NormVerdict::unknown(VerdictReason::RamifiedCase,
                                "prime " + w.p.get_str() +
                                    " meets the bad set of L/K");
  ResidueShape shape = L.residue_degrees_over(w);
  if (shape.ramified_case)
    return NormVerdict::unknown(VerdictReason::RamifiedCase,
                                "reduction not squarefree at " + w.str());
  int g = shape.degree_gcd();
  long vx = K->valuation_at_place(x, w).value();
  if (g != 0 && vx % g == 0)
    return NormVerdict::yes("valuation " + std::to_string(vx) +
                            " divisible by residue-degree gcd " + std::to_string(g));
  return NormVerdict::no("valuation " + std::to_string(vx) +
                         " not divisible by residue-degree gcd " + std::to_string(g));
}

struct LocalNormBreakdown {
  NormVerdict overall;
  std::vector<std::pair<std::string, NormVerdict>> parts;  // per place of K
};

// Is x a local norm for L/K at every place of K above the place v of Q?
inline LocalNormBreakdown local_norm_test(const RelativeExtension& L,
                                          const KElem& x, const PlaceOfQ& v) {
  if (x.is_zero()) throw DomainError("local_norm_test: x must be nonzero");
  const NumberFieldPtr& K = L.base();
  LocalNormBreakdown out;
  std::vector<NormVerdict> parts;

  if (v.is_real) {
    for (int j = 0; j < K->real_embedding_count(); ++j) {
      NormVerdict nv = local_norm_real(L, x, j);
      out.parts.emplace_back("real embedding #" + std::to_string(j), nv);
      parts.push_back(nv);
    }
    out.overall = combine_verdicts(parts);
    return out;
  }

  // Quadratic extensions of Q: exact everywhere through Hilbert symbols,
  // including p = 2 and ramified primes.
  if (K->is_rational() && L.degree() == 2) {
    const KPoly& g = L.rel_poly();
    Rat B = g[1].as_rat(), C = g[0].as_rat();
    Rat d = B * B - 4 * C;
    Rat xv = x.as_rat();
    NormVerdict nv;
    if (is_square(d)) {
      nv = NormVerdict::yes("split quadratic algebra");
    } else {
      int h = hilbert_symbol(xv, d, v);
      nv = h == 1 ? NormVerdict::yes("Hilbert symbol +1")
                  : NormVerdict::no("Hilbert symbol -1");
    }
    out.parts.emplace_back("place " + v.str(), nv);
    out.overall = nv;
    return out;
  }

  if (K->is_bad_prime(v.p) || L.is_bad_prime(v.p)) {
    NormVerdict nv = NormVerdict::unknown(
        VerdictReason::RamifiedCase,
        "prime " + v.p.get_str() + " meets the bad set of the presentation");
    out.parts.emplace_back("place " + v.str(), nv);
    out.overall = nv;
    return out;
  }

  for (const PlaceAbove& w : K->places_above(v.p)) {
    NormVerdict nv = local_norm_at_place(L, x, w);
    out.parts.emplace_back("place " + w.str(), nv);
    parts.push_back(nv);
  }
  out.overall = combine_verdicts(parts);
  return out;
}

}  // namespace splitval
