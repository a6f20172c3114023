#pragma once

// Dense univariate polynomials over an abstract field.  The coefficient type
// K plugs in through four free functions (found by ADL or in this namespace):
//
//   K zero_like(const K&);     K one_like(const K&);
//   bool is_zero_elem(const K&);   K inv(const K&);
//
// plus ordinary +, -, *, == and times_int(K, long) for derivative scaling.
// Rational coefficients are wired up below; finite-field and number-field
// elements provide their own overloads.

#include <initializer_list>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace splitval {

// --- field hooks for Rat --------------------------------------------------

inline Rat zero_like(const Rat&) { return Rat(0); }
inline Rat one_like(const Rat&) { return Rat(1); }
inline bool is_zero_elem(const Rat& x) { return sgn(x) == 0; }
inline Rat inv(const Rat& x) {
  if (sgn(x) == 0) throw DomainError("inv: division by zero");
  return Rat(1) / x;
}
inline Rat times_int(const Rat& x, long n) { return x * Rat(n); }

// --------------------------------------------------------------------------

template <class K>
class Poly {
public:
  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c_(std::move(coeffs)) { normalize(); }
  Poly(std::initializer_list<K> coeffs) : c_(coeffs) { normalize(); }

  static Poly constant(const K& v) { return Poly(std::vector<K>{v}); }

  // Degree, with deg 0 = -1 by convention.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }

  const K& operator[](std::size_t i) const { return c_.at(i); }
  const std::vector<K>& coeffs() const { return c_; }

  const K& lc() const {
    if (c_.empty()) throw DomainError("lc of the zero polynomial");
    return c_.back();
  }

  K coeff_or(std::size_t i, const K& zero) const {
    return i < c_.size() ? c_[i] : zero;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

  Poly operator-() const {
    Poly r(*this);
    for (K& x : r.c_) x = zero_like(x) - x;
    return r;
  }

  friend Poly operator+(const Poly& a, const Poly& b) {
    if (a.c_.empty()) return b;
    if (b.c_.empty()) return a;
    std::vector<K> c;
    const K zero = zero_like(a.c_[0]);
    std::size_t n = std::max(a.c_.size(), b.c_.size());
    c.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
      c.push_back(a.coeff_or(i, zero) + b.coeff_or(i, zero));
    return Poly(std::move(c));
  }

  friend Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.c_.empty() || b.c_.empty()) return Poly();
    const K zero = zero_like(a.c_[0]);
    std::vector<K> c(a.c_.size() + b.c_.size() - 1, zero);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    return Poly(std::move(c));
  }

  Poly scaled(const K& s) const {
    std::vector<K> c;
    c.reserve(c_.size());
    for (const K& x : c_) c.push_back(x * s);
    return Poly(std::move(c));
  }

  // Multiply by x^k.
  Poly shifted_up(std::size_t k) const {
    if (c_.empty()) return Poly();
    std::vector<K> c(k, zero_like(c_[0]));
    c.insert(c.end(), c_.begin(), c_.end());
    return Poly(std::move(c));
  }

  K evaluate(const K& x) const {
    if (c_.empty()) return zero_like(x);
    K acc = c_.back();
    for (std::size_t i = c_.size() - 1; i-- > 0;) acc = acc * x + c_[i];
    return acc;
  }

  Poly derivative() const {
    if (c_.size() <= 1) return Poly();
    std::vector<K> c;
    c.reserve(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i)
      c.push_back(times_int(c_[i], static_cast<long>(i)));
    return Poly(std::move(c));
  }

  bool is_monic() const {
    return !c_.empty() && is_zero_elem(lc() - one_like(lc()));
  }

  Poly monic() const {
    if (c_.empty()) return *this;
    return scaled(inv(lc()));
  }

private:
  void normalize() {
    while (!c_.empty() && is_zero_elem(c_.back())) c_.pop_back();
  }

  std::vector<K> c_;
};

// Quotient and remainder with respect to a nonzero divisor.
template <class K>
std::pair<Poly<K>, Poly<K>> divmod(const Poly<K>& a, const Poly<K>& b) {
  if (b.is_zero()) throw DomainError("divmod: division by the zero polynomial");
  if (a.degree() < b.degree()) return {Poly<K>(), a};
  const K zero = zero_like(b.lc());
  const K lcinv = inv(b.lc());
  std::vector<K> rem(a.coeffs());
  std::vector<K> quo(a.degree() - b.degree() + 1, zero);
  for (int i = a.degree(); i >= b.degree(); --i) {
    K q = rem[i] * lcinv;
    if (is_zero_elem(q)) continue;
    quo[i - b.degree()] = q;
    for (int j = 0; j <= b.degree(); ++j)
      rem[i - b.degree() + j] = rem[i - b.degree() + j] - q * b[j];
  }
  return {Poly<K>(std::move(quo)), Poly<K>(std::move(rem))};
}

template <class K>
Poly<K> poly_mod(const Poly<K>& a, const Poly<K>& b) {
  return divmod(a, b).second;
}

// Monic gcd (zero if both inputs are zero).
template <class K>
Poly<K> gcd_monic(Poly<K> a, Poly<K> b) {
  while (!b.is_zero()) {
    Poly<K> r = poly_mod(a, b);
    a = b;
    b = r;
  }
  return a.is_zero() ? a : a.monic();
}

// Extended Euclid: returns (g, u, v) with u*a + v*b = g and g monic (or zero).
template <class K>
std::tuple<Poly<K>, Poly<K>, Poly<K>> poly_exgcd(const Poly<K>& a,
                                                 const Poly<K>& b) {
  if (a.is_zero() && b.is_zero()) return {Poly<K>(), Poly<K>(), Poly<K>()};
  const K one = one_like(a.is_zero() ? b.lc() : a.lc());
  Poly<K> r0 = a, r1 = b;
  Poly<K> u0 = Poly<K>::constant(one), u1;
  Poly<K> v0, v1 = Poly<K>::constant(one);
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    r0 = r1;
    r1 = r;
    Poly<K> u2 = u0 - q * u1;
    u0 = u1;
    u1 = u2;
    Poly<K> v2 = v0 - q * v1;
    v0 = v1;
    v1 = v2;
  }
  const K s = inv(r0.lc());
  return {r0.scaled(s), u0.scaled(s), v0.scaled(s)};
}

// base^e mod modulus (e >= 0).
template <class K>
Poly<K> pow_mod(const Poly<K>& base, const Int& e, const Poly<K>& modulus) {
  if (sgn(e) < 0) throw DomainError("pow_mod: negative exponent");
  if (modulus.degree() < 1)
    throw DomainError("pow_mod: modulus must have degree >= 1");
  const K one = one_like(modulus.lc());
  Poly<K> result = Poly<K>::constant(one);
  Poly<K> b = poly_mod(base, modulus);
  Int k = e;
  while (sgn(k) > 0) {
    if (mpz_odd_p(k.get_mpz_t())) result = poly_mod(result * b, modulus);
    b = poly_mod(b * b, modulus);
    k >>= 1;
  }
  return result;
}

namespace detail {
template <class K>
K elem_pow(const K& x, long e) {
  K r = one_like(x);
  K b = x;
  long k = e;
  while (k > 0) {
    if (k & 1) r = r * b;
    b = b * b;
    k >>= 1;
  }
  return r;
}
}  // namespace detail

// Resultant via the Euclidean remainder sequence.
template <class K>
K resultant(Poly<K> a, Poly<K> b) {
  if (a.is_zero() || b.is_zero()) {
    const Poly<K>& nz = a.is_zero() ? b : a;
    if (nz.is_zero()) throw DomainError("resultant of two zero polynomials");
    return zero_like(nz.lc());
  }
  K res = one_like(a.lc());
  bool negate = false;
  if (a.degree() < b.degree()) {
    if ((a.degree() & 1) && (b.degree() & 1)) negate = !negate;
    std::swap(a, b);
  }
  while (b.degree() > 0) {
    Poly<K> r = poly_mod(a, b);
    if (r.is_zero()) return zero_like(a.lc());  // common factor
    res = res * detail::elem_pow(b.lc(), static_cast<long>(a.degree() - r.degree()));
    if ((a.degree() & 1) && (b.degree() & 1)) negate = !negate;
    a = b;
    b = r;
  }
  // deg b == 0
  res = res * detail::elem_pow(b[0], static_cast<long>(a.degree()));
  return negate ? zero_like(res) - res : res;
}

// disc(f) = (-1)^{m(m-1)/2} Res(f, f') / lc(f); degree >= 1 required.
// For degree 1 this is 1.
template <class K>
K discriminant(const Poly<K>& f) {
  int m = f.degree();
  if (m < 1) throw DomainError("discriminant requires degree >= 1");
  Poly<K> df = f.derivative();
  K res = df.is_zero() ? zero_like(f.lc()) : resultant(f, df);
  K d = res * inv(f.lc());
  if (((m * (m - 1)) / 2) & 1) d = zero_like(d) - d;
  return d;
}

}  // namespace splitval
