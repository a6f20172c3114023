#pragma once

// Finite fields F_{p^f} presented as F_p[x]/(h) for a monic irreducible h,
// together with univariate factorization over them (squarefree split,
// distinct-degree split, Cantor-Zassenhaus equal-degree split).  Fields are
// immutable and shared through FqFieldPtr; elements carry their field handle
// so Poly<FqElem> works through the generic coefficient hooks.

#include <algorithm>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "poly.hpp"

namespace splitval {

class FqField;
using FqFieldPtr = std::shared_ptr<const FqField>;
struct FqElem;

namespace fqdetail {

// Plain vector arithmetic for F_p[x]: ascending coefficients in [0, p).
using Vec = std::vector<Int>;

inline void vtrim(Vec& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline Vec vreduce(Vec a, const Int& p) {
  for (Int& x : a) x = mod(x, p);
  vtrim(a);
  return a;
}

inline Vec vadd(const Vec& a, const Vec& b, const Int& p) {
  Vec c(std::max(a.size(), b.size()), Int(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i < a.size()) c[i] += a[i];
    if (i < b.size()) c[i] += b[i];
    c[i] = mod(c[i], p);
  }
  vtrim(c);
  return c;
}

inline Vec vsub(const Vec& a, const Vec& b, const Int& p) {
  Vec c(std::max(a.size(), b.size()), Int(0));
  for (std::size_t i = 0; i < c.size(); ++i) {
    Int x = i < a.size() ? a[i] : Int(0);
    Int y = i < b.size() ? b[i] : Int(0);
    c[i] = mod(x - y, p);
  }
  vtrim(c);
  return c;
}

inline Vec vmul(const Vec& a, const Vec& b, const Int& p) {
  if (a.empty() || b.empty()) return {};
  Vec c(a.size() + b.size() - 1, Int(0));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  for (Int& x : c) x = mod(x, p);
  vtrim(c);
  return c;
}

// Division with remainder; b need not be monic.
inline std::pair<Vec, Vec> vdivmod(Vec a, const Vec& b, const Int& p) {
  if (b.empty()) throw DomainError("vdivmod: division by zero polynomial");
  Int linv = invmod(b.back(), p);
  Vec q;
  if (a.size() >= b.size()) q.assign(a.size() - b.size() + 1, Int(0));
  while (a.size() >= b.size()) {
    Int coef = mod(a.back() * linv, p);
    std::size_t shift = a.size() - b.size();
    q[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i)
      a[shift + i] = mod(a[shift + i] - coef * b[i], p);
    vtrim(a);
  }
  vtrim(q);
  return {q, a};
}

inline Vec vmod(const Vec& a, const Vec& b, const Int& p) {
  return vdivmod(a, b, p).second;
}

inline Vec vpowmod(Vec base, Int e, const Vec& modpoly, const Int& p) {
  Vec r{Int(1)};
  base = vmod(base, modpoly, p);
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) r = vmod(vmul(r, base, p), modpoly, p);
    base = vmod(vmul(base, base, p), modpoly, p);
    e >>= 1;
  }
  return r;
}

inline Vec vgcd(Vec a, Vec b, const Int& p) {
  while (!b.empty()) {
    Vec r = vmod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty() && a.back() != 1) {
    Int linv = invmod(a.back(), p);
    for (Int& x : a) x = mod(x * linv, p);
  }
  return a;
}

// Extended gcd: returns (g, u) with u*a = g mod m, g monic.  Enough for
// inversion: when gcd(a, m) = 1 the inverse of a mod m is u.
inline std::pair<Vec, Vec> vexgcd_inverse(const Vec& a, const Vec& m,
                                          const Int& p) {
  Vec r0 = m, r1 = a, u0 = {}, u1 = {Int(1)};
  while (!r1.empty()) {
    auto [q, r] = vdivmod(r0, r1, p);
    Vec u2 = vsub(u0, vmul(q, u1, p), p);
    r0 = std::move(r1);
    r1 = std::move(r);
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  if (!r0.empty() && r0.back() != 1) {
    Int linv = invmod(r0.back(), p);
    for (Int& x : r0) x = mod(x * linv, p);
    for (Int& x : u0) x = mod(x * linv, p);
  }
  return {r0, u0};
}

// Irreducibility of monic h over F_p by the Frobenius power criterion:
// x^{p^f} = x mod h, and for every prime l | f, gcd(x^{p^{f/l}} - x, h) = 1.
inline bool virreducible(const Vec& h, const Int& p) {
  int f = static_cast<int>(h.size()) - 1;
  if (f < 1) return false;
  Vec x{Int(0), Int(1)};
  Vec frob = vpowmod(x, pow_int(p, f), h, p);
  if (vsub(frob, x, p) != Vec{}) return false;
  std::vector<int> prime_divisors;
  int rest = f;
  for (int l = 2; l <= rest; ++l) {
    if (rest % l != 0) continue;
    prime_divisors.push_back(l);
    while (rest % l == 0) rest /= l;
  }
  for (int l : prime_divisors) {
    Vec y = vpowmod(x, pow_int(p, f / l), h, p);
    Vec g = vgcd(vsub(y, x, p), h, p);
    if (g.size() != 1) return false;
  }
  return true;
}

}  // namespace fqdetail

class FqField : public std::enable_shared_from_this<FqField> {
public:
  // F_p itself: modulus x, so every element is a constant.
  static FqFieldPtr prime_field(const Int& p) {
    return build(p, fqdetail::Vec{Int(0), Int(1)}, /*check_irred=*/false);
  }

  // F_p[x]/(h); h given by ascending coefficients, must reduce to a monic
  // irreducible of degree >= 1 over F_p.
  static FqFieldPtr make(const Int& p, const std::vector<Int>& h_coeffs) {
    fqdetail::Vec h = fqdetail::vreduce(h_coeffs, p);
    if (h.size() < 2) throw DomainError("FqField: modulus must have degree >= 1");
    if (h.back() != 1) throw DomainError("FqField: modulus must be monic mod p");
    if (h.size() > 2 && !fqdetail::virreducible(h, p))
      throw DomainError("FqField: modulus is reducible mod p");
    return build(p, std::move(h), false);
  }

  const Int& p() const { return p_; }
  int degree() const { return f_; }
  Int order() const { return pow_int(p_, f_); }
  const std::vector<Int>& modulus() const { return h_; }

  FqElem zero() const;
  FqElem one() const;
  FqElem from_int(const Int& n) const;
  // Residue class of x (the image of the polynomial generator).
  FqElem gen() const;
  FqElem from_coeffs(const std::vector<Int>& c) const;
  FqElem random_element(Rng& rng) const;

  bool same_as(const FqField& other) const {
    return p_ == other.p_ && h_ == other.h_;
  }

private:
  static FqFieldPtr build(const Int& p, fqdetail::Vec h, bool) {
    if (p < 2 || !is_prime(p)) throw DomainError("FqField: p must be prime");
    auto fld = std::shared_ptr<FqField>(new FqField());
    fld->p_ = p;
    fld->h_ = std::move(h);
    fld->f_ = static_cast<int>(fld->h_.size()) - 1;
    return fld;
  }
  FqField() = default;

  Int p_;
  fqdetail::Vec h_;
  int f_ = 0;
};

struct FqElem {
  FqFieldPtr field;
  fqdetail::Vec c;  // reduced representative, degree < f, coefficients in [0,p)

  const Int& p() const { return field->p(); }

  bool is_zero() const { return c.empty(); }
  bool is_one() const { return c.size() == 1 && c[0] == 1; }

  // Canonical comparison key: coefficient vector padded with zeros.
  friend bool operator==(const FqElem& a, const FqElem& b) {
    return a.c == b.c && a.field->same_as(*b.field);
  }
  friend bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

  friend FqElem operator+(const FqElem& a, const FqElem& b) {
    a.require_same_field(b);
    return {a.field, fqdetail::vadd(a.c, b.c, a.p())};
  }
  friend FqElem operator-(const FqElem& a, const FqElem& b) {
    a.require_same_field(b);
    return {a.field, fqdetail::vsub(a.c, b.c, a.p())};
  }
  FqElem operator-() const {
    return {field, fqdetail::vsub({}, c, p())};
  }
  friend FqElem operator*(const FqElem& a, const FqElem& b) {
    a.require_same_field(b);
    return {a.field,
            fqdetail::vmod(fqdetail::vmul(a.c, b.c, a.p()), a.field->modulus(),
                           a.p())};
  }

  FqElem pow(Int e) const {
    if (e < 0) return inverse().pow(-e);
    return {field, fqdetail::vpowmod(c, std::move(e), field->modulus(), p())};
  }

  FqElem inverse() const {
    if (is_zero()) throw DomainError("FqElem: inverse of zero");
    auto [g, u] = fqdetail::vexgcd_inverse(c, field->modulus(), p());
    if (g.size() != 1)
      throw DomainError("FqElem: element not invertible (modulus reducible?)");
    return {field, u};
  }

  FqElem frobenius() const { return pow(p()); }

  // Total order used only to make factor lists deterministic.
  friend bool operator<(const FqElem& a, const FqElem& b) {
    if (a.c.size() != b.c.size()) return a.c.size() < b.c.size();
    for (std::size_t i = a.c.size(); i-- > 0;)
      if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
    return false;
  }

  std::string str() const {
    if (c.empty()) return "0";
    std::string s;
    for (std::size_t i = c.size(); i-- > 0;) {
      if (c[i] == 0) continue;
      if (!s.empty()) s += " + ";
      if (i == 0 || c[i] != 1) s += c[i].get_str();
      if (i > 0 && c[i] != 1) s += "*";
      if (i == 1) s += "u";
      if (i > 1) s += "u^" + std::to_string(i);
    }
    return s.empty() ? "0" : s;
  }

  void require_same_field(const FqElem& other) const {
    if (field.get() == other.field.get()) return;
    if (!field->same_as(*other.field))
      throw DomainError("FqElem: mixed finite fields");
  }
};

inline FqElem FqField::zero() const { return {shared_from_this(), {}}; }
inline FqElem FqField::one() const { return from_int(1); }
inline FqElem FqField::from_int(const Int& n) const {
  fqdetail::Vec c{mod(n, p_)};
  fqdetail::vtrim(c);
  return {shared_from_this(), std::move(c)};
}
inline FqElem FqField::gen() const {
  return from_coeffs({Int(0), Int(1)});
}
inline FqElem FqField::from_coeffs(const std::vector<Int>& c) const {
  fqdetail::Vec v = fqdetail::vmod(fqdetail::vreduce(c, p_), h_, p_);
  return {shared_from_this(), std::move(v)};
}
inline FqElem FqField::random_element(Rng& rng) const {
  std::vector<Int> c;
  c.reserve(static_cast<std::size_t>(f_));
  for (int i = 0; i < f_; ++i) c.push_back(random_int(rng, 0, p_ - 1));
  return from_coeffs(c);
}

// --- coefficient hooks so Poly<FqElem> works ------------------------------

inline FqElem zero_like(const FqElem& x) { return x.field->zero(); }
inline FqElem one_like(const FqElem& x) { return x.field->one(); }
inline bool is_zero_elem(const FqElem& x) { return x.is_zero(); }
inline FqElem inv(const FqElem& x) { return x.inverse(); }
inline FqElem times_int(const FqElem& x, long n) {
  return x * x.field->from_int(Int(n));
}

using FqPoly = Poly<FqElem>;

inline FqPoly fq_poly_from_int_coeffs(const FqFieldPtr& F,
                                      const std::vector<Int>& coeffs) {
  std::vector<FqElem> c;
  c.reserve(coeffs.size());
  for (const Int& x : coeffs) c.push_back(F->from_int(x));
  return FqPoly(std::move(c));
}

inline FqPoly fq_x(const FqFieldPtr& F) {
  return FqPoly({F->zero(), F->one()});
}

// --- factorization over F_q ------------------------------------------------

struct FqFactor {
  FqPoly factor;  // monic irreducible
  int multiplicity;
};

namespace fqdetail {

inline bool poly_less(const FqPoly& a, const FqPoly& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree();
  for (int i = a.degree(); i >= 0; --i) {
    const FqElem& x = a[static_cast<std::size_t>(i)];
    const FqElem& y = b[static_cast<std::size_t>(i)];
    if (x != y) return x < y;
  }
  return false;
}

// p-th root of g = sum c_i x^{pi}: root has coefficients c_i^{p^{f-1}}.
inline FqPoly pth_root(const FqPoly& g, const FqFieldPtr& F) {
  long pl = F->p().get_si();
  Int e = pow_int(F->p(), F->degree() - 1);
  std::vector<FqElem> out;
  for (int i = 0; i <= g.degree(); i += pl)
    out.push_back(g[static_cast<std::size_t>(i)].pow(e));
  return FqPoly(std::move(out));
}

inline void squarefree_decomp(const FqPoly& fin, const FqFieldPtr& F, int mult,
                              std::vector<std::pair<FqPoly, int>>& out) {
  FqPoly f = fin.monic();
  if (f.degree() < 1) return;
  FqPoly d = f.derivative();
  if (d.is_zero()) {
    squarefree_decomp(pth_root(f, F), F,
                      mult * static_cast<int>(F->p().get_si()), out);
    return;
  }
  FqPoly c = gcd_monic(f, d);
  FqPoly w = divmod(f, c).first;
  int i = 1;
  while (w.degree() > 0) {
    FqPoly y = gcd_monic(w, c);
    FqPoly piece = divmod(w, y).first;
    if (piece.degree() > 0) out.emplace_back(piece.monic(), mult * i);
    w = y;
    c = divmod(c, y).first;
    ++i;
  }
  if (c.degree() > 0)
    squarefree_decomp(pth_root(c.monic(), F), F,
                      mult * static_cast<int>(F->p().get_si()), out);
}

// Equal-degree splitting of a squarefree monic product of irreducibles all of
// degree d, via Cantor-Zassenhaus (odd q) or the trace map (q even).
inline void equal_degree_split(const FqPoly& g, int d, const FqFieldPtr& F,
                               Rng& rng, std::vector<FqPoly>& out) {
  if (g.degree() == d) {
    out.push_back(g);
    return;
  }
  Int q = F->order();
  FqPoly splitter;
  for (int attempt = 0;; ++attempt) {
    if (attempt > 400)
      throw RetryExhaustedError("equal-degree splitting did not converge");
    std::vector<FqElem> ac;
    for (int i = 0; i < g.degree(); ++i) ac.push_back(F->random_element(rng));
    FqPoly a(std::move(ac));
    if (a.degree() < 1) continue;
    FqPoly h = gcd_monic(a, g);
    if (h.degree() > 0 && h.degree() < g.degree()) {
      splitter = h;
      break;
    }
    if (mpz_odd_p(q.get_mpz_t())) {
      Int e = (pow_int(q, d) - 1) / 2;
      FqPoly b = pow_mod(a, e, g);
      FqPoly bm1 = b - FqPoly::constant(F->one());
      FqPoly t = gcd_monic(bm1, g);
      if (t.degree() > 0 && t.degree() < g.degree()) {
        splitter = t;
        break;
      }
    } else {
      // trace map sum a^{2^j}, j < d*f
      long steps = static_cast<long>(d) * F->degree();
      FqPoly t = a, cur = a;
      for (long j = 1; j < steps; ++j) {
        cur = poly_mod(cur * cur, g);
        t = t + cur;
      }
      FqPoly h2 = gcd_monic(t, g);
      if (h2.degree() > 0 && h2.degree() < g.degree()) {
        splitter = h2;
        break;
      }
    }
  }
  equal_degree_split(splitter, d, F, rng, out);
  equal_degree_split(divmod(g, splitter).first.monic(), d, F, rng, out);
}

}  // namespace fqdetail

// Full factorization of a nonzero polynomial over F_q.  Returns the monic
// irreducible factors with multiplicities, sorted deterministically (degree,
// then coefficients); the unit leading coefficient is dropped.
inline std::vector<FqFactor> factor_mod(const FqPoly& f, const FqFieldPtr& F,
                                        Rng& rng) {
  if (f.is_zero()) throw DomainError("factor_mod: zero polynomial");
  std::vector<FqFactor> result;
  if (f.degree() < 1) return result;

  std::vector<std::pair<FqPoly, int>> sqf;
  fqdetail::squarefree_decomp(f, F, 1, sqf);

  for (auto& [part, mult] : sqf) {
    // distinct-degree split of the squarefree part
    FqPoly g = part;
    FqPoly x = fq_x(F);
    FqPoly h = poly_mod(x, g);
    for (int d = 1; g.degree() >= 2 * d; ++d) {
      h = pow_mod(h, F->order(), g);
      FqPoly gd = gcd_monic(h - x, g);
      if (gd.degree() > 0) {
        std::vector<FqPoly> pieces;
        fqdetail::equal_degree_split(gd, d, F, rng, pieces);
        for (FqPoly& irr : pieces) result.push_back({irr, mult});
        g = divmod(g, gd).first.monic();
        h = poly_mod(h, g);
      }
    }
    if (g.degree() > 0) result.push_back({g, mult});
  }

  std::sort(result.begin(), result.end(), [](const FqFactor& a, const FqFactor& b) {
    return fqdetail::poly_less(a.factor, b.factor);
  });
  return result;
}

// Roots of f in F_q with multiplicities, sorted by the element order.
inline std::vector<std::pair<FqElem, int>> roots_in_field(const FqPoly& f,
                                                          const FqFieldPtr& F,
                                                          Rng& rng) {
  std::vector<std::pair<FqElem, int>> roots;
  for (const FqFactor& fac : factor_mod(f, F, rng))
    if (fac.factor.degree() == 1)
      roots.emplace_back(-fac.factor[0], fac.multiplicity);
  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return roots;
}

inline bool is_irreducible_mod(const FqPoly& f, const FqFieldPtr& F, Rng& rng) {
  if (f.degree() < 1) return false;
  if (f.degree() == 1) return true;
  auto facs = factor_mod(f, F, rng);
  return facs.size() == 1 && facs[0].multiplicity == 1;
}

// Degrees (with multiplicity of the factor) of the irreducible factors of a
// monic integer polynomial reduced mod p; the shape used to constrain Galois
// data and to lay out places over p.
inline std::vector<int> factor_degrees_mod_p(const std::vector<Int>& coeffs,
                                             const Int& p, Rng& rng) {
  FqFieldPtr F = FqField::prime_field(p);
  FqPoly f = fq_poly_from_int_coeffs(F, coeffs);
  std::vector<int> degs;
  for (const FqFactor& fac : factor_mod(f, F, rng))
    for (int i = 0; i < fac.multiplicity; ++i) degs.push_back(fac.factor.degree());
  std::sort(degs.begin(), degs.end());
  return degs;
}

}  // namespace splitval
