#pragma once

// Number fields K = Q[t]/(P) for monic irreducible P, with:
//   - certified irreducibility testing over Q (root scan, mod-p degree
//     patterns, exact bounded searches for small-degree factors),
//   - real embeddings as isolated roots of P,
//   - places above an unramified rational prime p via factoring P mod p,
//   - exact valuations at such places through Hensel lifting,
//   - relative extensions L = K[y]/(g) with residue-degree data at places.
//
// "Bad primes" of a presentation are the primes dividing coefficient
// denominators or the discriminant; every place machinery call refuses those
// conservatively (RamifiedPrimeError) and callers are expected to have put
// them into the exceptional set S.

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "fq.hpp"
#include "poly.hpp"
#include "polyq.hpp"

namespace splitval {

enum class Ternary { Yes, No, Unknown };

inline const char* to_string(Ternary t) {
  switch (t) {
    case Ternary::Yes: return "yes";
    case Ternary::No: return "no";
    default: return "unknown";
  }
}

// --- irreducibility certification over Q ----------------------------------

namespace nfdetail {

// Monic integer model of a monic rational polynomial: Q(x) = d^n P(x/d)
// where d is the coefficient-denominator lcm.  Factor degrees over Q match.
inline std::vector<Int> integer_model(const PolyQ& P) {
  Int d = denominator_lcm(P);
  int n = P.degree();
  std::vector<Int> q(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    Rat c = P[static_cast<std::size_t>(i)] * pow_rat(Rat(d), n - i);
    if (den(c) != 1) throw DomainError("integer_model: clearing failed");
    q[static_cast<std::size_t>(i)] = num(c);
  }
  return q;
}

inline Int eval_int(const std::vector<Int>& q, const Int& x) {
  Int acc = 0;
  for (std::size_t i = q.size(); i-- > 0;) acc = acc * x + q[i];
  return acc;
}

// Exact search for a monic integer factor of degree d (d = 2 or 3) of a
// monic integer polynomial with nonzero constant term.  Middle coefficients
// are bounded through the Cauchy root bound; the constant term divides q[0].
inline bool has_monic_factor_of_degree(const std::vector<Int>& q, int d,
                                       Factorizer& fz) {
  int n = static_cast<int>(q.size()) - 1;
  if (d < 1 || d >= n) return false;
  std::vector<Rat> rc(q.begin(), q.end());
  PolyQ Q(rc);
  Rat Brat = cauchy_root_bound(Q);
  Int B = num(Brat) / den(Brat) + 1;

  auto fac = fz.factor(Rat(splitval::abs(q[0])));
  std::vector<Int> divs = all_divisors(fac, 100000);

  auto divides = [&](const PolyQ& cand) {
    return divmod(Q, cand).second.is_zero();
  };

  if (d == 2) {
    Int A = 2 * B;
    if (A > 2000000) throw DomainError("quadratic factor search bound too large");
    for (const Int& b0 : divs)
      for (int s = 0; s < 2; ++s) {
        Int b = s ? -b0 : b0;
        for (Int a = -A; a <= A; ++a)
          if (divides(PolyQ({Rat(b), Rat(a), Rat(1)}))) return true;
      }
    return false;
  }
  if (d == 3) {
    Int A1 = 3 * B, A2 = 3 * B * B;
    if (2 * A1 * (2 * A2 + 1) * Int(static_cast<long>(divs.size())) > 4000000)
      throw DomainError("cubic factor search bound too large");
    for (const Int& b0 : divs)
      for (int s = 0; s < 2; ++s) {
        Int b = s ? -b0 : b0;
        for (Int a2 = -A1; a2 <= A1; ++a2)
          for (Int a1 = -A2; a1 <= A2; ++a1)
            if (divides(PolyQ({Rat(b), Rat(a1), Rat(a2), Rat(1)}))) return true;
      }
    return false;
  }
  throw DomainError("factor search only implemented for degrees 2 and 3");
}

}  // namespace nfdetail

// Decides irreducibility of a monic polynomial over Q.  Returns true/false
// with certainty; throws CannotCertifyError when every implemented method is
// exhausted without a decision.
inline bool is_irreducible_over_Q(const PolyQ& P, Factorizer& fz) {
  int n = P.degree();
  if (n < 1) return false;
  if (!P.is_monic()) throw DomainError("irreducibility test expects monic input");
  if (n == 1) return true;
  if (gcd_monic(P, P.derivative()).degree() > 0) return false;  // not squarefree

  std::vector<Int> q = nfdetail::integer_model(P);
  if (q[0] == 0) return false;  // root at 0

  // Integer root scan (monic: rational roots are integers dividing q[0]).
  std::vector<Int> divs;
  try {
    divs = all_divisors(fz.factor(Rat(splitval::abs(q[0]))), 100000);
  } catch (const DomainError&) {
    throw CannotCertifyError("constant term has too many divisors for root scan");
  } catch (const UnfactoredError&) {
    throw CannotCertifyError("constant term resists factoring for root scan");
  }
  for (const Int& r : divs) {
    if (nfdetail::eval_int(q, r) == 0) return false;
    if (nfdetail::eval_int(q, -r) == 0) return false;
  }
  if (n <= 3) return true;

  // Mod-p factor degree patterns: intersect achievable proper factor degrees.
  std::vector<Rat> rc(q.begin(), q.end());
  Rat discQ = discriminant(PolyQ(rc));
  std::vector<bool> possible(static_cast<std::size_t>(n), false);
  for (int d2 = 2; d2 <= n - 2; ++d2) possible[static_cast<std::size_t>(d2)] = true;

  Rng rng(987001);
  int used = 0;
  for (long p : detail::small_primes()) {
    bool any = false;
    for (int d2 = 2; d2 <= n - 2; ++d2) any |= possible[static_cast<std::size_t>(d2)];
    if (!any) return true;
    if (mod(num(discQ), Int(p)) == 0) continue;
    std::vector<int> degs = factor_degrees_mod_p(q, Int(p), rng);
    // subset sums achievable from the degree multiset
    std::vector<bool> reach(static_cast<std::size_t>(n) + 1, false);
    reach[0] = true;
    for (int dgr : degs)
      for (int sum = n; sum >= dgr; --sum)
        if (reach[static_cast<std::size_t>(sum - dgr)])
          reach[static_cast<std::size_t>(sum)] = true;
    for (int d2 = 2; d2 <= n - 2; ++d2)
      if (!reach[static_cast<std::size_t>(d2)]) possible[static_cast<std::size_t>(d2)] = false;
    if (++used >= 40) break;
  }
  bool any = false;
  for (int d2 = 2; d2 <= n - 2; ++d2) any |= possible[static_cast<std::size_t>(d2)];
  if (!any) return true;

  // Exact searches knock out a degree d together with its cofactor n - d.
  for (int d2 : {2, 3}) {
    bool relevant = d2 <= n - 2 && (possible[static_cast<std::size_t>(d2)] ||
                                    (n - d2 >= 2 && possible[static_cast<std::size_t>(n - d2)]));
    if (!relevant) continue;
    bool found;
    try {
      found = nfdetail::has_monic_factor_of_degree(q, d2, fz);
    } catch (const DomainError&) {
      continue;  // search infeasible; other degrees may still settle it
    } catch (const UnfactoredError&) {
      continue;
    }
    if (found) return false;
    possible[static_cast<std::size_t>(d2)] = false;
    if (n - d2 >= 2 && n - d2 <= n - 2) possible[static_cast<std::size_t>(n - d2)] = false;
  }
  any = false;
  for (int d2 = 2; d2 <= n - 2; ++d2) any |= possible[static_cast<std::size_t>(d2)];
  if (!any) return true;
  throw CannotCertifyError("cannot decide irreducibility of " + to_string(P, "t"));
}

// --- the field handle ------------------------------------------------------

class NumberField;
using NumberFieldPtr = std::shared_ptr<const NumberField>;

struct KElem;

// A place of K above an unramified rational prime p, carried as a monic
// integer lift of the corresponding irreducible factor of P mod p.  The
// residue field is F_{p^f} with the class of t mapped to the generator class.
struct PlaceAbove {
  Int p;
  std::vector<Int> h_lift;  // ascending, coefficients in [0,p), monic
  int f = 1;
  int index = 0;  // position within the deterministic factor order at p
  FqFieldPtr res_field;

  std::string str() const {
    std::string s = "(" + p.get_str() + "; deg " + std::to_string(f) + ", #" +
                    std::to_string(index) + ")";
    return s;
  }
};

class NumberField : public std::enable_shared_from_this<NumberField> {
public:
  static NumberFieldPtr make(const PolyQ& P) {
    Factorizer fz(1);
    return make(P, fz);
  }

  static NumberFieldPtr make(const PolyQ& P, Factorizer& fz) {
    if (P.degree() < 1) throw DomainError("NumberField: min poly must be nonconstant");
    if (!P.is_monic()) throw DomainError("NumberField: min poly must be monic");
    if (!is_irreducible_over_Q(P, fz))
      throw DomainError("NumberField: " + to_string(P, "t") + " is reducible over Q");
    auto K = std::shared_ptr<NumberField>(new NumberField());
    K->P_ = P;
    K->n_ = P.degree();
    K->disc_ = discriminant(P);
    // primes dividing coefficient denominators or the discriminant
    std::vector<Int> bad;
    for (const auto& [pp, e] : fz.factor(Rat(denominator_lcm(P))).terms)
      bad.push_back(pp);
    if (K->n_ >= 2) {
      for (const auto& [pp, e] : fz.factor(K->disc_).terms) bad.push_back(pp);
    }
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    K->bad_primes_ = std::move(bad);
    K->real_roots_ = isolate_real_roots(P);
    return K;
  }

  const PolyQ& min_poly() const { return P_; }
  int degree() const { return n_; }
  const Rat& disc() const { return disc_; }
  const std::vector<Int>& bad_primes() const { return bad_primes_; }
  bool is_bad_prime(const Int& p) const {
    return std::binary_search(bad_primes_.begin(), bad_primes_.end(), p);
  }
  bool is_rational() const { return n_ == 1; }

  int real_embedding_count() const { return static_cast<int>(real_roots_.size()); }
  const std::vector<RealRoot>& real_embeddings() const { return real_roots_; }
  bool is_totally_imaginary() const { return real_roots_.empty(); }

  KElem zero() const;
  KElem one() const;
  KElem gen() const;
  KElem from_rat(const Rat& x) const;
  KElem from_poly(const PolyQ& rep) const;

  bool same_as(const NumberField& other) const { return P_ == other.P_; }

  std::vector<PlaceAbove> places_above(const Int& p) const {
    if (p < 2) throw DomainError("places_above: p must be a prime");
    if (is_bad_prime(p))
      throw RamifiedPrimeError("prime " + p.get_str() +
                               " is a bad prime for this field presentation");
    FqFieldPtr Fp = FqField::prime_field(p);
    std::vector<FqElem> cc;
    for (int i = 0; i <= n_; ++i)
      cc.push_back(Fp->from_int(reduce_coeff(P_[static_cast<std::size_t>(i)], p)));
    FqPoly pbar(std::move(cc));
    Rng rng(7);
    std::vector<PlaceAbove> out;
    int idx = 0;
    for (const FqFactor& fac : factor_mod(pbar, Fp, rng)) {
      if (fac.multiplicity != 1)
        throw RamifiedPrimeError("unexpected repeated factor mod " + p.get_str());
      PlaceAbove w;
      w.p = p;
      w.f = fac.factor.degree();
      w.index = idx++;
      for (int i = 0; i <= fac.factor.degree(); ++i) {
        const FqElem& e = fac.factor[static_cast<std::size_t>(i)];
        w.h_lift.push_back(e.c.empty() ? Int(0) : e.c[0]);
      }
      w.res_field = FqField::make(p, w.h_lift);
      out.push_back(std::move(w));
    }
    return out;
  }

  bool splits_completely(const Int& p) const {
    for (const PlaceAbove& w : places_above(p))
      if (w.f != 1) return false;
    return true;
  }

  FqElem residue(const KElem& x, const PlaceAbove& w) const;
  Valuation valuation_at_place(const KElem& x, const PlaceAbove& w) const;
  int sign_at_embedding(const KElem& x, int embedding_index) const;

private:
  NumberField() = default;

  static Int reduce_coeff(const Rat& c, const Int& p) {
    if (mod(den(c), p) == 0)
      throw RamifiedPrimeError("coefficient denominator divisible by " + p.get_str());
    return mod(num(c) * invmod(mod(den(c), p), p), p);
  }

  PolyQ P_;
  int n_ = 0;
  Rat disc_;
  std::vector<Int> bad_primes_;
  std::vector<RealRoot> real_roots_;

  friend struct KElem;
};

struct KElem {
  NumberFieldPtr K;
  PolyQ rep;  // degree < deg P

  bool is_zero() const { return rep.is_zero(); }
  bool is_rational() const { return rep.degree() <= 0; }
  Rat as_rat() const {
    if (rep.is_zero()) return Rat(0);
    if (rep.degree() > 0) throw DomainError("KElem: not a rational element");
    return rep[0];
  }

  friend bool operator==(const KElem& a, const KElem& b) {
    return a.rep == b.rep && a.K->same_as(*b.K);
  }
  friend bool operator!=(const KElem& a, const KElem& b) { return !(a == b); }

  friend KElem operator+(const KElem& a, const KElem& b) {
    a.require_same_field(b);
    return {a.K, a.rep + b.rep};
  }
  friend KElem operator-(const KElem& a, const KElem& b) {
    a.require_same_field(b);
    return {a.K, a.rep - b.rep};
  }
  KElem operator-() const { return {K, -rep}; }
  friend KElem operator*(const KElem& a, const KElem& b) {
    a.require_same_field(b);
    return {a.K, poly_mod(a.rep * b.rep, a.K->min_poly())};
  }
  friend KElem operator*(const Rat& s, const KElem& a) {
    return {a.K, a.rep.scaled(s)};
  }

  KElem inverse() const {
    if (rep.is_zero()) throw DomainError("KElem: inverse of zero");
    auto [g, u, v] = poly_exgcd(rep, K->min_poly());
    if (g.degree() != 0)
      throw DomainError("KElem: element not invertible");
    return {K, poly_mod(u, K->min_poly())};
  }

  friend KElem operator/(const KElem& a, const KElem& b) { return a * b.inverse(); }

  KElem pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    KElem r = K->one(), base = *this;
    while (e > 0) {
      if (e & 1) r = r * base;
      base = base * base;
      e >>= 1;
    }
    return r;
  }

  // Field norm N_{K/Q}: the resultant Res(P, rep) for monic P.
  Rat norm() const {
    if (rep.is_zero()) return Rat(0);
    if (rep.degree() == 0) return pow_rat(rep[0], K->degree());
    return resultant(K->min_poly(), rep);
  }

  std::string str(const std::string& var = "t") const { return to_string(rep, var); }

  void require_same_field(const KElem& other) const {
    if (K.get() == other.K.get()) return;
    if (!K->same_as(*other.K)) throw DomainError("KElem: mixed number fields");
  }
};

inline KElem NumberField::zero() const { return {shared_from_this(), PolyQ()}; }
inline KElem NumberField::one() const { return from_rat(Rat(1)); }
inline KElem NumberField::gen() const {
  return from_poly(PolyQ({Rat(0), Rat(1)}));
}
inline KElem NumberField::from_rat(const Rat& x) const {
  return {shared_from_this(), PolyQ::constant(x)};
}
inline KElem NumberField::from_poly(const PolyQ& r) const {
  return {shared_from_this(), poly_mod(r, P_)};
}

inline FqElem NumberField::residue(const KElem& x, const PlaceAbove& w) const {
  if (!x.K->same_as(*this)) throw DomainError("residue: element of another field");
  std::vector<Int> c;
  for (int i = 0; i <= x.rep.degree(); ++i)
    c.push_back(reduce_coeff(x.rep[static_cast<std::size_t>(i)], w.p));
  return w.res_field->from_coeffs(c);
}

// --- valuations through Hensel lifting ------------------------------------

namespace nfdetail {

// Lift the factorization P = h * c mod p to mod p^N (monic h).  Standard
// quadratic Hensel iteration carrying Bezout data.  Returns h mod p^N.
inline fqdetail::Vec hensel_lift_factor(const PolyQ& P, fqdetail::Vec h,
                                        const Int& p, long N) {
  using namespace fqdetail;
  auto reduce_P = [&](const Int& m) {
    Vec out;
    for (int i = 0; i <= P.degree(); ++i) {
      const Rat& c = P[static_cast<std::size_t>(i)];
      Int d = mod(den(c), m);
      out.push_back(mod(num(c) * invmod(d, m), m));
    }
    vtrim(out);
    return out;
  };

  Int m = p;
  Vec Pm = reduce_P(m);
  Vec c = vdivmod(Pm, h, m).first;
  // Bezout: s*c + t*h = 1 over F_p
  auto [g, s] = vexgcd_inverse(c, h, p);
  if (g.size() != 1)
    throw DomainError("hensel_lift_factor: factors are not coprime mod p");
  Vec t = vdivmod(vsub({Int(1)}, vmul(s, c, p), p), h, p).first;

  Int target = pow_int(p, N);
  while (m < target) {
    Int m2 = m * m;
    if (m2 > target) m2 = target;
    Vec Pm2 = reduce_P(m2);
    Vec e = vsub(Pm2, vmul(h, c, m2), m2);
    auto [q, r] = vdivmod(vmul(s, e, m2), h, m2);
    h = vadd(h, r, m2);
    c = vadd(c, vadd(vmul(t, e, m2), vmul(q, c, m2), m2), m2);
    Vec b = vsub(vadd(vmul(s, c, m2), vmul(t, h, m2), m2), {Int(1)}, m2);
    auto [q2, r2] = vdivmod(vmul(s, b, m2), h, m2);
    s = vsub(s, r2, m2);
    t = vsub(vsub(t, vmul(t, b, m2), m2), vmul(q2, c, m2), m2);
    m = m2;
  }
  return h;
}

}  // namespace nfdetail

inline Valuation NumberField::valuation_at_place(const KElem& x,
                                                 const PlaceAbove& w) const {
  if (!x.K->same_as(*this))
    throw DomainError("valuation_at_place: element of another field");
  if (x.is_zero()) return Valuation::infinity();
  const Int& p = w.p;

  // Strip the power of p so the remaining representative is p-integral with
  // at least one unit coefficient.
  long m = 0;
  bool first = true;
  for (int i = 0; i <= x.rep.degree(); ++i) {
    const Rat& c = x.rep[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    long v = valuation_nonzero(c, p);
    if (first || v < m) m = v;
    first = false;
  }
  PolyQ X0 = x.rep.scaled(pow_rat(Rat(p), -m));

  // Since p is unramified here, O_w has Z_p-basis 1, t, ..., t^{f-1} and the
  // valuation of a p-integral element is the minimum coefficient valuation
  // once reduced mod (H, p^N) for a lifted factor H.  The norm bounds the
  // valuation: v_w(X0) <= v_p(N(X0)).
  Rat nrm = (X0.degree() == 0) ? pow_rat(X0[0], n_) : resultant(P_, X0);
  long N = valuation_nonzero(nrm, p) + 1;
  Int M = pow_int(p, N);

  fqdetail::Vec H(w.h_lift.begin(), w.h_lift.end());
  if (N > 1) H = nfdetail::hensel_lift_factor(P_, H, p, N);

  fqdetail::Vec xv;
  for (int i = 0; i <= X0.degree(); ++i) {
    const Rat& c = X0[static_cast<std::size_t>(i)];
    Int d = mod(den(c), M);
    xv.push_back(mod(num(c) * invmod(d, M), M));
  }
  fqdetail::vtrim(xv);
  fqdetail::Vec R = fqdetail::vmod(xv, H, M);
  if (R.empty())
    throw DomainError("valuation_at_place: precision bound violated");
  long v = -1;
  for (const Int& e : R) {
    if (e == 0) continue;
    long ve = valuation_int(e, p);
    if (v < 0 || ve < v) v = ve;
  }
  if (v < 0 || v >= N)
    throw DomainError("valuation_at_place: precision bound violated");
  return Valuation::of(m + v);
}

inline int NumberField::sign_at_embedding(const KElem& x, int embedding_index) const {
  if (!x.K->same_as(*this))
    throw DomainError("sign_at_embedding: element of another field");
  if (embedding_index < 0 || embedding_index >= real_embedding_count())
    throw DomainError("sign_at_embedding: no such real embedding");
  if (x.rep.degree() <= 0) return x.rep.is_zero() ? 0 : sgn(x.rep[0]);
  return sign_at(x.rep, P_, real_roots_[static_cast<std::size_t>(embedding_index)]);
}

// --- coefficient hooks so Poly<KElem> works -------------------------------

inline KElem zero_like(const KElem& x) { return x.K->zero(); }
inline KElem one_like(const KElem& x) { return x.K->one(); }
inline bool is_zero_elem(const KElem& x) { return x.is_zero(); }
inline KElem inv(const KElem& x) { return x.inverse(); }
inline KElem times_int(const KElem& x, long nn) { return Rat(nn) * x; }

using KPoly = Poly<KElem>;

inline KPoly kpoly_from_rat_coeffs(const NumberFieldPtr& K,
                                   const std::vector<Rat>& coeffs) {
  std::vector<KElem> c;
  c.reserve(coeffs.size());
  for (const Rat& x : coeffs) c.push_back(K->from_rat(x));
  return KPoly(std::move(c));
}

// --- relative extensions ---------------------------------------------------

struct ResidueShape {
  bool ramified_case = false;   // reduction was not squarefree
  std::vector<int> degrees;     // residue degrees f_W of places W over w
  bool has_degree_one() const {
    for (int d : degrees)
      if (d == 1) return true;
    return false;
  }
  int degree_gcd() const {
    int g = 0;
    for (int d : degrees) g = std::gcd(g, d);
    return g;
  }
};

// L = K[y]/(g) for monic separable g over K; g need not be irreducible, in
// which case L is the corresponding etale algebra (a product of fields) and
// every place/norm notion below means "over all components".
class RelativeExtension {
public:
  static RelativeExtension make(const NumberFieldPtr& K, const KPoly& g) {
    Factorizer fz(1);
    return make(K, g, fz);
  }

  static RelativeExtension make(const NumberFieldPtr& K, const KPoly& g,
                                Factorizer& fz) {
    if (g.degree() < 1)
      throw DomainError("RelativeExtension: polynomial must be nonconstant");
    for (int i = 0; i <= g.degree(); ++i)
      if (!g[static_cast<std::size_t>(i)].K->same_as(*K))
        throw DomainError("RelativeExtension: coefficient from another field");
    if (!g.lc().is_rational() || g.lc().as_rat() != 1)
      throw DomainError("RelativeExtension: polynomial must be monic");

    RelativeExtension L;
    L.K_ = K;
    L.g_ = g;
    L.n_ = g.degree();
    L.disc_ = (g.degree() >= 2) ? discriminant(g) : K->one();
    if (g.degree() >= 2 && L.disc_.is_zero())
      throw DomainError("RelativeExtension: polynomial is not separable");

    std::vector<Int> bad(K->bad_primes());
    Rat nd = L.disc_.norm();
    if (sgn(nd) != 0)
      for (const auto& [pp, e] : fz.factor(nd).terms) bad.push_back(pp);
    for (int i = 0; i <= g.degree(); ++i) {
      Int d = denominator_lcm(g[static_cast<std::size_t>(i)].rep);
      if (d > 1)
        for (const auto& [pp, e] : fz.factor(Rat(d)).terms) bad.push_back(pp);
    }
    std::sort(bad.begin(), bad.end());
    bad.erase(std::unique(bad.begin(), bad.end()), bad.end());
    L.bad_primes_ = std::move(bad);
    return L;
  }

  const NumberFieldPtr& base() const { return K_; }
  const KPoly& rel_poly() const { return g_; }
  int degree() const { return n_; }
  const KElem& rel_disc() const { return disc_; }
  const std::vector<Int>& bad_primes() const { return bad_primes_; }
  bool is_bad_prime(const Int& p) const {
    return std::binary_search(bad_primes_.begin(), bad_primes_.end(), p);
  }

  // Reduction of g at the place w; valid when w.p is not a bad prime.
  FqPoly residue_poly(const PlaceAbove& w) const {
    std::vector<FqElem> c;
    for (int i = 0; i <= g_.degree(); ++i)
      c.push_back(K_->residue(g_[static_cast<std::size_t>(i)], w));
    return FqPoly(std::move(c));
  }

  ResidueShape residue_degrees_over(const PlaceAbove& w) const {
    if (is_bad_prime(w.p))
      throw RamifiedPrimeError("residue degrees requested at bad prime " +
                               w.p.get_str());
    FqPoly gbar = residue_poly(w);
    ResidueShape shape;
    if (gcd_monic(gbar, gbar.derivative()).degree() > 0) {
      shape.ramified_case = true;
      return shape;
    }
    Rng rng(11);
    for (const FqFactor& fac : factor_mod(gbar, w.res_field, rng))
      shape.degrees.push_back(fac.factor.degree());
    std::sort(shape.degrees.begin(), shape.degrees.end());
    return shape;
  }

  Ternary has_degree_one_place_over(const PlaceAbove& w) const {
    ResidueShape shape = residue_degrees_over(w);
    if (shape.ramified_case) return Ternary::Unknown;
    return shape.has_degree_one() ? Ternary::Yes : Ternary::No;
  }

private:
  RelativeExtension() = default;

  NumberFieldPtr K_;
  KPoly g_;
  int n_ = 0;
  KElem disc_;
  std::vector<Int> bad_primes_;
};

}  // namespace splitval
