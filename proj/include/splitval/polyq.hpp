#pragma once

// Rational-coefficient specifics on top of the generic polynomial template:
// exact real-root counting (Sturm chains with one-sided limit signs), root
// isolation by bisection into rational intervals, and exact sign evaluation
// of one polynomial at a root of another.  No floating point anywhere.

#include <string>
#include <vector>

#include "poly.hpp"

namespace splitval {

using PolyQ = Poly<Rat>;

// --------------------------------------------------------------------------
// Basic rational-poly utilities
// --------------------------------------------------------------------------

inline bool is_integer_poly(const PolyQ& f) {
  for (const Rat& c : f.coeffs())
    if (den(c) != 1) return false;
  return true;
}

// Smallest positive m with m*f integral.
inline Int denominator_lcm(const PolyQ& f) {
  Int m = 1;
  for (const Rat& c : f.coeffs()) m = lcm(m, den(c));
  return m;
}

inline PolyQ squarefree_part(const PolyQ& f) {
  if (f.degree() < 1) return f;
  PolyQ g = gcd_monic(f, f.derivative());
  if (g.degree() < 1) return f;
  return divmod(f, g).first;
}

inline bool is_squarefree(const PolyQ& f) {
  return f.degree() < 1 || gcd_monic(f, f.derivative()).degree() == 0;
}

// --------------------------------------------------------------------------
// Printing / textual form ("t^2 - 2", "5/4*t + 1", ...)
// --------------------------------------------------------------------------

inline std::string rat_str(const Rat& q) {
  return q.get_str();
}

inline std::string to_string(const PolyQ& f, const std::string& var) {
  if (f.is_zero()) return "0";
  std::string out;
  for (int i = f.degree(); i >= 0; --i) {
    Rat c = f[static_cast<std::size_t>(i)];
    if (sgn(c) == 0) continue;
    bool first = out.empty();
    if (first) {
      if (sgn(c) < 0) out += "-";
    } else {
      out += sgn(c) < 0 ? " - " : " + ";
    }
    Rat a = abs(c);
    bool unit = (a == 1);
    if (i == 0) {
      out += rat_str(a);
    } else {
      if (!unit) out += rat_str(a) + "*";
      out += var;
      if (i > 1) out += "^" + std::to_string(i);
    }
  }
  return out;
}

// --------------------------------------------------------------------------
// Sturm machinery
// --------------------------------------------------------------------------

// Standard Sturm remainder chain of a squarefree polynomial.
inline std::vector<PolyQ> sturm_chain(const PolyQ& f) {
  std::vector<PolyQ> chain;
  if (f.is_zero()) return chain;
  chain.push_back(f);
  if (f.degree() == 0) return chain;
  chain.push_back(f.derivative());
  while (!chain.back().is_zero() && chain.back().degree() > 0) {
    PolyQ r = poly_mod(chain[chain.size() - 2], chain.back());
    if (r.is_zero()) break;
    chain.push_back(-r);
  }
  return chain;
}

enum class Side { Exact, RightLimit, LeftLimit };

// Sign of h just at / just right of / just left of x (limit signs resolve
// h(x) = 0 through the first non-vanishing derivative).
inline int sign_near(const PolyQ& h, const Rat& x, Side side) {
  PolyQ d = h;
  long k = 0;
  while (!d.is_zero()) {
    int s = sgn(d.evaluate(x));
    if (s != 0) {
      if (side == Side::LeftLimit && (k & 1)) return -s;
      return s;
    }
    if (side == Side::Exact) return 0;
    d = d.derivative();
    ++k;
  }
  return 0;
}

inline int sign_at_pos_infinity(const PolyQ& h) {
  return h.is_zero() ? 0 : sgn(h.lc());
}

inline int sign_at_neg_infinity(const PolyQ& h) {
  if (h.is_zero()) return 0;
  int s = sgn(h.lc());
  return (h.degree() & 1) ? -s : s;
}

namespace detail {

inline int sign_variations(const std::vector<int>& signs) {
  int count = 0, prev = 0;
  for (int s : signs) {
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

inline int variations_at(const std::vector<PolyQ>& chain, const Rat& x,
                         Side side) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const PolyQ& h : chain) signs.push_back(sign_near(h, x, side));
  return sign_variations(signs);
}

inline int variations_at_infinity(const std::vector<PolyQ>& chain, int dir) {
  std::vector<int> signs;
  signs.reserve(chain.size());
  for (const PolyQ& h : chain)
    signs.push_back(dir > 0 ? sign_at_pos_infinity(h)
                            : sign_at_neg_infinity(h));
  return sign_variations(signs);
}

}  // namespace detail

// Number of distinct real roots of f (multiplicities ignored).
inline int count_real_roots(const PolyQ& f) {
  if (f.is_zero()) throw DomainError("count_real_roots: zero polynomial");
  if (f.degree() == 0) return 0;
  auto chain = sturm_chain(squarefree_part(f));
  return detail::variations_at_infinity(chain, -1) -
         detail::variations_at_infinity(chain, +1);
}

// Number of distinct real roots in the open interval (a, b).
inline int count_real_roots_open(const PolyQ& f, const Rat& a, const Rat& b) {
  if (f.is_zero()) throw DomainError("count_real_roots_open: zero polynomial");
  if (!(a < b)) throw DomainError("count_real_roots_open: empty interval");
  if (f.degree() == 0) return 0;
  auto chain = sturm_chain(squarefree_part(f));
  return detail::variations_at(chain, a, Side::RightLimit) -
         detail::variations_at(chain, b, Side::LeftLimit);
}

// Every real root of f lies strictly inside (-B, B).
inline Rat cauchy_root_bound(const PolyQ& f) {
  if (f.degree() < 1)
    throw DomainError("cauchy_root_bound requires degree >= 1");
  Rat m(0);
  for (int i = 0; i < f.degree(); ++i) {
    Rat a = abs(f[static_cast<std::size_t>(i)] / f.lc());
    if (a > m) m = a;
  }
  return m + 1;
}

// --------------------------------------------------------------------------
// Real-root isolation
// --------------------------------------------------------------------------

// One real root of a squarefree polynomial: either an exactly known rational
// point, or an open interval (lo, hi) containing exactly one root with
// nonzero values at both endpoints.
struct RealRoot {
  bool exact = false;
  Rat point;    // when exact
  Rat lo, hi;   // when not exact

  Rat midpoint() const { return exact ? point : (lo + hi) / 2; }
  Rat width() const { return exact ? Rat(0) : hi - lo; }
  // The root lies in [lower_bound, upper_bound].
  Rat lower_bound() const { return exact ? point : lo; }
  Rat upper_bound() const { return exact ? point : hi; }
};

namespace detail {

inline void isolate_rec(const PolyQ& f, const std::vector<PolyQ>& chain,
                        const Rat& lo, const Rat& hi,
                        std::vector<RealRoot>& out) {
  int n = variations_at(chain, lo, Side::RightLimit) -
          variations_at(chain, hi, Side::LeftLimit);
  if (n == 0) return;
  if (n == 1) {
    RealRoot r;
    r.lo = lo;
    r.hi = hi;
    out.push_back(r);
    return;
  }
  Rat mid = (lo + hi) / 2;
  if (sgn(f.evaluate(mid)) == 0) {
    RealRoot r;
    r.exact = true;
    r.point = mid;
    // Left of mid, ordered before the exact root.
    isolate_rec(f, chain, lo, mid, out);
    out.push_back(r);
    isolate_rec(f, chain, mid, hi, out);
    return;
  }
  isolate_rec(f, chain, lo, mid, out);
  isolate_rec(f, chain, mid, hi, out);
}

}  // namespace detail

// Disjoint isolating data for all real roots of f, in ascending order.
// f is replaced by its squarefree part internally.
inline std::vector<RealRoot> isolate_real_roots(const PolyQ& f) {
  if (f.is_zero()) throw DomainError("isolate_real_roots: zero polynomial");
  std::vector<RealRoot> out;
  if (f.degree() < 1) return out;
  PolyQ g = squarefree_part(f);
  auto chain = sturm_chain(g);
  Rat B = cauchy_root_bound(g);
  detail::isolate_rec(g, chain, -B, B, out);
  return out;
}

// Halve the isolating interval (no-op on exact roots).  f must be the
// squarefree polynomial the root was isolated from.
inline RealRoot refine_root(const PolyQ& f, const RealRoot& r) {
  if (r.exact) return r;
  Rat mid = (r.lo + r.hi) / 2;
  if (sgn(f.evaluate(mid)) == 0) {
    RealRoot e;
    e.exact = true;
    e.point = mid;
    return e;
  }
  RealRoot s = r;
  if (count_real_roots_open(f, r.lo, mid) == 1)
    s.hi = mid;
  else
    s.lo = mid;
  return s;
}

// Exact sign of g at the root rho of the squarefree polynomial f
// (0 exactly when rho is also a root of g).
inline int sign_at(const PolyQ& g, const PolyQ& f, RealRoot rho) {
  if (g.is_zero()) return 0;
  if (rho.exact) return sgn(g.evaluate(rho.point));
  if (g.degree() == 0) return sgn(g[0]);
  PolyQ h = gcd_monic(f, g);
  if (h.degree() >= 1 && count_real_roots_open(h, rho.lo, rho.hi) > 0)
    return 0;  // the common root inside the interval must be rho itself
  PolyQ gsf = squarefree_part(g);
  auto chain = sturm_chain(gsf);
  for (;;) {
    int inside = detail::variations_at(chain, rho.lo, Side::RightLimit) -
                 detail::variations_at(chain, rho.hi, Side::LeftLimit);
    if (inside == 0) {
      int s = sgn(g.evaluate(rho.midpoint()));
      if (s == 0)
        throw DomainError("sign_at: unexpected root hit after exclusion");
      return s;
    }
    rho = refine_root(f, rho);
    if (rho.exact) return sgn(g.evaluate(rho.point));
  }
}

}  // namespace splitval
