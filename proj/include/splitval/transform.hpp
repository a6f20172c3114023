#pragma once

// Rewriting an instance through a Mobius change of coordinates
// t = (alpha t' + beta) / (gamma t' + delta), and enlarging the place set by
// fresh primes with automatically chosen pole targets.  The change of
// coordinates carries the generators to a_i' = (alpha a_i + beta)/(gamma a_i
// + delta) and the multipliers to b_i' = b_i (gamma a_i + delta); its
// verification report can assert, for a proposed t0', the product identity
// behind the construction, the transfer of closeness, of real signs, and of
// the primes dividing the numerators.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "splitval/instance.hpp"

namespace splitval {

// ---------------------------------------------------------------------------
// Minimal polynomials of field elements
// ---------------------------------------------------------------------------

// Monic minimal polynomial of x over Q, found as the first linear dependence
// among 1, x, x^2, ... by exact row reduction.
inline PolyQ kelem_min_poly(const KElem& x) {
  const int n = x.K->degree();
  std::vector<std::vector<Rat>> basis;  // echelonized coefficient vectors
  std::vector<int> pivots;
  std::vector<std::vector<Rat>> combos;  // each basis vector over the powers

  KElem pw = x.K->one();
  for (int k = 0; k <= n; ++k) {
    std::vector<Rat> vec(static_cast<std::size_t>(n), Rat(0));
    for (int j = 0; j <= pw.rep.degree(); ++j)
      vec[static_cast<std::size_t>(j)] = pw.rep[static_cast<std::size_t>(j)];
    std::vector<Rat> cmb(static_cast<std::size_t>(k) + 1, Rat(0));
    cmb.back() = 1;

    for (std::size_t i = 0; i < basis.size(); ++i) {
      Rat c = vec[static_cast<std::size_t>(pivots[i])];
      if (sgn(c) == 0) continue;
      Rat f = c / basis[i][static_cast<std::size_t>(pivots[i])];
      for (int j = 0; j < n; ++j)
        vec[static_cast<std::size_t>(j)] -=
            f * basis[i][static_cast<std::size_t>(j)];
      for (std::size_t j = 0; j < combos[i].size(); ++j)
        cmb[j] -= f * combos[i][j];
    }

    int piv = -1;
    for (int j = 0; j < n; ++j)
      if (sgn(vec[static_cast<std::size_t>(j)]) != 0) {
        piv = j;
        break;
      }
    if (piv < 0) return PolyQ(std::move(cmb));  // monic by construction
    basis.push_back(std::move(vec));
    pivots.push_back(piv);
    combos.push_back(std::move(cmb));
    pw = pw * x;
  }
  throw DomainError("kelem_min_poly: no dependence found (inconsistent field)");
}

// f evaluated at a field element (Horner).
inline KElem eval_poly_at(const PolyQ& f, const KElem& x) {
  KElem acc = x.K->zero();
  for (int i = f.degree(); i >= 0; --i)
    acc = acc * x + x.K->from_rat(f[static_cast<std::size_t>(i)]);
  return acc;
}

// ---------------------------------------------------------------------------
// Mobius transformations
// ---------------------------------------------------------------------------

struct Mobius {
  Rat alpha, beta, gamma, delta;

  Mobius() : alpha(1), beta(0), gamma(0), delta(1) {}
  Mobius(Rat a, Rat b, Rat c, Rat d)
      : alpha(std::move(a)), beta(std::move(b)), gamma(std::move(c)),
        delta(std::move(d)) {}

  static Mobius identity() { return Mobius(); }

  Rat det() const { return alpha * delta - beta * gamma; }
  bool is_valid() const { return sgn(det()) != 0; }

  Rat apply(const Rat& t) const {
    Rat dn = gamma * t + delta;
    if (sgn(dn) == 0)
      throw DomainError("Mobius: " + rat_str(t) + " maps to infinity");
    return (alpha * t + beta) / dn;
  }

  // Inverse map t' -> (delta t' - beta)/(alpha - gamma t').
  Rat apply_inverse(const Rat& tp) const {
    Rat dn = alpha - gamma * tp;
    if (sgn(dn) == 0)
      throw DomainError("Mobius: " + rat_str(tp) +
                        " is the image of infinity");
    return (delta * tp - beta) / dn;
  }

  KElem apply(const KElem& a) const {
    KElem dn = gamma * a + a.K->from_rat(delta);
    if (dn.is_zero())
      throw DomainError("Mobius: generator maps to infinity");
    return (alpha * a + a.K->from_rat(beta)) * dn.inverse();
  }

  std::string str() const {
    return "(" + rat_str(alpha) + " t + " + rat_str(beta) + ")/(" +
           rat_str(gamma) + " t + " + rat_str(delta) + ")";
  }
};

// ---------------------------------------------------------------------------
// change_variables
// ---------------------------------------------------------------------------

struct ChangeVarsResult {
  explicit ChangeVarsResult(ConjectureInstance t) : transformed(std::move(t)) {}

  ConjectureInstance transformed;
  Mobius map;
  std::vector<Int> added_primes;         // primes of S' \ S
  std::vector<std::string> assumptions;  // statements taken on faith
  // Precision at which closeness in the new coordinates forces the original
  // requirement: pairs (place of the new instance, N'_v).
  std::vector<std::pair<PlaceOfQ, long>> forced_precisions;
  Rat real_epsilon;            // transformed real radius (0 when untargeted)
  std::vector<KElem> a_old;    // per entry: original generator in the new field
};

namespace detail {

inline long val_or(const Rat& q, const Int& p, long fallback) {
  if (sgn(q) == 0) return fallback;
  return valuation_nonzero(q, p);
}

}  // namespace detail

// Applies the change of coordinates after verifying its admissibility:
//   (i)   gamma a_i + delta != 0 and gamma t_v + delta != 0,
//   (ii)  alpha and alpha a_i + beta are units outside S,
//   (iii) det/(gamma t_v + delta) is a local norm for L_i/k_i at every
//         targeted v in S (Undetermined survives as an assumption).
// The transformed instance re-presents each k_i on the generator a_i',
// carries every target through the map with a precision strong enough to
// force the original closeness, and targets the newly added places at 0.
inline ChangeVarsResult change_variables(const ConjectureInstance& inst,
                                         const Mobius& m,
                                         const std::vector<Int>& extra_s,
                                         Factorizer& fz) {
  if (!m.is_valid())
    throw DomainError("change_variables: the map has determinant 0");
  const Rat det = m.det();

  std::vector<std::string> assumptions;
  std::vector<KElem> a_old_list;
  std::vector<Int> added;
  std::vector<std::pair<PlaceOfQ, long>> forced;
  Rat real_eps;

  // (i) -- no pole may hit a generator or a target.
  for (std::size_t i = 0; i < inst.entries().size(); ++i) {
    const InstanceEntry& e = inst.entries()[i];
    KElem dn = m.gamma * e.K->gen() + e.K->from_rat(m.delta);
    if (dn.is_zero())
      throw DomainError("change_variables hypothesis (i) fails: gamma a_" +
                        std::to_string(i) + " + delta = 0");
  }
  for (const LocalTarget& t : inst.targets())
    if (sgn(m.gamma * t.value + m.delta) == 0)
      throw DomainError(
          "change_variables hypothesis (i) fails: gamma t_v + delta = 0 at " +
          t.place.str());

  // (ii) -- alpha and alpha a_i + beta must be units outside S.
  if (sgn(m.alpha) == 0)
    throw DomainError("change_variables hypothesis (ii) fails: alpha = 0");
  for (const Int& p : fz.support(m.alpha))
    if (!inst.in_s(p))
      throw DomainError(
          "change_variables hypothesis (ii) fails: alpha is not a unit at " +
          p.get_str());
  for (std::size_t i = 0; i < inst.entries().size(); ++i) {
    const InstanceEntry& e = inst.entries()[i];
    KElem x = m.alpha * e.K->gen() + e.K->from_rat(m.beta);
    if (x.is_zero())
      throw DomainError("change_variables hypothesis (ii) fails: alpha a_" +
                        std::to_string(i) + " + beta = 0");
    Int dl = denominator_lcm(x.rep);
    if (dl > 1)
      for (const Int& p : fz.support(Rat(dl)))
        if (!inst.in_s(p))
          throw DomainError(
              "change_variables hypothesis (ii) fails: alpha a_" +
              std::to_string(i) + " + beta is not integral at " + p.get_str());
    for (const Int& p : fz.support(x.norm()))
      if (!inst.in_s(p))
        throw DomainError("change_variables hypothesis (ii) fails: alpha a_" +
                          std::to_string(i) + " + beta is not a unit at " +
                          p.get_str());
  }

  // (iii) -- det/(gamma t_v + delta) must be a local norm everywhere.
  for (const PlaceOfQ& v : inst.places()) {
    const LocalTarget* t = inst.target_at(v);
    if (!t) {
      assumptions.push_back(
          "hypothesis (iii) unchecked at " + v.str() + " (no target)");
      continue;
    }
    Rat c = det / (m.gamma * t->value + m.delta);
    for (std::size_t i = 0; i < inst.entries().size(); ++i) {
      const InstanceEntry& e = inst.entries()[i];
      NormVerdict nv = local_norm_test(e.L, e.K->from_rat(c), v).overall;
      if (nv.not_norm())
        throw DomainError("change_variables hypothesis (iii) fails at entry " +
                          std::to_string(i) + ", " + v.str() + ": " +
                          nv.detail);
      if (nv.undetermined())
        assumptions.push_back("hypothesis (iii) assumed at entry " +
                                  std::to_string(i) + ", " + v.str() + " (" +
                                  to_string(nv.reason) + ")");
    }
  }

  // Transformed entries: re-present k_i on the generator a_i'.
  std::vector<InstanceEntry> entries;
  std::vector<Int> user_s = inst.s_primes();
  auto add_support = [&](const Rat& q) {
    if (sgn(q) == 0) return;
    for (const Int& p : fz.support(q)) user_s.push_back(p);
  };
  add_support(m.alpha);
  add_support(m.gamma);
  for (const Int& p : extra_s) user_s.push_back(p);

  for (std::size_t i = 0; i < inst.entries().size(); ++i) {
    const InstanceEntry& e = inst.entries()[i];
    KElem a_new = m.apply(e.K->gen());
    PolyQ newP = kelem_min_poly(a_new);
    if (newP.degree() != e.K->degree())
      throw DomainError(
          "change_variables: the image of a_" + std::to_string(i) +
          " does not generate the field");
    NumberFieldPtr K2 = NumberField::make(newP, fz);

    // Original generator expressed in the new presentation.
    KElem num = m.delta * K2->gen() - K2->from_rat(m.beta);
    KElem dn = K2->from_rat(m.alpha) - m.gamma * K2->gen();
    if (dn.is_zero())
      throw DomainError("change_variables: degenerate inverse image");
    KElem a_old = num * dn.inverse();
    if (!(kelem_min_poly(a_old) == e.K->min_poly()))
      throw DomainError(
          "change_variables: pullback failed to recover the original field");

    std::vector<KElem> gc;
    for (int j = 0; j <= e.L.rel_poly().degree(); ++j)
      gc.push_back(
          eval_poly_at(e.L.rel_poly()[static_cast<std::size_t>(j)].rep, a_old));
    KPoly g2(std::move(gc));
    KElem b2 = eval_poly_at(e.b.rep, a_old) *
               (m.gamma * a_old + K2->from_rat(m.delta));

    add_support(Rat(denominator_lcm(newP)));
    add_support(Rat(denominator_lcm(b2.rep)));
    add_support(b2.norm());

    entries.push_back({K2, RelativeExtension::make(K2, g2, fz), b2});
    a_old_list.push_back(a_old);
  }

  // First pass fixes the final place set; then every place gets its target.
  ConjectureInstance probe =
      ConjectureInstance::make(entries, user_s, {}, fz);

  std::vector<LocalTarget> targets;
  for (const LocalTarget& t : inst.targets()) {
    if (t.place.is_real) {
      Rat tv2 = m.apply(t.value);
      Rat A = abs(m.alpha - m.gamma * tv2);
      Rat eps2;
      if (sgn(m.gamma) == 0) {
        eps2 = t.epsilon * abs(m.alpha) / abs(m.delta);
      } else {
        eps2 = t.epsilon * A * A / (2 * abs(det));
        Rat cap = A / (2 * abs(m.gamma));
        if (cap < eps2) eps2 = cap;
      }
      targets.push_back(LocalTarget::at_real(tv2, eps2));
      real_eps = eps2;
    } else {
      const Int& p = t.place.p;
      Rat tv2 = m.apply(t.value);
      long d = valuation_nonzero(det, p);
      long cv = d - valuation_nonzero(m.gamma * t.value + m.delta, p);
      long n2 = std::max(t.precision - d + 2 * cv, 1L);
      if (sgn(m.gamma) != 0)
        n2 = std::max(n2, cv - valuation_nonzero(m.gamma, p) + 1);
      targets.push_back(LocalTarget::at_prime(p, tv2, n2));
      forced.emplace_back(t.place, n2);
    }
  }
  for (const Int& p : probe.s_primes()) {
    if (inst.in_s(p)) continue;
    added.push_back(p);
    long n2 = 1 + std::max(0L, -detail::val_or(m.gamma, p, 0)) +
              std::max(0L, -valuation_nonzero(det, p));
    targets.push_back(LocalTarget::at_prime(p, Rat(0), n2));
    forced.emplace_back(PlaceOfQ::finite(p), n2);
  }

  ChangeVarsResult out(
      ConjectureInstance::make(std::move(entries), user_s, targets, fz));
  out.map = m;
  out.added_primes = std::move(added);
  out.assumptions = std::move(assumptions);
  out.forced_precisions = std::move(forced);
  out.real_epsilon = real_eps;
  out.a_old = std::move(a_old_list);
  return out;
}

// ---------------------------------------------------------------------------
// Asserting the conclusions of the rewrite for a proposed t0'
// ---------------------------------------------------------------------------

struct ConclusionCheck {
  std::string what;
  Ternary ok = Ternary::Unknown;
  std::string detail;
};

struct ConclusionsReport {
  std::vector<ConclusionCheck> checks;
  Ternary overall = Ternary::Yes;

  void add(std::string what, Ternary ok, std::string detail = "") {
    if (ok == Ternary::No) overall = Ternary::No;
    else if (ok == Ternary::Unknown && overall == Ternary::Yes)
      overall = Ternary::Unknown;
    checks.push_back({std::move(what), ok, std::move(detail)});
  }
};

// Verifies, for the given t0', the conclusions of the change of coordinates:
//   (1) every transformed hypothesis verdict is IsNorm,
//   (2) closeness of t0' to each t'_v at the assigned precision forces
//       closeness of t0 to t_v at the original precision,
//   (3) the sign of (t0'-a_i')(t'_v-a_i')(t0-a_i)(t_v-a_i) is one and the
//       same at every real embedding of every entry,
//   (4) the primes outside S' dividing the numerator of P_i(t0) transfer to
//       the numerator of P_i'(t0'), place by place,
// together with the product identity b_i'(t0'-a_i') = b_i(t0-a_i)(alpha -
// gamma t0') that drives them.
inline ConclusionsReport assert_conclusions(const ConjectureInstance& orig,
                                            const ChangeVarsResult& cv,
                                            const Rat& t0p, Factorizer& fz) {
  ConclusionsReport out;
  const Mobius& m = cv.map;
  const Rat t0 = m.apply_inverse(t0p);
  const ConjectureInstance& tr = cv.transformed;

  // The product identity, exactly, entry by entry.
  for (std::size_t i = 0; i < orig.entries().size(); ++i) {
    const InstanceEntry& e = orig.entries()[i];
    const InstanceEntry& e2 = tr.entries()[i];
    const KElem& a_old = cv.a_old[i];
    KElem lhs = e2.b * (e2.K->from_rat(t0p) - e2.K->gen());
    KElem rhs = eval_poly_at(e.b.rep, a_old) *
                (e2.K->from_rat(t0) - a_old) *
                e2.K->from_rat(m.alpha - m.gamma * t0p);
    out.add("identity entry " + std::to_string(i),
            lhs == rhs ? Ternary::Yes : Ternary::No,
            "b'(t0'-a') = b(t0-a)(alpha - gamma t0')");
  }

  // (1): the transformed hypotheses hold at every place of S'.
  HypothesisReport hyp = verify_hypotheses(tr);
  for (const HypothesisItem& it : hyp.items) {
    Ternary ok = it.verdict.is_norm()
                     ? Ternary::Yes
                     : (it.verdict.not_norm() ? Ternary::No : Ternary::Unknown);
    out.add("conclusion (1) entry " + std::to_string(it.entry_index) + " at " +
                it.place.str(),
            ok, it.verdict.detail);
  }

  // (2): closeness transfer at the precisions assigned by the rewrite.
  for (const LocalTarget& t : orig.targets()) {
    const LocalTarget* t2 = tr.target_at(t.place);
    if (!t2) {
      out.add("conclusion (2) at " + t.place.str(), Ternary::Unknown,
              "no transformed target");
      continue;
    }
    if (t.place.is_real) {
      if (abs(t0p - t2->value) <= t2->epsilon)
        out.add("conclusion (2) at real",
                abs(t0 - t.value) <= t.epsilon ? Ternary::Yes : Ternary::No,
                "|t0' - t'_v| <= eps' must force |t0 - t_v| <= eps");
    } else {
      if (valuation(t0p - t2->value, t.place.p) >=
          Valuation::of(t2->precision))
        out.add("conclusion (2) at " + t.place.str(),
                valuation(t0 - t.value, t.place.p) >=
                        Valuation::of(t.precision)
                    ? Ternary::Yes
                    : Ternary::No,
                "closeness at precision " + std::to_string(t2->precision) +
                    " must force the original precision " +
                    std::to_string(t.precision));
    }
  }

  // (3): one common sign for the four-fold products over all embeddings.
  const LocalTarget* tre = orig.target_at(PlaceOfQ::real());
  if (!tre) {
    out.add("conclusion (3)", Ternary::Unknown, "no real target");
  } else {
    Rat tvp = m.apply(tre->value);
    int common = 0;
    Ternary ok = Ternary::Yes;
    std::string detail;
    for (std::size_t i = 0; i < orig.entries().size() && ok == Ternary::Yes;
         ++i) {
      const InstanceEntry& e = orig.entries()[i];
      KElem dn = m.gamma * e.K->gen() + e.K->from_rat(m.delta);
      for (int j = 0; j < e.K->real_embedding_count(); ++j) {
        int sdn = e.K->sign_at_embedding(dn, j);
        auto sign_of = [&](const Rat& val) {
          KElem z = e.K->from_rat(val) - e.K->gen();
          return z.is_zero() ? 0 : e.K->sign_at_embedding(z, j);
        };
        auto mapped_sign_of = [&](const Rat& val) {
          // sign of val - M(rho) through numerator * denominator
          KElem z = e.K->from_rat(val) * dn -
                    (m.alpha * e.K->gen() + e.K->from_rat(m.beta));
          return (z.is_zero() ? 0 : e.K->sign_at_embedding(z, j)) * sdn;
        };
        int s = sign_of(t0) * sign_of(tre->value) * mapped_sign_of(t0p) *
                mapped_sign_of(tvp);
        if (s == 0) {
          ok = Ternary::No;
          detail = "degenerate zero sign at entry " + std::to_string(i);
          break;
        }
        if (common == 0) common = s;
        else if (s != common) {
          ok = Ternary::No;
          detail = "sign differs between embeddings";
          break;
        }
      }
    }
    out.add("conclusion (3)", ok, detail);
  }

  // (4): primes outside S' dividing P_i(t0) transfer to P_i'(t0').
  for (std::size_t i = 0; i < orig.entries().size(); ++i) {
    const InstanceEntry& e = orig.entries()[i];
    const InstanceEntry& e2 = tr.entries()[i];
    Rat r = e.K->min_poly().evaluate(t0);
    Rat r2 = e2.K->min_poly().evaluate(t0p);
    if (sgn(r) == 0 || sgn(r2) == 0) {
      out.add("conclusion (4) entry " + std::to_string(i), Ternary::No,
              "t0 or t0' is a root of a defining polynomial");
      continue;
    }
    Ternary ok = Ternary::Yes;
    std::string detail;
    for (const auto& [p, exp] : fz.factor(r).terms) {
      if (exp <= 0 || tr.in_s(p)) continue;
      KElem d1 = e.K->from_rat(t0) - e.K->gen();
      KElem d2 = e2.K->from_rat(t0p) - e2.K->gen();
      int n1 = 0, n2 = 0;
      for (const PlaceAbove& w : e.K->places_above(p))
        if (!d1.is_zero() &&
            e.K->valuation_at_place(d1, w) > Valuation::of(0))
          ++n1;
      for (const PlaceAbove& w : e2.K->places_above(p))
        if (!d2.is_zero() &&
            e2.K->valuation_at_place(d2, w) > Valuation::of(0))
          ++n2;
      bool transfers =
          valuation(r2, p) > Valuation::of(0) && n2 >= n1 && n1 >= 1;
      if (!transfers) {
        ok = Ternary::No;
        detail = "prime " + p.get_str() + " fails to transfer";
        break;
      }
    }
    out.add("conclusion (4) entry " + std::to_string(i), ok, detail);
  }

  return out;
}

// ---------------------------------------------------------------------------
// extend_places
// ---------------------------------------------------------------------------

// Enlarges S by the given primes.  Each new prime must be unramified in (and
// away from the bad set of) every L_i with every b_i a unit there; its target
// becomes the pole t_v = p^(-N D), D = prod [L_i:k_i], for the smallest
// N >= 1 whose hypothesis verdicts all come out IsNorm.  The result is
// re-verified; a failure there signals a bug, not bad input.
inline ConjectureInstance extend_places(const ConjectureInstance& inst,
                                        const std::vector<Int>& new_primes,
                                        Factorizer& fz) {
  long D = 1;
  for (const InstanceEntry& e : inst.entries()) D *= e.L.degree();

  std::vector<Int> s = inst.s_primes();
  std::vector<LocalTarget> targets = inst.targets();
  std::vector<Int> added;

  std::vector<Int> wanted = new_primes;
  std::sort(wanted.begin(), wanted.end());
  wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

  for (const Int& p : wanted) {
    if (inst.in_s(p)) continue;  // no-op
    if (!is_prime(p))
      throw DomainError("extend_places: " + p.get_str() + " is not prime");
    for (std::size_t i = 0; i < inst.entries().size(); ++i) {
      const InstanceEntry& e = inst.entries()[i];
      if (e.L.is_bad_prime(p))
        throw RamifiedPrimeError("extend_places: " + p.get_str() +
                                 " is ramified in (or bad for) L_" +
                                 std::to_string(i));
      if (valuation(Rat(denominator_lcm(e.b.rep)), p) > Valuation::of(0) ||
          !(valuation(e.b.norm(), p) == Valuation::of(0)))
        throw DomainError("extend_places: b_" + std::to_string(i) +
                          " is not a unit at " + p.get_str());
    }
    bool placed = false;
    for (long N = 1; N <= 16 && !placed; ++N) {
      LocalTarget t =
          LocalTarget::at_prime(p, Rat(1) / Rat(pow_int(p, N * D)), N * D + 1);
      bool all = true;
      for (const InstanceEntry& e : inst.entries())
        if (!hypothesis_verdict(e, t).is_norm()) {
          all = false;
          break;
        }
      if (all) {
        targets.push_back(t);
        s.push_back(p);
        added.push_back(p);
        placed = true;
      }
    }
    if (!placed)
      throw DomainError(
          "extend_places: internal-consistency failure; no valuation makes "
          "the verdicts IsNorm at " + p.get_str());
  }

  ConjectureInstance result =
      ConjectureInstance::make(inst.entries(), s, targets, fz);
  HypothesisReport hyp = verify_hypotheses(result);
  for (const Int& p : added)
    for (std::size_t i = 0; i < result.entries().size(); ++i) {
      const NormVerdict* nv =
          hyp.find(static_cast<int>(i), PlaceOfQ::finite(p));
      if (!nv || !nv->is_norm())
        throw DomainError(
            "extend_places: internal-consistency failure; re-verification "
            "at " + p.get_str() + " did not return IsNorm");
    }
  return result;
}

}  // namespace splitval
