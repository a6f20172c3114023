#pragma once

// A conjecture instance bundles the data (P_i, L_i, b_i), a finite place set
// S containing the real place, and local target values with explicit
// precisions.  The operations here verify the local-norm hypotheses, check the
// closeness and split-fiber conditions for a proposed rational t0, search for
// t0 by congruence-class enumeration, rewrite the instance through a Mobius
// change of coordinates, and extend S by fresh primes with automatically
// chosen targets.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "splitval/arith.hpp"
#include "splitval/errors.hpp"
#include "splitval/number_field.hpp"
#include "splitval/poly.hpp"
#include "splitval/polyq.hpp"
#include "splitval/symbols.hpp"

namespace splitval {

// ---------------------------------------------------------------------------
// Targets
// ---------------------------------------------------------------------------

// A local target value t_v with the precision at which closeness to it is
// required: a p-adic valuation bound N_v at a finite place, a radius eps at
// the real place.  The rational `value` stands for an element of Q_v.
struct LocalTarget {
  PlaceOfQ place = PlaceOfQ::real();
  Rat value;
  long precision = 1;  // finite place: require v_p(t0 - t_v) >= precision
  Rat epsilon;         // real place:   require |t0 - t_v| <= epsilon

  static LocalTarget at_prime(const Int& p, const Rat& t, long N) {
    LocalTarget out;
    out.place = PlaceOfQ::finite(p);
    out.value = t;
    out.precision = N;
    if (N < 1) throw DomainError("LocalTarget: precision must be >= 1");
    return out;
  }

  static LocalTarget at_real(const Rat& t, const Rat& eps) {
    LocalTarget out;
    out.place = PlaceOfQ::real();
    out.value = t;
    out.epsilon = eps;
    if (sgn(eps) <= 0) throw DomainError("LocalTarget: epsilon must be > 0");
    return out;
  }

  std::string str() const {
    if (place.is_real)
      return "real target " + rat_str(value) + " within " + rat_str(epsilon);
    return "target " + rat_str(value) + " mod " + place.p.get_str() + "^" +
           std::to_string(precision);
  }
};

// ---------------------------------------------------------------------------
// Entries and the instance
// ---------------------------------------------------------------------------

// One conjecture entry: the field k_i presented by a monic irreducible P_i
// with distinguished generator a_i, the extension (or etale algebra) L_i
// given by a monic separable polynomial over k_i, and a nonzero b_i in k_i.
struct InstanceEntry {
  NumberFieldPtr K;
  RelativeExtension L;
  KElem b;
};

// Convenience constructor from plain rational data: g is given through the
// polynomials (in a_i) that form its coefficients, constant term first.
inline InstanceEntry make_entry(const PolyQ& P,
                                const std::vector<PolyQ>& g_coeffs,
                                const PolyQ& b_rep, Factorizer& fz) {
  NumberFieldPtr K = NumberField::make(P, fz);
  std::vector<KElem> gc;
  gc.reserve(g_coeffs.size());
  for (const PolyQ& c : g_coeffs) gc.push_back(K->from_poly(c));
  KPoly g(std::move(gc));
  InstanceEntry e{K, RelativeExtension::make(K, g, fz), K->from_poly(b_rep)};
  if (e.b.is_zero()) throw DomainError("instance entry: b must be nonzero");
  return e;
}

class ConjectureInstance {
 public:
  // Builds the instance and enforces the enlargement of S demanded by the
  // hypotheses: the real place, all primes meeting the discriminants or the
  // coefficient denominators of the P_i, all primes ramified in (or bad for)
  // the L_i, and all primes at which some b_i fails to be a unit.  Places
  // added here without a user-supplied target are recorded; verdicts at them
  // come out Undetermined(MissingTarget) rather than being silently skipped.
  static ConjectureInstance make(std::vector<InstanceEntry> entries,
                                 const std::vector<Int>& s_primes,
                                 const std::vector<LocalTarget>& targets,
                                 Factorizer& fz) {
    if (entries.empty())
      throw DomainError("ConjectureInstance: at least one entry required");
    for (std::size_t i = 0; i < entries.size(); ++i) {
      if (entries[i].b.is_zero())
        throw DomainError("ConjectureInstance: b must be nonzero (entry " +
                          std::to_string(i) + ")");
      for (std::size_t j = i + 1; j < entries.size(); ++j)
        if (entries[i].K->min_poly() == entries[j].K->min_poly())
          throw DomainError(
              "ConjectureInstance: defining polynomials must be distinct "
              "(entries " + std::to_string(i) + ", " + std::to_string(j) + ")");
    }

    std::vector<Int> user;
    for (const Int& p : s_primes) {
      if (!is_prime(p))
        throw DomainError("ConjectureInstance: S contains the non-prime " +
                          p.get_str());
      user.push_back(p);
    }

    // Merge duplicate targets; conflicting ones are a hard error.
    std::vector<LocalTarget> merged;
    for (const LocalTarget& t : targets) {
      if (t.place.is_real) {
        if (sgn(t.epsilon) <= 0)
          throw DomainError("ConjectureInstance: real target needs epsilon > 0");
      } else if (t.precision < 1) {
        throw DomainError("ConjectureInstance: finite target needs N >= 1");
      }
      bool absorbed = false;
      for (std::size_t j = 0; j < merged.size() && !absorbed; ++j) {
        LocalTarget& prev = merged[j];
        if (!(prev.place == t.place)) continue;
        absorbed = true;
        if (t.place.is_real) {
          Rat gap = abs(prev.value - t.value);
          if (gap > prev.epsilon + t.epsilon)
            throw DomainError(
                "ConjectureInstance: real targets disagree beyond their radii");
          if (t.epsilon < prev.epsilon) prev = t;
        } else {
          long n = std::min(prev.precision, t.precision);
          if (valuation(prev.value - t.value, t.place.p) < Valuation::of(n))
            throw CrtIncompatibleError(
                "targets at place " + t.place.str() +
                    " lie in incompatible congruence classes",
                j, merged.size());
          if (t.precision > prev.precision) prev = t;
        }
      }
      if (!absorbed) merged.push_back(t);
      if (!t.place.is_real) user.push_back(t.place.p);
    }

    std::vector<Int> full = user;
    auto add_support = [&](const Rat& q) {
      if (sgn(q) == 0) return;
      for (const Int& p : fz.support(q)) full.push_back(p);
    };
    for (const InstanceEntry& e : entries) {
      for (const Int& p : e.K->bad_primes()) full.push_back(p);
      for (const Int& p : e.L.bad_primes()) full.push_back(p);
      add_support(Rat(denominator_lcm(e.b.rep)));
      add_support(e.b.norm());
    }
    std::sort(full.begin(), full.end());
    full.erase(std::unique(full.begin(), full.end()), full.end());
    std::sort(user.begin(), user.end());
    user.erase(std::unique(user.begin(), user.end()), user.end());

    ConjectureInstance inst;
    inst.entries_ = std::move(entries);
    inst.s_primes_ = std::move(full);
    for (const Int& p : inst.s_primes_)
      if (!std::binary_search(user.begin(), user.end(), p))
        inst.auto_added_.push_back(p);
    std::sort(merged.begin(), merged.end(),
              [](const LocalTarget& a, const LocalTarget& b) {
                return a.place < b.place;
              });
    inst.targets_ = std::move(merged);
    return inst;
  }

  const std::vector<InstanceEntry>& entries() const { return entries_; }
  const std::vector<Int>& s_primes() const { return s_primes_; }
  const std::vector<Int>& auto_added_primes() const { return auto_added_; }
  const std::vector<LocalTarget>& targets() const { return targets_; }

  bool in_s(const Int& p) const {
    return std::binary_search(s_primes_.begin(), s_primes_.end(), p);
  }

  // All places of S, the real place first.
  std::vector<PlaceOfQ> places() const {
    std::vector<PlaceOfQ> out{PlaceOfQ::real()};
    for (const Int& p : s_primes_) out.push_back(PlaceOfQ::finite(p));
    return out;
  }

  const LocalTarget* target_at(const PlaceOfQ& v) const {
    for (const LocalTarget& t : targets_)
      if (t.place == v) return &t;
    return nullptr;
  }
  bool has_target(const PlaceOfQ& v) const { return target_at(v) != nullptr; }

 private:
  ConjectureInstance() = default;

  std::vector<InstanceEntry> entries_;
  std::vector<Int> s_primes_;
  std::vector<Int> auto_added_;
  std::vector<LocalTarget> targets_;
};

// ---------------------------------------------------------------------------
// Hypothesis verification
// ---------------------------------------------------------------------------

// Verdict for "b(t_v - a) is a local norm for L/k at every place above v",
// where t_v is only known to the precision carried by the target.  The
// verdict is emitted only when it is stable under every refinement of t_v
// within that precision; otherwise Undetermined(InsufficientPrecision).
inline NormVerdict hypothesis_verdict(const InstanceEntry& e,
                                      const LocalTarget& tv) {
  const NumberFieldPtr& K = e.K;

  if (tv.place.is_real) {
    std::vector<NormVerdict> parts;
    for (int j = 0; j < K->real_embedding_count(); ++j) {
      if (real_root_count_at_embedding(K, e.L.rel_poly(), j) > 0) {
        parts.push_back(
            NormVerdict::yes("a real component makes every element a norm"));
        continue;
      }
      int sb = K->sign_at_embedding(e.b, j);
      int slo = K->sign_at_embedding(
          K->from_rat(tv.value - tv.epsilon) - K->gen(), j);
      int shi = K->sign_at_embedding(
          K->from_rat(tv.value + tv.epsilon) - K->gen(), j);
      int window = slo >= 0 ? 1 : (shi <= 0 ? -1 : 0);
      if (window == 0) {
        parts.push_back(NormVerdict::unknown(
            VerdictReason::InsufficientPrecision,
            "the radius-" + rat_str(tv.epsilon) +
                " window around the target crosses real embedding #" +
                std::to_string(j)));
        continue;
      }
      parts.push_back(sb * window > 0
                          ? NormVerdict::yes("positive at embedding #" +
                                             std::to_string(j))
                          : NormVerdict::no("negative at embedding #" +
                                            std::to_string(j) +
                                            " with no real component"));
    }
    return combine_verdicts(parts);
  }

  const Int& p = tv.place.p;
  const long N = tv.precision;

  // Quadratic etale algebras over Q: Hilbert symbols are exact at every
  // prime, including 2 and the ramified ones; only the stability of the
  // symbol in t_v needs care (unit class modulo 8 at p = 2, modulo p else).
  if (K->is_rational() && e.L.degree() == 2) {
    const KPoly& g = e.L.rel_poly();
    Rat B = g[1].as_rat(), C = g[0].as_rat();
    Rat d = B * B - 4 * C;
    if (is_square(d)) return NormVerdict::yes("split quadratic algebra");
    Rat diff = tv.value - K->gen().as_rat();
    long margin = (p == 2) ? 3 : 1;
    if (sgn(diff) == 0 || valuation_nonzero(diff, p) + margin > N)
      return NormVerdict::unknown(
          VerdictReason::InsufficientPrecision,
          "the Hilbert symbol is not pinned down at precision " +
              std::to_string(N));
    int h = hilbert_symbol(e.b.as_rat() * diff, d, tv.place);
    return h == 1 ? NormVerdict::yes("Hilbert symbol +1")
                  : NormVerdict::no("Hilbert symbol -1");
  }

  if (K->is_bad_prime(p) || e.L.is_bad_prime(p))
    return NormVerdict::unknown(
        VerdictReason::RamifiedCase,
        "prime " + p.get_str() + " meets the bad set of the presentation");

  KElem diff = K->from_rat(tv.value) - K->gen();
  std::vector<NormVerdict> parts;
  for (const PlaceAbove& w : K->places_above(p)) {
    ResidueShape shape = e.L.residue_degrees_over(w);
    if (shape.ramified_case) {
      parts.push_back(NormVerdict::unknown(
          VerdictReason::RamifiedCase, "reduction not squarefree at " + w.str()));
      continue;
    }
    int gd = shape.degree_gcd();
    if (gd == 1) {
      parts.push_back(NormVerdict::yes(
          "residue-degree gcd 1 at " + w.str() + ": everything is a norm"));
      continue;
    }
    long vd;
    if (diff.is_zero()) {
      vd = N;  // valuation unbounded below the stated precision
    } else {
      vd = K->valuation_at_place(diff, w).value();
    }
    if (vd >= N) {
      parts.push_back(NormVerdict::unknown(
          VerdictReason::InsufficientPrecision,
          "v(t_v - a) >= " + std::to_string(N) + " at " + w.str() +
              " is not pinned down at the stated precision"));
      continue;
    }
    long vx = vd + K->valuation_at_place(e.b, w).value();
    bool ok = (vx % gd + gd) % gd == 0;
    parts.push_back(
        ok ? NormVerdict::yes("valuation " + std::to_string(vx) +
                              " divisible by residue-degree gcd " +
                              std::to_string(gd) + " at " + w.str())
           : NormVerdict::no("valuation " + std::to_string(vx) +
                             " not divisible by residue-degree gcd " +
                             std::to_string(gd) + " at " + w.str()));
  }
  return combine_verdicts(parts);
}

struct HypothesisItem {
  int entry_index = 0;
  PlaceOfQ place = PlaceOfQ::real();
  NormVerdict verdict;
};

struct HypothesisReport {
  std::vector<HypothesisItem> items;

  bool any_not_norm() const {
    for (const auto& it : items)
      if (it.verdict.not_norm()) return true;
    return false;
  }
  bool any_undetermined() const {
    for (const auto& it : items)
      if (it.verdict.undetermined()) return true;
    return false;
  }
  const NormVerdict* find(int i, const PlaceOfQ& v) const {
    for (const auto& it : items)
      if (it.entry_index == i && it.place == v) return &it.verdict;
    return nullptr;
  }
};

// Checks "b_i(t_v - a_i) is a local norm" for every entry i and every place
// v of S.  Places of S without a target yield Undetermined(MissingTarget).
inline HypothesisReport verify_hypotheses(const ConjectureInstance& inst) {
  HypothesisReport out;
  for (const PlaceOfQ& v : inst.places()) {
    const LocalTarget* t = inst.target_at(v);
    for (std::size_t i = 0; i < inst.entries().size(); ++i) {
      NormVerdict nv =
          t ? hypothesis_verdict(inst.entries()[i], *t)
            : NormVerdict::unknown(VerdictReason::MissingTarget,
                                   "no target value at " + v.str());
      out.items.push_back({static_cast<int>(i), v, nv});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Condition (1): closeness to the targets
// ---------------------------------------------------------------------------

struct Condition1Item {
  PlaceOfQ place = PlaceOfQ::real();
  Ternary ok = Ternary::Unknown;
  std::string detail;
};

struct Condition1Report {
  std::vector<Condition1Item> items;
  Ternary overall = Ternary::Yes;
};

inline Condition1Report check_condition1_report(const ConjectureInstance& inst,
                                                const Rat& t0) {
  Condition1Report out;
  bool unknown = false;
  for (const PlaceOfQ& v : inst.places()) {
    const LocalTarget* t = inst.target_at(v);
    if (!t) {
      out.items.push_back({v, Ternary::Unknown, "no target value"});
      unknown = true;
      continue;
    }
    if (v.is_real) {
      bool ok = abs(t0 - t->value) <= t->epsilon;
      out.items.push_back({v, ok ? Ternary::Yes : Ternary::No,
                           "|t0 - t_v| = " + rat_str(abs(t0 - t->value))});
      if (!ok) out.overall = Ternary::No;
    } else {
      Valuation val = valuation(t0 - t->value, v.p);
      bool ok = val >= Valuation::of(t->precision);
      std::string got = val.is_infinite() ? std::string("infinity")
                                          : std::to_string(val.value());
      out.items.push_back({v, ok ? Ternary::Yes : Ternary::No,
                           "v_" + v.p.get_str() + "(t0 - t_v) = " + got +
                               ", need >= " + std::to_string(t->precision)});
      if (!ok) out.overall = Ternary::No;
    }
  }
  if (out.overall == Ternary::Yes && unknown) out.overall = Ternary::Unknown;
  return out;
}

// True when t0 matches every *stated* target to its precision; places of S
// without a target cannot be checked and do not influence this boolean (the
// full report marks them Unknown).
inline bool check_condition1(const ConjectureInstance& inst, const Rat& t0) {
  return check_condition1_report(inst, t0).overall != Ternary::No;
}

// ---------------------------------------------------------------------------
// Condition (1'): sign-compatible closeness
// ---------------------------------------------------------------------------

struct Condition1PrimeReport {
  std::vector<Condition1Item> finite_items;
  struct SignItem {
    int entry_index = 0;
    int embedding_index = 0;
    int sign = 0;  // sign of (t0 - rho)(t_v - rho) at that embedding
  };
  std::vector<SignItem> signs;
  Ternary overall = Ternary::Yes;
  std::string detail;
};

// The sharpened closeness condition: finite places exactly as in (1); at the
// real place, for every entry and every real embedding rho of k_i, the signs
// of (t0 - rho) and (t_v - rho) must agree, with one common sign over all
// entries and embeddings.
inline Condition1PrimeReport check_condition1prime_report(
    const ConjectureInstance& inst, const Rat& t0) {
  Condition1PrimeReport out;
  bool unknown = false;

  for (const PlaceOfQ& v : inst.places()) {
    if (v.is_real) continue;
    const LocalTarget* t = inst.target_at(v);
    if (!t) {
      out.finite_items.push_back({v, Ternary::Unknown, "no target value"});
      unknown = true;
      continue;
    }
    Valuation val = valuation(t0 - t->value, v.p);
    bool ok = val >= Valuation::of(t->precision);
    out.finite_items.push_back(
        {v, ok ? Ternary::Yes : Ternary::No,
         "closeness at " + v.str() + (ok ? " holds" : " fails")});
    if (!ok) out.overall = Ternary::No;
  }

  const LocalTarget* tr = inst.target_at(PlaceOfQ::real());
  if (!tr) {
    unknown = true;
    out.detail = "no real target: the sign clause cannot be evaluated";
  } else {
    int common = 0;
    for (std::size_t i = 0; i < inst.entries().size(); ++i) {
      const InstanceEntry& e = inst.entries()[i];
      KElem d0 = e.K->from_rat(t0) - e.K->gen();
      KElem dv = e.K->from_rat(tr->value) - e.K->gen();
      for (int j = 0; j < e.K->real_embedding_count(); ++j) {
        int s = (d0.is_zero() ? 0 : e.K->sign_at_embedding(d0, j)) *
                (dv.is_zero() ? 0 : e.K->sign_at_embedding(dv, j));
        out.signs.push_back({static_cast<int>(i), j, s});
        if (s == 0) {
          out.overall = Ternary::No;
          out.detail = "degenerate zero sign at entry " + std::to_string(i) +
                       ", embedding " + std::to_string(j);
        } else if (common == 0) {
          common = s;
        } else if (s != common) {
          out.overall = Ternary::No;
          out.detail = "signs of (t0 - rho)(t_v - rho) differ between "
                       "embeddings";
        }
      }
    }
  }

  if (out.overall == Ternary::Yes && unknown) out.overall = Ternary::Unknown;
  return out;
}

inline bool check_condition1prime(const ConjectureInstance& inst,
                                  const Rat& t0) {
  return check_condition1prime_report(inst, t0).overall == Ternary::Yes;
}

// ---------------------------------------------------------------------------
// Condition (2): split fibers at the primes dividing P_i(t0)
// ---------------------------------------------------------------------------

struct Condition2Item {
  int entry_index = 0;
  Int p;
  std::string place;  // description of the place w with w(t0 - a_i) > 0
  long valuation = 0;
  Ternary degree_one = Ternary::Unknown;
};

struct Condition2Report {
  std::vector<Condition2Item> items;
  Ternary overall = Ternary::Yes;
  std::vector<std::string> failures;
};

// For every entry i, every prime p outside S dividing the numerator of
// P_i(t0) is located below some place w of k_i with w(t0 - a_i) > 0; at each
// such w the extension L_i must have a place of residue degree one.
inline Condition2Report check_condition2_report(const ConjectureInstance& inst,
                                                const Rat& t0, Factorizer& fz) {
  Condition2Report out;
  for (std::size_t i = 0; i < inst.entries().size(); ++i) {
    const InstanceEntry& e = inst.entries()[i];
    Rat r = e.K->min_poly().evaluate(t0);
    if (sgn(r) == 0) {
      out.overall = Ternary::No;
      out.failures.push_back("entry " + std::to_string(i) +
                             ": t0 is a root of the defining polynomial");
      continue;
    }
    for (const auto& [p, exp] : fz.factor(r).terms) {
      if (exp <= 0 || inst.in_s(p)) continue;
      if (valuation(Rat(den(t0)), p) > Valuation::of(0))
        throw NeedsSInclusionError(
            "t0 is not " + p.get_str() +
            "-integral although the numerator of P(t0) vanishes there; "
            "enlarge S by " + p.get_str());
      KElem diff = e.K->from_rat(t0) - e.K->gen();
      bool found = false;
      for (const PlaceAbove& w : e.K->places_above(p)) {
        Valuation vw = diff.is_zero() ? Valuation::infinity()
                                      : e.K->valuation_at_place(diff, w);
        if (!(vw > Valuation::of(0))) continue;
        found = true;
        Ternary d1 = e.L.has_degree_one_place_over(w);
        out.items.push_back({static_cast<int>(i), p, w.str(),
                             vw.is_infinite() ? -1 : vw.value(), d1});
        if (d1 == Ternary::No) {
          out.overall = Ternary::No;
          out.failures.push_back(
              "entry " + std::to_string(i) + ": no degree-one place of L over " +
              w.str());
        } else if (d1 == Ternary::Unknown && out.overall == Ternary::Yes) {
          out.overall = Ternary::Unknown;
        }
      }
      if (!found)
        throw DomainError(
            "check_condition2: no place above " + p.get_str() +
            " sees the positive valuation; inconsistent factorization");
    }
  }
  return out;
}

inline bool check_condition2(const ConjectureInstance& inst, const Rat& t0,
                             Factorizer& fz) {
  return check_condition2_report(inst, t0, fz).overall == Ternary::Yes;
}

// ---------------------------------------------------------------------------
// Full report for a proposed t0
// ---------------------------------------------------------------------------

enum class OverallVerdict { Pass, Fail, Conditional };

inline const char* to_string(OverallVerdict v) {
  switch (v) {
    case OverallVerdict::Pass: return "pass";
    case OverallVerdict::Fail: return "fail";
    default: return "conditional";
  }
}

struct ConditionReport {
  Rat t0;
  HypothesisReport hypotheses;
  Condition1Report cond1;
  Condition1PrimeReport cond1prime;
  Condition2Report cond2;
  OverallVerdict overall = OverallVerdict::Fail;
  std::vector<std::string> failures;     // witnesses for a Fail
  std::vector<std::string> assumptions;  // Undetermined statements a Pass leans on
};

// Assembles the verdict for t0.  Pass requires every hypothesis and every
// checkable condition to hold with nothing Undetermined; a report that fails
// nothing but relies on Undetermined statements is Conditional and lists
// them.  Condition (1') is evaluated and reported alongside without entering
// the overall verdict, which aggregates the hypotheses with (1) and (2).
inline ConditionReport check_t0(const ConjectureInstance& inst, const Rat& t0,
                                Factorizer& fz, const HypothesisReport& hyp) {
  ConditionReport out;
  out.t0 = t0;
  out.hypotheses = hyp;
  out.cond1 = check_condition1_report(inst, t0);
  out.cond1prime = check_condition1prime_report(inst, t0);
  try {
    out.cond2 = check_condition2_report(inst, t0, fz);
  } catch (const NeedsSInclusionError& err) {
    out.cond2.overall = Ternary::No;
    out.cond2.failures.push_back(err.what());
  }

  for (const HypothesisItem& it : hyp.items) {
    if (it.verdict.not_norm())
      out.failures.push_back("hypothesis at entry " +
                             std::to_string(it.entry_index) + ", " +
                             it.place.str() + ": " + it.verdict.detail);
    else if (it.verdict.undetermined())
      out.assumptions.push_back("hypothesis at entry " +
                                std::to_string(it.entry_index) + ", " +
                                it.place.str() + " assumed (" +
                                to_string(it.verdict.reason) + ")");
  }
  for (const Condition1Item& it : out.cond1.items) {
    if (it.ok == Ternary::No)
      out.failures.push_back("condition (1) fails at " + it.place.str() +
                             ": " + it.detail);
    else if (it.ok == Ternary::Unknown)
      out.assumptions.push_back("condition (1) unchecked at " +
                                it.place.str() + " (no target)");
  }
  for (const std::string& f : out.cond2.failures)
    out.failures.push_back("condition (2): " + f);
  for (const Condition2Item& it : out.cond2.items)
    if (it.degree_one == Ternary::Unknown)
      out.assumptions.push_back("condition (2) undetermined at entry " +
                                std::to_string(it.entry_index) + ", " +
                                it.place);

  out.overall = !out.failures.empty()
                    ? OverallVerdict::Fail
                    : (out.assumptions.empty() ? OverallVerdict::Pass
                                               : OverallVerdict::Conditional);
  return out;
}

inline ConditionReport check_t0(const ConjectureInstance& inst, const Rat& t0,
                                Factorizer& fz) {
  return check_t0(inst, t0, fz, verify_hypotheses(inst));
}

// ---------------------------------------------------------------------------
// Search for t0
// ---------------------------------------------------------------------------

enum class DenominatorPolicy {
  UnitOnly,  // mu = 1
  SUnit,     // mu = 1 and every product of S-primes up to the height bound
};

struct SearchOptions {
  Int height_bound = 100;
  DenominatorPolicy denominators = DenominatorPolicy::SUnit;
  long max_hits = 0;  // 0: collect every hit up to the bound
  int jobs = 1;
};

struct SearchStats {
  long long candidates = 0;
  std::map<std::string, long long> failures;  // first failing reason, per candidate
  bool infeasible_at_precision = false;
  std::string infeasible_detail;
};

struct SearchResult {
  std::vector<ConditionReport> hits;
  SearchStats stats;
  Int class_modulus = 1;  // congruence class of the numerator for mu = 1
  Int class_residue = 0;
};

namespace detail {

// Congruence forced on the numerator lambda by one finite target once the
// denominator mu is fixed: v_p(lambda/mu - t_v) >= N translates into
// lambda = mu t_v mod p^(N + v_p(mu)).  Returns false when no integer lambda
// can satisfy it (the target has a pole deeper than mu provides).
inline bool lambda_congruence(const LocalTarget& t, const Int& mu,
                              Congruence& out) {
  const Int& p = t.place.p;
  long vmu = valuation_nonzero(Rat(mu), p);
  long m = t.precision + vmu;
  Rat c = Rat(mu) * t.value;
  if (sgn(c) == 0) {
    out = {pow_int(p, m), 0};
    return true;
  }
  long vc = valuation_nonzero(c, p);
  if (vc < 0) return false;
  Int mod = pow_int(p, m);
  out = {mod, rat_mod(c, mod)};
  return true;
}

inline std::vector<Int> s_unit_denominators(const std::vector<Int>& primes,
                                            const Int& bound) {
  std::vector<Int> out{1};
  for (const Int& p : primes) {
    std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      Int m = out[i] * p;
      while (m <= bound) {
        out.push_back(m);
        m *= p;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Enumerates t0 = lambda/mu with lambda in the congruence class forced by
// the finite targets, mu over the denominator policy, and height
// max(|lambda|, mu) <= bound, in increasing height (ties: smaller |lambda|
// first, then positive before negative).  Returns every candidate whose full
// report is Pass or Conditional; each hit is re-verified from scratch before
// being returned.  An instance with a NotNorm hypothesis is rejected
// upfront; incompatible targets surface as CrtIncompatibleError.
inline SearchResult search_t0(const ConjectureInstance& inst,
                              const SearchOptions& opts, Factorizer& fz) {
  HypothesisReport hyp = verify_hypotheses(inst);
  for (const HypothesisItem& it : hyp.items)
    if (it.verdict.not_norm())
      throw InfeasibleError(
          "search_t0: the instance is vacuous; hypothesis fails at entry " +
          std::to_string(it.entry_index) + ", " + it.place.str() + ": " +
          it.verdict.detail);

  std::vector<LocalTarget> finite_targets;
  for (const LocalTarget& t : inst.targets())
    if (!t.place.is_real) finite_targets.push_back(t);
  const LocalTarget* real_target = inst.target_at(PlaceOfQ::real());

  std::vector<Int> mus{1};
  if (opts.denominators == DenominatorPolicy::SUnit)
    mus = detail::s_unit_denominators(inst.s_primes(), opts.height_bound);

  SearchResult out;
  struct Candidate {
    Int lam, mu;
  };
  std::vector<Candidate> cands;
  bool any_class = false;
  for (const Int& mu : mus) {
    CongruenceSystem sys;
    bool feasible = true;
    for (const LocalTarget& t : finite_targets) {
      Congruence c;
      if (!detail::lambda_congruence(t, mu, c)) {
        feasible = false;
        break;
      }
      sys.push_back(c);
    }
    if (!feasible) continue;
    auto [r, M] = crt_solve(sys);
    any_class = true;
    if (mu == 1) {
      out.class_modulus = M;
      out.class_residue = r;
    }
    // Walk the class within [-bound, bound].
    Int start = r - ((r + opts.height_bound) / M) * M;
    for (Int lam = start; lam <= opts.height_bound; lam += M) {
      if (lam < -opts.height_bound) continue;
      if (gcd(lam, mu) != 1) continue;
      cands.push_back({lam, mu});
    }
  }
  if (!any_class) {
    out.stats.infeasible_at_precision = true;
    out.stats.infeasible_detail =
        "no denominator in the policy reaches the target poles";
    return out;
  }

  std::sort(cands.begin(), cands.end(), [](const Candidate& a,
                                           const Candidate& b) {
    Int la = abs(a.lam), lb = abs(b.lam);
    Int ha = la > a.mu ? la : a.mu, hb = lb > b.mu ? lb : b.mu;
    if (ha != hb) return ha < hb;
    if (la != lb) return la < lb;
    if ((a.lam < 0) != (b.lam < 0)) return b.lam < 0;
    return a.mu < b.mu;
  });

  // First failing reason for the histogram, in the order the conditions are
  // stated: closeness first, then the split-fiber condition by prime.
  auto failure_key = [](const ConditionReport& rep) -> std::string {
    for (const Condition1Item& it : rep.cond1.items)
      if (it.ok == Ternary::No) return "condition1 " + it.place.str();
    for (const Condition2Item& it : rep.cond2.items)
      if (it.degree_one == Ternary::No) return "p=" + it.p.get_str();
    if (rep.cond2.overall == Ternary::No) return "condition2";
    return "other";
  };

  struct Outcome {
    bool hit = false;
    std::string key;
    ConditionReport rep;
  };

  auto evaluate = [&](const Candidate& c, Factorizer& worker) -> Outcome {
    Outcome o;
    Rat t0 = make_rat(c.lam, c.mu);
    if (real_target && abs(t0 - real_target->value) > real_target->epsilon) {
      o.key = "condition1 real";
      return o;
    }
    try {
      o.rep = check_t0(inst, t0, worker, hyp);
    } catch (const UnfactoredError&) {
      o.key = "unfactored";
      return o;
    }
    if (o.rep.overall == OverallVerdict::Fail) {
      o.key = failure_key(o.rep);
      return o;
    }
    o.hit = true;
    return o;
  };

  const int jobs = std::max(1, opts.jobs);
  std::size_t done = 0;
  while (done < cands.size()) {
    std::size_t block = std::min(cands.size() - done,
                                 static_cast<std::size_t>(jobs) * 64);
    std::vector<Outcome> outcomes(block);
    if (jobs == 1) {
      for (std::size_t i = 0; i < block; ++i)
        outcomes[i] = evaluate(cands[done + i], fz);
    } else {
      std::vector<std::thread> pool;
      std::size_t chunk = (block + jobs - 1) / jobs;
      for (int w = 0; w < jobs; ++w) {
        std::size_t lo = w * chunk, hi = std::min(block, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi] {
          Factorizer worker(1);
          for (std::size_t i = lo; i < hi; ++i)
            outcomes[i] = evaluate(cands[done + i], worker);
        });
      }
      for (std::thread& th : pool) th.join();
    }
    for (std::size_t i = 0; i < block; ++i) {
      ++out.stats.candidates;
      Outcome& o = outcomes[i];
      if (!o.hit) {
        ++out.stats.failures[o.key];
        continue;
      }
      // Re-verify from scratch; a disagreement is a bug, not a result.
      ConditionReport fresh = check_t0(inst, o.rep.t0, fz);
      if (fresh.overall != o.rep.overall || fresh.failures != o.rep.failures ||
          fresh.assumptions != o.rep.assumptions)
        throw DomainError("search_t0: re-verification disagreed at t0 = " +
                          rat_str(o.rep.t0));
      out.hits.push_back(std::move(fresh));
      if (opts.max_hits > 0 &&
          static_cast<long>(out.hits.size()) >= opts.max_hits)
        return out;
    }
    done += block;
  }
  return out;
}

}  // namespace splitval
