#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <vector>

#include "splitval/approx.hpp"
#include "splitval/instance.hpp"

using namespace splitval;

namespace {

PolyQ pq(std::initializer_list<long> cs) {
  std::vector<Rat> v;
  for (long c : cs) v.emplace_back(c);
  return PolyQ(std::move(v));
}

InstanceEntry gauss_entry(Factorizer& fz) {
  return make_entry(pq({0, 1}), {pq({1}), PolyQ(), pq({1})}, pq({1}), fz);
}

LinearForm lf(std::initializer_list<long> cs) {
  LinearForm f;
  for (long c : cs) f.coeffs.emplace_back(c);
  return f;
}

// Independent validity oracle for Gaussian norm multipliers: t > 0 congruent
// to 2 mod 8 whose odd prime factors outside {v0} all split in Q(i).
bool gauss_valid_t(long t, long v0) {
  if (t <= 0 || t % 8 != 2) return false;
  long m = t;
  while (m % 2 == 0) m /= 2;
  for (long q = 3; q * q <= m; q += 2)
    while (m % q == 0) {
      if (q != v0 && q % 4 != 1) return false;
      m /= q;
    }
  if (m > 1 && m != v0 && m % 4 != 1) return false;
  return true;
}

}  // namespace

TEST_CASE("line trick: plane minus the origin") {
  Factorizer fz(3);
  PuncturedAffineProblem prob;
  prob.n = 2;
  prob.excluded.push_back({lf({0, 1, 0}), lf({0, 0, 1})});  // x = y = 0
  prob.s_primes = {3};
  prob.v0 = PlaceOfQ::finite(5);
  prob.targets.push_back(VectorTarget::at_prime(3, {Rat(1), Rat(1)}, 2));

  LineTrickResult res = line_trick_solve(prob, fz);
  CHECK(res.q == std::vector<Rat>{Rat(1), Rat(1)});
  for (const Rat& c : res.point) CHECK(valuation(c - Rat(1), 3) >= 2);
  CHECK_FALSE(sgn(res.point[0]) == 0 && sgn(res.point[1]) == 0);
  for (const Rat& c : res.point) CHECK(Int(c.get_den()) == 1);
  // and the point genuinely moved along the line
  CHECK(sgn(res.lambda) != 0);
}

TEST_CASE("line trick: input validation") {
  Factorizer fz(3);

  SECTION("dimension 1 has no codimension-2 locus") {
    PuncturedAffineProblem p1;
    p1.n = 1;
    p1.v0 = PlaceOfQ::finite(5);
    CHECK_THROWS_AS(line_trick_solve(p1, fz), DomainError);
  }

  SECTION("a target on the excluded locus is rejected") {
    PuncturedAffineProblem p2;
    p2.n = 2;
    p2.excluded.push_back({lf({0, 1, 0}), lf({0, 0, 1})});
    p2.v0 = PlaceOfQ::finite(5);
    p2.targets.push_back(VectorTarget::at_prime(3, {Rat(0), Rat(0)}, 1));
    CHECK_THROWS_WITH(line_trick_solve(p2, fz),
                      Catch::Matchers::ContainsSubstring("excluded locus"));
  }

  SECTION("proportional constraint forms are not codimension 2") {
    PuncturedAffineProblem p3;
    p3.n = 2;
    p3.excluded.push_back({lf({0, 1, 1}), lf({0, 2, 2})});
    p3.v0 = PlaceOfQ::finite(5);
    CHECK_THROWS_WITH(line_trick_solve(p3, fz),
                      Catch::Matchers::ContainsSubstring("codimension"));
  }

  SECTION("targets may not sit at v0") {
    PuncturedAffineProblem p4;
    p4.n = 2;
    p4.v0 = PlaceOfQ::finite(5);
    p4.targets.push_back(VectorTarget::at_prime(5, {Rat(1), Rat(1)}, 1));
    CHECK_THROWS_AS(line_trick_solve(p4, fz), DomainError);
  }
}

TEST_CASE("line trick: empty locus reduces to plain CRT approximation") {
  Factorizer fz(3);
  PuncturedAffineProblem prob;
  prob.n = 2;
  prob.v0 = PlaceOfQ::real();
  prob.targets.push_back(VectorTarget::at_prime(3, {Rat(2), Rat(5)}, 2));
  prob.targets.push_back(VectorTarget::at_prime(7, {Rat(3), Rat(4)}, 1));

  LineTrickResult res = line_trick_solve(prob, fz);
  CHECK(valuation(res.point[0] - Rat(2), 3) >= 2);
  CHECK(valuation(res.point[1] - Rat(5), 3) >= 2);
  CHECK(valuation(res.point[0] - Rat(3), 7) >= 1);
  CHECK(valuation(res.point[1] - Rat(4), 7) >= 1);
}

TEST_CASE("line trick: real window bought with v0 denominators") {
  Factorizer fz(3);
  PuncturedAffineProblem prob;
  prob.n = 2;
  prob.excluded.push_back({lf({0, 1, 0}), lf({0, 0, 1})});
  prob.s_primes = {3, 5};
  prob.v0 = PlaceOfQ::finite(5);
  prob.targets.push_back(VectorTarget::at_prime(3, {Rat(2), Rat(2)}, 2));
  prob.targets.push_back(
      VectorTarget::at_real({Rat(1, 3), Rat(1, 2)}, Rat(1, 10)));

  LineTrickResult res = line_trick_solve(prob, fz);
  CHECK(valuation(res.point[0] - Rat(2), 3) >= 2);
  CHECK(valuation(res.point[1] - Rat(2), 3) >= 2);
  CHECK(abs(res.point[0] - Rat(1, 3)) <= Rat(1, 10));
  CHECK(abs(res.point[1] - Rat(1, 2)) <= Rat(1, 10));
  for (const Rat& c : res.point) {
    Int den(c.get_den());
    if (den == 1) continue;
    for (const Int& p : fz.support(Rat(den))) CHECK((p == 3 || p == 5));
  }
}

TEST_CASE("line trick: randomized problems, posts re-checked externally") {
  Factorizer fz(3);
  Rng rng(5);
  int solved = 0;
  for (int round = 0; round < 25; ++round) {
    long n = 2 + static_cast<long>(round % 2);
    PuncturedAffineProblem prob;
    prob.n = n;
    prob.v0 = PlaceOfQ::finite(5);
    prob.s_primes = {5};

    // one or two random independent codimension-2 constraints
    int nc = 1 + (round % 2);
    for (int c = 0; c < nc; ++c) {
      for (int tries = 0;; ++tries) {
        REQUIRE(tries < 50);
        LinearForm f1, f2;
        for (long j = 0; j <= n; ++j) {
          f1.coeffs.emplace_back(random_int(rng, -3, 3));
          f2.coeffs.emplace_back(random_int(rng, -3, 3));
        }
        CodimTwoConstraint cc{f1, f2};
        if (detail::independent_pair(cc)) {
          prob.excluded.push_back(cc);
          break;
        }
      }
    }

    // random finite targets off the locus
    std::vector<Int> ps = {3, 7, 11};
    for (std::size_t i = 0; i < 1 + (static_cast<std::size_t>(round) % 2);
         ++i) {
      for (int tries = 0;; ++tries) {
        REQUIRE(tries < 80);
        std::vector<Rat> pt;
        for (long j = 0; j < n; ++j) pt.emplace_back(random_int(rng, -4, 4));
        if (!detail::on_locus(prob.excluded, pt)) {
          prob.targets.push_back(
              VectorTarget::at_prime(ps[i], std::move(pt),
                                     1 + (round % 3)));
          break;
        }
      }
    }

    LineTrickResult res = line_trick_solve(prob, fz, 77 + round);
    ++solved;
    for (const VectorTarget& t : prob.targets)
      for (long j = 0; j < n; ++j)
        CHECK(valuation(res.point[static_cast<std::size_t>(j)] -
                            t.point[static_cast<std::size_t>(j)],
                        t.place.p) >= t.precision);
    CHECK_FALSE(detail::on_locus(prob.excluded, res.point));
    for (const Rat& c : res.point) {
      Int den(c.get_den());
      if (den == 1) continue;
      for (const Int& p : fz.support(Rat(den)))
        CHECK((p == 3 || p == 5 || p == 7 || p == 11));
    }
  }
  CHECK(solved == 25);
}

TEST_CASE("norm multiplier: gaussian integers") {
  Factorizer fz(3);

  SECTION("a target already reached by a tiny norm") {
    NormMultiplierProblem prob = make_norm_multiplier_problem(
        pq({1, 0, 1}), {}, {LocalTarget::at_prime(2, Rat(2), 3)}, 5, fz);
    CHECK(prob.s_primes == std::vector<Int>{2});
    CHECK(prob.v0 == 5);

    NormMultiplierCertificate cert =
        norm_multiplier_solve(prob, NormMultiplierOptions{}, fz);
    CHECK(cert.t == Rat(2));
    CHECK(cert.x_rep == pq({1, 1}));  // x = 1 + i
    CHECK(cert.attested.empty());
    CHECK(cert.v0_power == 0);
    CHECK(cert.verified);
  }

  SECTION("a real window forces the larger witness 50 = N(1 - 7i)") {
    NormMultiplierProblem prob = make_norm_multiplier_problem(
        pq({1, 0, 1}), {},
        {LocalTarget::at_prime(2, Rat(2), 3),
         LocalTarget::at_real(Rat(50), Rat(25))},
        5, fz);
    NormMultiplierCertificate cert =
        norm_multiplier_solve(prob, NormMultiplierOptions{}, fz);
    CHECK(cert.t == Rat(50));
    CHECK(cert.x_rep == pq({1, -7}));
    CHECK(cert.attested.empty());  // 50 = 2 * 5^2 with 2 in S, 5 = v0
    CHECK(cert.verified);
    CHECK(cert.closeness.size() == 2);
  }

  SECTION("the enumeration oracle validates both witnesses") {
    std::set<long> valid;
    for (long a = -20; a <= 20; ++a)
      for (long b = -20; b <= 20; ++b)
        if (gauss_valid_t(a * a + b * b, 5)) valid.insert(a * a + b * b);
    CHECK(valid.count(2) == 1);
    CHECK(valid.count(50) == 1);
  }

  SECTION("determinism, including across thread counts") {
    NormMultiplierProblem prob = make_norm_multiplier_problem(
        pq({1, 0, 1}), {},
        {LocalTarget::at_prime(2, Rat(2), 3),
         LocalTarget::at_real(Rat(50), Rat(25))},
        5, fz);
    NormMultiplierOptions par;
    par.jobs = 4;
    NormMultiplierCertificate c2 = norm_multiplier_solve(prob, par, fz);
    CHECK(c2.t == Rat(50));
    CHECK(c2.x_rep == pq({1, -7}));
  }

  SECTION("an impossible window exhausts the box") {
    NormMultiplierProblem prob = make_norm_multiplier_problem(
        pq({1, 0, 1}), {},
        {LocalTarget::at_prime(2, Rat(2), 3),
         LocalTarget::at_real(Rat(3), Rat(1, 4))},
        5, fz);
    CHECK_THROWS_AS(norm_multiplier_solve(prob, NormMultiplierOptions{}, fz),
                    NoWitnessError);
  }
}

TEST_CASE("norm multiplier: problem validation") {
  Factorizer fz(3);

  SECTION("locally infeasible targets are rejected") {
    CHECK_THROWS_WITH(
        make_norm_multiplier_problem(
            pq({1, 0, 1}), {}, {LocalTarget::at_prime(2, Rat(-1), 3)}, 5, fz),
        Catch::Matchers::ContainsSubstring("ill-posed"));
  }

  SECTION("non-Galois fields fail the splitting scan") {
    CHECK_THROWS_WITH(
        make_norm_multiplier_problem(pq({-2, 0, 0, 1}), {}, {}, 0, fz),
        Catch::Matchers::ContainsSubstring("Galois"));
  }

  SECTION("v0 must split completely and avoid S") {
    CHECK_THROWS_AS(make_norm_multiplier_problem(
                        pq({1, 0, 1}), {},
                        {LocalTarget::at_prime(2, Rat(2), 3)}, 7, fz),
                    DomainError);  // 7 is inert in Q(i)
    CHECK_THROWS_AS(make_norm_multiplier_problem(
                        pq({1, 0, 1}), {},
                        {LocalTarget::at_prime(2, Rat(2), 3)}, 2, fz),
                    DomainError);  // 2 lies in S
  }

  SECTION("pole targets and non-integral polynomials are out of scope") {
    CHECK_THROWS_AS(make_norm_multiplier_problem(
                        pq({1, 0, 1}), {},
                        {LocalTarget::at_prime(2, Rat(1, 2), 3)}, 5, fz),
                    DomainError);
    CHECK_THROWS_AS(make_norm_multiplier_problem(
                        PolyQ({Rat(1, 2), Rat(0), Rat(1)}), {}, {}, 0, fz),
                    DomainError);
  }
}

TEST_CASE("norm multiplier: cyclic cubic field") {
  Factorizer fz(3);
  // x^3 - 3x - 1 is cyclic of discriminant 81; primes split completely
  // exactly when p = +-1 mod 9.

  SECTION("automatic split-prime choice") {
    NormMultiplierProblem prob = make_norm_multiplier_problem(
        pq({-1, -3, 0, 1}), {}, {LocalTarget::at_prime(2, Rat(8), 2)}, 0, fz);
    CHECK(prob.v0 == 17);
    CHECK(prob.s_primes == std::vector<Int>{2, 3});
  }

  SECTION("a witness with a nontrivial split attestation") {
    NormMultiplierProblem prob = make_norm_multiplier_problem(
        pq({-1, -3, 0, 1}), {},
        {LocalTarget::at_prime(2, Rat(8), 2),
         LocalTarget::at_real(Rat(1100), Rat(50))},
        19, fz);
    NormMultiplierCertificate cert =
        norm_multiplier_solve(prob, NormMultiplierOptions{}, fz);
    CHECK(cert.t == Rat(1088));  // 2^6 * 17 = N(4 + 4 theta^2)
    CHECK(cert.x_rep == pq({4, 0, 4}));
    REQUIRE(cert.attested.size() == 1);
    CHECK(cert.attested[0].p == 17);
    CHECK(cert.attested[0].splits);
    CHECK(cert.attested[0].exponent == 1);
    CHECK(cert.verified);
    CHECK(valuation(cert.t - Rat(8), 2) >= 2);
  }
}

TEST_CASE("fibers of the norm-form variety") {
  Factorizer fz(3);
  InstanceEntry e = gauss_entry(fz);
  ConjectureInstance inst = ConjectureInstance::make(
      {e}, {2}, {LocalTarget::at_real(Rat(51), Rat(50))}, fz);

  SECTION("split and unit places say Yes") {
    std::vector<WFiberItem> items = w_fiber_verify(
        inst, Rat(25), {PlaceOfQ::finite(5), PlaceOfQ::finite(3)});
    REQUIRE(items.size() == 2);
    CHECK(items[0].verdict.is_norm());
    CHECK(items[1].verdict.is_norm());
  }

  SECTION("odd valuation at an inert prime says No") {
    std::vector<WFiberItem> items =
        w_fiber_verify(inst, Rat(3), {PlaceOfQ::finite(3)});
    REQUIRE(items.size() == 1);
    CHECK(items[0].verdict.not_norm());
  }

  SECTION("bridge: search hits never produce a No outside S") {
    Factorizer fz2(3);
    ConjectureInstance full = ConjectureInstance::make(
        {gauss_entry(fz2)}, {2},
        {LocalTarget::at_prime(2, Rat(1), 3),
         LocalTarget::at_real(Rat(51), Rat(50))},
        fz2);
    SearchOptions opts;
    opts.height_bound = 100;
    SearchResult res = search_t0(full, opts, fz2);
    REQUIRE(res.hits.size() == 8);
    std::vector<PlaceOfQ> places = {PlaceOfQ::real()};
    for (long p : {3, 5, 7, 11, 13, 17, 41, 73, 89, 97})
      places.push_back(PlaceOfQ::finite(p));
    for (const ConditionReport& hit : res.hits) {
      for (const WFiberItem& item : w_fiber_verify(full, hit.t0, places))
        CHECK_FALSE(item.verdict.not_norm());
    }
  }
}
