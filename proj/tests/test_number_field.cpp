#include "splitval/number_field.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <vector>

using namespace splitval;

static PolyQ P(std::initializer_list<long> coeffs_ascending) {
  std::vector<Rat> c;
  for (long x : coeffs_ascending) c.emplace_back(x);
  return PolyQ(c);
}

TEST_CASE("irreducibility decisions over Q") {
  Factorizer fz(5);
  CHECK(is_irreducible_over_Q(P({0, 1}), fz));               // t
  CHECK(is_irreducible_over_Q(P({1, 0, 1}), fz));            // t^2+1
  CHECK_FALSE(is_irreducible_over_Q(P({-1, 0, 1}), fz));     // (t-1)(t+1)
  CHECK(is_irreducible_over_Q(P({-1, -1, 0, 1}), fz));       // t^3-t-1
  CHECK(is_irreducible_over_Q(P({-2, 0, 0, 1}), fz));        // t^3-2
  CHECK_FALSE(is_irreducible_over_Q(P({-8, 0, 0, 1}), fz));  // root 2
  // no rational root but a quadratic factor: needs the exact search
  CHECK(is_irreducible_over_Q(P({1, 0, 0, 0, 1}), fz));      // t^4+1
  CHECK_FALSE(is_irreducible_over_Q(P({4, 0, 0, 0, 1}), fz));   // t^4+4
  CHECK_FALSE(is_irreducible_over_Q(P({-4, 0, 0, 0, 1}), fz));  // t^4-4
  CHECK(is_irreducible_over_Q(P({-2, 0, 0, 0, 0, 1}), fz));     // t^5-2
  CHECK(is_irreducible_over_Q(P({-1, -1, 0, 0, 0, 1}), fz));    // t^5-x-1
  CHECK_FALSE(is_irreducible_over_Q(P({1, 1, 0, 0, 0, 1}), fz));  // t^5+t+1
  CHECK(is_irreducible_over_Q(P({-2, 0, 0, 0, 0, 0, 0, 1}), fz));  // t^7-2
  // (t^3-2)(t^3-3): only the cubic search can see it
  CHECK_FALSE(is_irreducible_over_Q(P({6, 0, 0, -5, 0, 0, 1}), fz));
  // not squarefree
  CHECK_FALSE(is_irreducible_over_Q(P({1, 0, 2, 0, 1}), fz));
  // rational coefficients: (t^2 + 1/4) irreducible, (t^2 - 1/4) not
  CHECK(is_irreducible_over_Q(PolyQ({make_rat(1, 4), Rat(0), Rat(1)}), fz));
  CHECK_FALSE(is_irreducible_over_Q(PolyQ({make_rat(-1, 4), Rat(0), Rat(1)}), fz));
}

TEST_CASE("field construction and invariants") {
  auto gauss = NumberField::make(P({1, 0, 1}));
  CHECK(gauss->degree() == 2);
  CHECK(gauss->disc() == Rat(-4));
  CHECK(gauss->bad_primes() == std::vector<Int>{2});
  CHECK(gauss->real_embedding_count() == 0);
  CHECK(gauss->is_totally_imaginary());

  auto cubic = NumberField::make(P({-2, 0, 0, 1}));
  CHECK(cubic->disc() == Rat(-108));
  CHECK(cubic->bad_primes() == std::vector<Int>{2, 3});
  CHECK(cubic->real_embedding_count() == 1);

  auto f23 = NumberField::make(P({-1, -1, 0, 1}));
  CHECK(f23->disc() == Rat(-23));
  CHECK(f23->bad_primes() == std::vector<Int>{23});
  CHECK(f23->real_embedding_count() == 1);

  auto rat = NumberField::make(P({0, 1}));
  CHECK(rat->is_rational());
  CHECK(rat->bad_primes().empty());
  CHECK(rat->real_embedding_count() == 1);

  CHECK_THROWS_AS(NumberField::make(P({-1, 0, 1})), DomainError);
  CHECK_THROWS_AS(NumberField::make(P({1, 0, 2})), DomainError);
}

TEST_CASE("Gaussian element arithmetic matches the complex model") {
  auto K = NumberField::make(P({1, 0, 1}));
  KElem i = K->gen();
  CHECK(i * i == K->from_rat(Rat(-1)));
  Rng rng(41);
  for (int t = 0; t < 100; ++t) {
    Rat a(random_int(rng, -30, 30)), b(random_int(rng, -30, 30));
    Rat c(random_int(rng, -30, 30)), d(random_int(rng, -30, 30));
    KElem x = K->from_poly(PolyQ({a, b}));
    KElem y = K->from_poly(PolyQ({c, d}));
    // (a+bi)(c+di) = (ac - bd) + (ad + bc)i
    CHECK(x * y == K->from_poly(PolyQ({a * c - b * d, a * d + b * c})));
    CHECK(x.norm() == a * a + b * b);
    if (!x.is_zero()) {
      CHECK(x * x.inverse() == K->one());
      CHECK((y / x) * x == y);
    }
  }
  CHECK(K->gen().pow(4) == K->one());
  CHECK_THROWS_AS(K->zero().inverse(), DomainError);
}

TEST_CASE("norm of the generator") {
  auto K = NumberField::make(P({-2, 0, 0, 1}));
  CHECK(K->gen().norm() == Rat(2));        // product of roots of t^3-2
  CHECK(K->from_rat(Rat(5)).norm() == Rat(125));
  CHECK((K->gen() - K->from_rat(Rat(1))).norm() == Rat(1));  // 1^3-2 -> -(P(1))
}

TEST_CASE("places above unramified primes") {
  auto K = NumberField::make(P({1, 0, 1}));  // Q(i)
  CHECK_THROWS_AS(K->places_above(2), RamifiedPrimeError);

  auto w13 = K->places_above(13);
  REQUIRE(w13.size() == 2);
  CHECK(w13[0].f == 1);
  CHECK(w13[1].f == 1);
  CHECK(K->splits_completely(13));

  auto w7 = K->places_above(7);
  REQUIRE(w7.size() == 1);
  CHECK(w7[0].f == 2);
  CHECK_FALSE(K->splits_completely(7));

  auto cubic = NumberField::make(P({-2, 0, 0, 1}));
  std::vector<int> degs5;
  for (auto& w : cubic->places_above(5)) degs5.push_back(w.f);
  std::sort(degs5.begin(), degs5.end());
  CHECK(degs5 == std::vector<int>{1, 2});
  CHECK(cubic->splits_completely(31));
}

TEST_CASE("valuations at places: frozen Gaussian cases") {
  auto K = NumberField::make(P({1, 0, 1}));
  KElem i = K->gen();
  KElem x = K->from_poly(P({2, 1}));  // 2 + i, norm 5
  auto ws = K->places_above(5);
  REQUIRE(ws.size() == 2);

  std::vector<long> vals;
  for (auto& w : ws) vals.push_back(K->valuation_at_place(x, w).value());
  std::sort(vals.begin(), vals.end());
  CHECK(vals == std::vector<long>{0, 1});

  for (auto& w : ws)
    CHECK(K->valuation_at_place(K->from_rat(Rat(5)), w) == Valuation::of(1));

  // (2+i)^3 (2-i) has valuations {3,1}
  KElem y = x.pow(3) * (K->from_rat(Rat(2)) - i);
  vals.clear();
  for (auto& w : ws) vals.push_back(K->valuation_at_place(y, w).value());
  std::sort(vals.begin(), vals.end());
  CHECK(vals == std::vector<long>{1, 3});

  // denominators: (2+i)/25 has valuations {-1,-2}
  KElem z = Rat(1, 25) * x;
  vals.clear();
  for (auto& w : ws) vals.push_back(K->valuation_at_place(z, w).value());
  std::sort(vals.begin(), vals.end());
  CHECK(vals == std::vector<long>{-2, -1});

  // deep power: (2+i)^10 needs real Hensel precision
  KElem deep = x.pow(10);
  vals.clear();
  for (auto& w : ws) vals.push_back(K->valuation_at_place(deep, w).value());
  std::sort(vals.begin(), vals.end());
  CHECK(vals == std::vector<long>{0, 10});

  CHECK(K->valuation_at_place(K->zero(), ws[0]).is_infinite());
  CHECK(K->valuation_at_place(i, ws[0]) == Valuation::of(0));
}

TEST_CASE("valuation sum formula as independent oracle") {
  // sum_w f_w v_w(x) = v_p(N(x)) for every unramified p; exercised over
  // random elements of three fields.
  std::vector<PolyQ> polys{P({1, 0, 1}), P({-2, 0, 0, 1}), P({-1, -1, 0, 1})};
  Rng rng(42);
  for (const PolyQ& mp : polys) {
    auto K = NumberField::make(mp);
    for (Int p : {Int(5), Int(7), Int(13), Int(31)}) {
      if (K->is_bad_prime(p)) continue;
      auto ws = K->places_above(p);
      for (int t = 0; t < 25; ++t) {
        std::vector<Rat> c;
        for (int j = 0; j < K->degree(); ++j) {
          Int nu = random_int(rng, -40, 40);
          Int de = random_int(rng, 1, 12);
          c.push_back(make_rat(nu, de));
        }
        KElem x = K->from_poly(PolyQ(c));
        if (x.is_zero()) continue;
        long lhs = 0;
        for (auto& w : ws)
          lhs += w.f * K->valuation_at_place(x, w).value();
        CHECK(lhs == valuation_nonzero(x.norm(), p));
      }
    }
  }
}

TEST_CASE("residue maps agree with valuations") {
  auto K = NumberField::make(P({1, 0, 1}));
  Rng rng(43);
  for (Int p : {Int(5), Int(13), Int(17)}) {
    auto ws = K->places_above(p);
    for (int t = 0; t < 40; ++t) {
      KElem x = K->from_poly(PolyQ({Rat(random_int(rng, -60, 60)),
                                    Rat(random_int(rng, -60, 60))}));
      for (auto& w : ws) {
        bool vanishes = K->residue(x, w).is_zero();
        Valuation v = K->valuation_at_place(x, w);
        bool positive = v.is_infinite() || v.value() > 0;
        CHECK(vanishes == positive);
      }
    }
  }
  // the cubic field: residue of the generator is a root of t^3-2 mod p
  auto cubic = NumberField::make(P({-2, 0, 0, 1}));
  for (auto& w : cubic->places_above(31)) {
    FqElem r = cubic->residue(cubic->gen(), w);
    CHECK((r * r * r) == w.res_field->from_int(2));
  }
}

TEST_CASE("signs at real embeddings") {
  auto cubic = NumberField::make(P({-2, 0, 0, 1}));  // real root 2^(1/3)
  KElem a = cubic->gen();
  CHECK(cubic->sign_at_embedding(a, 0) == 1);
  CHECK(cubic->sign_at_embedding(a - cubic->from_rat(Rat(1)), 0) == 1);
  CHECK(cubic->sign_at_embedding(a - cubic->from_rat(Rat(2)), 0) == -1);
  CHECK(cubic->sign_at_embedding(cubic->zero(), 0) == 0);
  CHECK(cubic->sign_at_embedding(cubic->from_rat(Rat(-3)), 0) == -1);
  CHECK_THROWS_AS(cubic->sign_at_embedding(a, 1), DomainError);

  // t^2 - 2 has two real embeddings: t-1 is negative at -sqrt2, positive at sqrt2
  auto rt2 = NumberField::make(P({-2, 0, 1}));
  KElem b = rt2->gen() - rt2->from_rat(Rat(1));
  CHECK(rt2->sign_at_embedding(b, 0) == -1);
  CHECK(rt2->sign_at_embedding(b, 1) == 1);
}

TEST_CASE("relative extensions over Q") {
  auto Q = NumberField::make(P({0, 1}));
  auto L = RelativeExtension::make(Q, kpoly_from_rat_coeffs(Q, {Rat(1), Rat(0), Rat(1)}));
  CHECK(L.degree() == 2);
  CHECK(L.bad_primes() == std::vector<Int>{2});

  auto w13 = Q->places_above(13);
  REQUIRE(w13.size() == 1);
  auto s13 = L.residue_degrees_over(w13[0]);
  CHECK_FALSE(s13.ramified_case);
  CHECK(s13.degrees == std::vector<int>{1, 1});
  CHECK(L.has_degree_one_place_over(w13[0]) == Ternary::Yes);

  auto w7 = Q->places_above(7);
  auto s7 = L.residue_degrees_over(w7[0]);
  CHECK(s7.degrees == std::vector<int>{2});
  CHECK(s7.degree_gcd() == 2);
  CHECK(L.has_degree_one_place_over(w7[0]) == Ternary::No);

  auto w2 = std::vector<PlaceAbove>{};
  CHECK_THROWS_AS(L.residue_degrees_over([&] {
    PlaceAbove w;
    w.p = 2;
    return w;
  }()), RamifiedPrimeError);

  // reducible g: etale algebra Q x Q(i) via y(y^2+1)... keep it separable
  auto M = RelativeExtension::make(
      Q, kpoly_from_rat_coeffs(Q, {Rat(0), Rat(1), Rat(0), Rat(1)}));  // y^3+y
  auto m7 = M.residue_degrees_over(w7[0]);
  CHECK(m7.degrees == std::vector<int>{1, 2});
  CHECK(M.has_degree_one_place_over(w7[0]) == Ternary::Yes);

  CHECK_THROWS_AS(
      RelativeExtension::make(Q, kpoly_from_rat_coeffs(Q, {Rat(1), Rat(2), Rat(1)})),
      DomainError);  // (y+1)^2 not separable
}

TEST_CASE("relative extensions over Q(i)") {
  auto K = NumberField::make(P({1, 0, 1}));
  // y^2 - i
  KPoly g({-K->gen(), K->zero(), K->one()});
  auto L = RelativeExtension::make(K, g);
  CHECK(L.degree() == 2);
  CHECK(L.is_bad_prime(2));

  for (auto& w : K->places_above(17))
    CHECK(L.has_degree_one_place_over(w) == Ternary::Yes);
  for (auto& w : K->places_above(13))
    CHECK(L.has_degree_one_place_over(w) == Ternary::No);

  // at an inert place, i reduces to a square in F_49 and y^2-i splits
  auto w7 = K->places_above(7);
  REQUIRE(w7.size() == 1);
  auto s = L.residue_degrees_over(w7[0]);
  CHECK_FALSE(s.ramified_case);
  CHECK(static_cast<int>(s.degrees.size()) >= 1);
  int total = 0;
  for (int d : s.degrees) total += d;
  CHECK(total == 2);
}
