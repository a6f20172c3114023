#include "splitval/polyq.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <vector>

using namespace splitval;

static PolyQ P(std::initializer_list<long> coeffs_ascending) {
  std::vector<Rat> c;
  for (long x : coeffs_ascending) c.emplace_back(x);
  return PolyQ(c);
}

static PolyQ random_poly(Rng& rng, int maxdeg, long coeff_bound) {
  int d = static_cast<int>(random_int(rng, 0, maxdeg).get_si());
  std::vector<Rat> c;
  for (int i = 0; i <= d; ++i)
    c.emplace_back(Rat(random_int(rng, -coeff_bound, coeff_bound)));
  return PolyQ(c);
}

// ---------------------------------------------------------------------------
// Oracles
// ---------------------------------------------------------------------------

// Resultant via the Sylvester matrix and exact Gaussian elimination —
// independent of the Euclidean algorithm in the library.
static Rat oracle_resultant(const PolyQ& a, const PolyQ& b) {
  int m = a.degree(), n = b.degree();
  REQUIRE(m >= 0);
  REQUIRE(n >= 0);
  int size = m + n;
  if (size == 0) return Rat(1);
  std::vector<std::vector<Rat>> M(size, std::vector<Rat>(size, Rat(0)));
  for (int row = 0; row < n; ++row)
    for (int k = 0; k <= m; ++k)
      M[row][row + k] = a[static_cast<std::size_t>(m - k)];
  for (int row = 0; row < m; ++row)
    for (int k = 0; k <= n; ++k)
      M[n + row][row + k] = b[static_cast<std::size_t>(n - k)];
  Rat det(1);
  for (int col = 0; col < size; ++col) {
    int pivot = -1;
    for (int r = col; r < size; ++r)
      if (sgn(M[r][col]) != 0) { pivot = r; break; }
    if (pivot < 0) return Rat(0);
    if (pivot != col) {
      std::swap(M[pivot], M[col]);
      det = -det;
    }
    det *= M[col][col];
    for (int r = col + 1; r < size; ++r) {
      Rat f = M[r][col] / M[col][col];
      for (int c2 = col; c2 < size; ++c2) M[r][c2] -= f * M[col][c2];
    }
  }
  return det;
}

// Root counting in an open interval by Descartes bounds + bisection
// (Vincent–Collins–Akritas style) — independent of Sturm chains.
static PolyQ compose_linear(const PolyQ& f, const Rat& a, const Rat& d) {
  // f(a + d*x)
  PolyQ acc;
  PolyQ lin({a, d});
  for (int i = f.degree(); i >= 0; --i)
    acc = acc * lin + PolyQ::constant(f[static_cast<std::size_t>(i)]);
  return acc;
}

static int descartes_variations(const PolyQ& f) {
  int count = 0, prev = 0;
  for (const Rat& c : f.coeffs()) {
    int s = sgn(c);
    if (s == 0) continue;
    if (prev != 0 && s != prev) ++count;
    prev = s;
  }
  return count;
}

static int oracle_count_roots(const PolyQ& f, const Rat& lo, const Rat& hi) {
  // number of roots of squarefree f in the open interval (lo, hi);
  // f(lo) != 0 and f(hi) != 0 are assumed.
  PolyQ g = compose_linear(f, lo, hi - lo);  // roots in (0,1)
  // h(x) = (1+x)^n g(1/(1+x)): roots of g in (0,1) <-> roots of h in (0,inf)
  std::vector<Rat> rev(g.coeffs().rbegin(), g.coeffs().rend());
  PolyQ h = compose_linear(PolyQ(rev), Rat(1), Rat(1));
  int v = descartes_variations(h);
  if (v == 0) return 0;
  if (v == 1) return 1;
  Rat mid = (lo + hi) / 2;
  int at_mid = sgn(f.evaluate(mid)) == 0 ? 1 : 0;
  return oracle_count_roots(f, lo, mid) + at_mid + oracle_count_roots(f, mid, hi);
}

// ---------------------------------------------------------------------------

TEST_CASE("polynomial ring basics") {
  PolyQ x = P({0, 1});
  CHECK((P({1, 1}) * P({-1, 1})) == P({-1, 0, 1}));
  CHECK(P({1, 2, 1}).degree() == 2);
  CHECK(P({0}).is_zero());
  CHECK(P({3, 0, 2}).evaluate(Rat(2)) == Rat(11));
  CHECK(P({1, 1, 1, 1}).derivative() == P({1, 2, 3}));
  CHECK(x.shifted_up(2) == P({0, 0, 0, 1}));
  CHECK(P({2, 4}).monic() == PolyQ({make_rat(1, 2), Rat(1)}));
}

TEST_CASE("division round-trips") {
  Rng rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    PolyQ a = random_poly(rng, 7, 20);
    PolyQ b = random_poly(rng, 4, 20);
    if (b.is_zero()) continue;
    auto [q, r] = divmod(a, b);
    CHECK(q * b + r == a);
    CHECK(r.degree() < b.degree());
  }
  CHECK_THROWS_AS(divmod(P({1, 1}), PolyQ()), DomainError);
}

TEST_CASE("gcd and extended gcd") {
  PolyQ f = P({-2, 1}) * P({1, 1}) * P({3, 1});
  PolyQ g = P({-2, 1}) * P({5, 1});
  CHECK(gcd_monic(f, g) == P({-2, 1}));

  Rng rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    PolyQ a = random_poly(rng, 5, 10);
    PolyQ b = random_poly(rng, 5, 10);
    if (a.is_zero() && b.is_zero()) continue;
    auto [d, u, v] = poly_exgcd(a, b);
    CHECK(u * a + v * b == d);
    if (!d.is_zero()) CHECK(d.is_monic());
    if (!a.is_zero()) CHECK(poly_mod(a, d).is_zero());
    if (!b.is_zero()) CHECK(poly_mod(b, d).is_zero());
  }
}

TEST_CASE("pow_mod matches naive powering") {
  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    PolyQ base = random_poly(rng, 3, 5);
    PolyQ modulus = random_poly(rng, 4, 5);
    if (modulus.degree() < 1) continue;
    long e = random_int(rng, 0, 12).get_si();
    PolyQ naive = PolyQ::constant(Rat(1));
    for (long i = 0; i < e; ++i) naive = poly_mod(naive * base, modulus);
    CHECK(pow_mod(base, Int(e), modulus) == naive);
  }
}

TEST_CASE("resultant agrees with the Sylvester determinant") {
  Rng rng(24);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    PolyQ a = random_poly(rng, 5, 8);
    PolyQ b = random_poly(rng, 5, 8);
    if (a.degree() < 1 || b.degree() < 1) continue;
    CHECK(resultant(a, b) == oracle_resultant(a, b));
    ++checked;
  }
  REQUIRE(checked > 100);
}

TEST_CASE("discriminants") {
  // deg 1 convention
  CHECK(discriminant(P({5, 3})) == Rat(1));
  // disc(x^2 + bx + c) = b^2 - 4c
  Rng rng(25);
  for (int trial = 0; trial < 50; ++trial) {
    Rat b(random_int(rng, -20, 20)), c(random_int(rng, -20, 20));
    CHECK(discriminant(PolyQ({c, b, Rat(1)})) == b * b - 4 * c);
  }
  // disc(x^3 + px + q) = -4p^3 - 27q^2
  for (int trial = 0; trial < 50; ++trial) {
    Rat p(random_int(rng, -20, 20)), q(random_int(rng, -20, 20));
    CHECK(discriminant(PolyQ({q, p, Rat(0), Rat(1)})) ==
          -4 * p * p * p - 27 * q * q);
  }
  CHECK(discriminant(P({-1, -1, 0, 1})) == Rat(-23));  // x^3 - x - 1
  CHECK(discriminant(P({-2, 0, 0, 1})) == Rat(-108));  // x^3 - 2
  CHECK_THROWS_AS(discriminant(P({7})), DomainError);
}

TEST_CASE("real root counting against the Descartes oracle") {
  // Frozen reference values first.
  CHECK(count_real_roots(P({-1, -1, 0, 1})) == 1);         // x^3 - x - 1
  CHECK(count_real_roots(P({1, 0, 1})) == 0);              // x^2 + 1
  CHECK(count_real_roots_open(P({-2, 0, 1}), Rat(0), Rat(2)) == 1);
  CHECK(count_real_roots(P({-2, 0, 1}) * P({-2, 0, 1})) == 2);  // distinct

  Rng rng(26);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    PolyQ f = random_poly(rng, 6, 12);
    if (f.degree() < 1) continue;
    PolyQ g = squarefree_part(f);
    if (g.degree() < 1) continue;
    Rat B = cauchy_root_bound(g);
    if (sgn(g.evaluate(B)) == 0 || sgn(g.evaluate(-B)) == 0) continue;
    int sturm = count_real_roots(g);
    int vca = oracle_count_roots(g, -B, B);
    CHECK(sturm == vca);
    ++checked;
  }
  REQUIRE(checked > 200);
}

TEST_CASE("isolation of real roots") {
  // Known rational roots.
  std::vector<Rat> roots{Rat(-3), make_rat(-1, 3), Rat(0), make_rat(5, 2), Rat(4)};
  PolyQ f = PolyQ::constant(Rat(1));
  for (const Rat& r : roots) f = f * PolyQ({-r, Rat(1)});
  auto iso = isolate_real_roots(f);
  REQUIRE(iso.size() == roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) {
    CHECK(iso[i].lower_bound() <= roots[i]);
    CHECK(roots[i] <= iso[i].upper_bound());
    if (i + 1 < roots.size())
      CHECK(iso[i].upper_bound() <= iso[i + 1].lower_bound());
  }

  // Refinement shrinks the interval and keeps the root inside.
  PolyQ g = P({-2, 0, 1});  // sqrt(2)
  auto r2 = isolate_real_roots(g);
  REQUIRE(r2.size() == 2);
  RealRoot pos = r2[1];
  for (int i = 0; i < 30 && !pos.exact; ++i) pos = refine_root(g, pos);
  if (!pos.exact) {
    CHECK(pos.width() <= make_rat(1, 1 << 20));
    CHECK(pos.lo * pos.lo < 2);
    CHECK(pos.hi * pos.hi > 2);
  }
}

TEST_CASE("exact signs at algebraic points") {
  PolyQ f = P({-2, 0, 1});  // roots -sqrt(2), sqrt(2)
  auto iso = isolate_real_roots(f);
  REQUIRE(iso.size() == 2);
  // sign of (x - 1) at sqrt(2) is +, at -sqrt(2) is -
  CHECK(sign_at(P({-1, 1}), f, iso[1]) == 1);
  CHECK(sign_at(P({-1, 1}), f, iso[0]) == -1);
  // sign of (x^2 - 2) at sqrt(2) is 0
  CHECK(sign_at(f, f, iso[1]) == 0);
  // sign of (x^2 - 3) at sqrt(2): 2 - 3 < 0
  CHECK(sign_at(P({-3, 0, 1}), f, iso[1]) == -1);
  // close but unequal algebraic numbers force refinement:
  // 2000000/999999 > 2, so sign of (x^2 - 2000000/999999) at sqrt(2) is -
  CHECK(sign_at(PolyQ({make_rat(-2000000, 999999), Rat(0), Rat(1)}), f,
                iso[1]) == -1);
  // and 1999998/1000000 < 2 gives +
  CHECK(sign_at(PolyQ({make_rat(-1999998, 1000000), Rat(0), Rat(1)}), f,
                iso[1]) == 1);

  // Random cross-check: product of linear forms at known rational roots.
  Rng rng(27);
  for (int trial = 0; trial < 50; ++trial) {
    Rat r = make_rat(random_int(rng, -50, 50), random_int(rng, 1, 9));
    Rat c = make_rat(random_int(rng, -50, 50), random_int(rng, 1, 9));
    PolyQ h = PolyQ({-r, Rat(1)}) * P({1, 0, 1});  // only real root r
    auto ir = isolate_real_roots(h);
    REQUIRE(ir.size() == 1);
    int want = sgn(Rat(r - c));
    CHECK(sign_at(PolyQ({-c, Rat(1)}), squarefree_part(h), ir[0]) == want);
  }
}

TEST_CASE("printing round-trip basics") {
  CHECK(to_string(P({-2, 0, 1}), "t") == "t^2 - 2");
  CHECK(to_string(P({1, 1}), "x") == "x + 1");
  CHECK(to_string(PolyQ({make_rat(5, 4)}), "t") == "5/4");
  CHECK(to_string(PolyQ(), "t") == "0");
  CHECK(to_string(PolyQ({Rat(0), make_rat(-1, 2)}), "t") == "-1/2*t");
}

TEST_CASE("misc rational-poly helpers") {
  PolyQ f({make_rat(1, 2), make_rat(1, 3), Rat(1)});
  CHECK_FALSE(is_integer_poly(f));
  CHECK(denominator_lcm(f) == 6);
  CHECK(is_integer_poly(P({3, 0, 2})));
  CHECK(squarefree_part(P({-2, 0, 1}) * P({-2, 0, 1})) == P({-2, 0, 1}));
  CHECK(is_squarefree(P({-2, 0, 1})));
  CHECK_FALSE(is_squarefree(P({-2, 0, 1}) * P({-2, 0, 1})));
}
