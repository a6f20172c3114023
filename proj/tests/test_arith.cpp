#include "splitval/arith.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <set>
#include <vector>

using namespace splitval;

// ---------------------------------------------------------------------------
// Independent oracles (deliberately naive; used to freeze expected values)
// ---------------------------------------------------------------------------

// Plain trial division, no shortcuts.
static std::vector<std::pair<long, int>> oracle_factor(long n) {
  std::vector<std::pair<long, int>> out;
  for (long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e) out.emplace_back(p, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

// Exhaustive scan of one full period.
static std::vector<long> oracle_crt(const std::vector<std::pair<long, long>>&
                                        residue_mod) {
  long period = 1;
  for (auto& [r, m] : residue_mod) period *= m;
  std::vector<long> sols;
  for (long x = 0; x < period; ++x) {
    bool ok = true;
    for (auto& [r, m] : residue_mod)
      if (x % m != r) ok = false;
    if (ok) sols.push_back(x);
  }
  return sols;
}

// Sieve of Eratosthenes primality table.
static std::vector<bool> oracle_prime_table(long bound) {
  std::vector<bool> is_p(bound + 1, true);
  is_p[0] = is_p[1] = false;
  for (long i = 2; i * i <= bound; ++i)
    if (is_p[i])
      for (long j = i * i; j <= bound; j += i) is_p[j] = false;
  return is_p;
}

// ---------------------------------------------------------------------------

TEST_CASE("factorization of the reference semiprime") {
  // Oracle first: trial division of 10403.
  auto expect = oracle_factor(10403);
  REQUIRE(expect == std::vector<std::pair<long, int>>{{101, 1}, {103, 1}});

  Factorizer F(1);
  auto got = F.factor(Rat(10403));
  REQUIRE(got.sign == 1);
  REQUIRE(got.terms.size() == 2);
  CHECK(got.terms[0] == std::pair<Int, int>{Int(101), 1});
  CHECK(got.terms[1] == std::pair<Int, int>{Int(103), 1});
}

TEST_CASE("factorization round-trips and certifies primes") {
  Factorizer F(7);
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    Int n = random_int(rng, 1, Int("1000000000"));
    Int d = random_int(rng, 1, 999983);
    Rat q = make_rat((trial % 2) ? n : -n, d);
    PrimeFactorization f = F.factor(q);
    CHECK(f.reassemble() == q);
    Int last = 0;
    for (auto& [p, e] : f.terms) {
      CHECK(is_prime(p));
      CHECK(e != 0);
      CHECK(p > last);  // strictly increasing
      last = p;
    }
  }
  CHECK_THROWS_AS(F.factor(Rat(0)), DomainError);
}

TEST_CASE("factorization handles perfect powers and larger semiprimes") {
  Factorizer F(3);
  auto f = F.factor_integer(pow_int(Int(1000003), 3));
  REQUIRE(f.size() == 1);
  CHECK(f[0] == std::pair<Int, int>{Int(1000003), 3});

  // 64-bit semiprime: 4294967291 * 4294967279.
  Int a("4294967291"), b("4294967279");
  auto g = F.factor_integer(a * b);
  REQUIRE(g.size() == 2);
  CHECK(g[0].first == b);
  CHECK(g[1].first == a);
}

TEST_CASE("primality matches a sieve and known edge cases") {
  auto table = oracle_prime_table(20000);
  for (long n = 0; n <= 20000; ++n) CHECK(is_prime(Int(n)) == table[n]);
  CHECK(is_prime(Int("2305843009213693951")));   // 2^61 - 1
  CHECK_FALSE(is_prime(Int(561)));               // Carmichael
  CHECK_FALSE(is_prime(Int("18446744073709551617")));  // 2^64 + 1 = 274177 * ...
  CHECK(next_prime(Int(100)) == 101);
}

TEST_CASE("valuations including the infinite state") {
  CHECK(valuation(Rat(45), Int(3)) == Valuation::of(2));
  CHECK(valuation(make_rat(5, 4), Int(2)) == Valuation::of(-2));
  CHECK(valuation(Rat(0), Int(7)).is_infinite());
  CHECK_THROWS_AS(valuation(Rat(0), Int(7)).value(), DomainError);

  // The sentinel is distinct from every integer value.
  for (long v = -50; v <= 50; ++v)
    CHECK_FALSE(valuation(Rat(0), Int(5)) == Valuation::of(v));

  // v_p(ab) = v_p(a) + v_p(b) on random nonzero rationals.
  Rng rng(5);
  std::vector<Int> primes{2, 3, 5, 7, 11, 97};
  for (int trial = 0; trial < 200; ++trial) {
    Rat x = make_rat(random_int(rng, -5000, 5000), random_int(rng, 1, 5000));
    Rat y = make_rat(random_int(rng, -5000, 5000), random_int(rng, 1, 5000));
    if (sgn(x) == 0 || sgn(y) == 0) continue;
    for (const Int& p : primes)
      CHECK(valuation_nonzero(x * y, p) ==
            valuation_nonzero(x, p) + valuation_nonzero(y, p));
  }
}

TEST_CASE("split_at_prime returns a unit cofactor") {
  auto [v, u] = split_at_prime(make_rat(45, 8), Int(3));
  CHECK(v == 2);
  CHECK(u == make_rat(5, 8));
  CHECK(valuation_nonzero(u, Int(3)) == 0);
}

TEST_CASE("crt on the reference system") {
  // Oracle first: exhaustive scan over one period of 180.
  auto sols = oracle_crt({{0, 4}, {1, 9}, {2, 5}});
  REQUIRE(sols == std::vector<long>{172});

  auto [r, M] = crt_solve({{Int(4), Int(0)}, {Int(9), Int(1)}, {Int(5), Int(2)}});
  CHECK(M == 180);
  CHECK(r == 172);
}

TEST_CASE("crt rejects shared modulus factors naming the pair") {
  try {
    crt_solve({{Int(4), Int(1)}, {Int(9), Int(2)}, {Int(6), Int(3)}});
    FAIL("expected CrtIncompatibleError");
  } catch (const CrtIncompatibleError& e) {
    CHECK(e.first == 0);
    CHECK(e.second == 2);
  }
}

TEST_CASE("crt round-trips random systems") {
  Rng rng(11);
  std::vector<Int> moduli{8, 9, 5, 7, 11, 13};
  for (int trial = 0; trial < 100; ++trial) {
    CongruenceSystem sys;
    Int prod = 1;
    for (const Int& m : moduli) {
      sys.push_back({m, random_int(rng, 0, m - 1)});
      prod *= m;
    }
    auto [r, M] = crt_solve(sys);
    CHECK(M == prod);
    CHECK(r >= 0);
    CHECK(r < M);
    for (const auto& c : sys) CHECK(mod(r, c.modulus) == c.residue);
  }
  auto [r0, M0] = crt_solve({});
  CHECK(r0 == 0);
  CHECK(M0 == 1);
}

TEST_CASE("modular helpers") {
  CHECK(mod(Int(-7), Int(5)) == 3);
  CHECK(invmod(Int(3), Int(7)) == 5);
  CHECK_THROWS_AS(invmod(Int(6), Int(9)), DomainError);
  CHECK(rat_mod(make_rat(5, 4), Int(3)) == mod(Int(5) * invmod(Int(4), Int(3)), Int(3)));
  CHECK(powmod(Int(2), Int(10), Int(1000)) == 24);
  CHECK(is_square(Int(49)));
  CHECK_FALSE(is_square(Int(-49)));
  CHECK(is_square(make_rat(4, 9)));
  CHECK_FALSE(is_square(make_rat(2, 9)));
  CHECK(pow_rat(make_rat(2, 3), -2) == make_rat(9, 4));
}

TEST_CASE("random_int stays in range and is deterministic under a seed") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    Int x = random_int(a, -10, 10);
    Int y = random_int(b, -10, 10);
    CHECK(x == y);
    CHECK(x >= -10);
    CHECK(x <= 10);
  }
}

TEST_CASE("factor cache interface is consulted") {
  struct MapCache : FactorCacheBase {
    std::map<Int, std::vector<std::pair<Int, int>>> m;
    int hits = 0, stores = 0;
    std::optional<std::vector<std::pair<Int, int>>> lookup(const Int& n) override {
      auto it = m.find(n);
      if (it == m.end()) return std::nullopt;
      ++hits;
      return it->second;
    }
    void store(const Int& n, const std::vector<std::pair<Int, int>>& f) override {
      ++stores;
      m[n] = f;
    }
  };
  MapCache cache;
  Factorizer F(1);
  F.attach_cache(&cache);
  auto f1 = F.factor_integer(Int(10403));
  auto f2 = F.factor_integer(Int(10403));
  CHECK(f1 == f2);
  CHECK(cache.stores >= 1);
  CHECK(cache.hits >= 1);
}
