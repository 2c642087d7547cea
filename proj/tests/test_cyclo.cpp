#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "dwork/cyclo.hpp"

using namespace dwork;

namespace {
CycInt random_cyc(int p, std::mt19937_64& rng, int mag = 50) {
  CycInt x(p);
  std::uniform_int_distribution<int> d(-mag, mag);
  for (int i = 0; i < p - 1; ++i) x.c[i] = d(rng);
  return x;
}
}  // namespace

TEST_CASE("power basis relations") {
  // sum of all p-th roots of unity vanishes
  for (int p : {3, 5, 7}) {
    CycInt s(p);
    for (int e = 0; e < p; ++e) s += zeta_pow(p, e);
    REQUIRE(s.is_zero());
  }
  // zeta^2 = -1 - zeta for p = 3
  CycInt z2 = zeta_pow(3, 2);
  REQUIRE(z2.c == std::vector<Int>{-1, -1});
  REQUIRE(zeta_pow(5, 7) == zeta_pow(5, 2));
}

TEST_CASE("multiplication matches a hand example") {
  // (1 + zeta)(1 + zeta^2) over p = 5: 1 + zeta + zeta^2 + zeta^3
  CycInt a = CycInt(5, 1) + zeta_pow(5, 1);
  CycInt b = CycInt(5, 1) + zeta_pow(5, 2);
  CycInt expect(5);
  expect.c = {1, 1, 1, 1};
  REQUIRE(a * b == expect);
  // and zeta * zeta^4 = 1
  REQUIRE(zeta_pow(5, 1) * zeta_pow(5, 4) == CycInt(5, 1));
}

TEST_CASE("conjugation is a ring map and inverts zeta") {
  std::mt19937_64 rng(42);
  for (int p : {3, 5, 7}) {
    REQUIRE(zeta_pow(p, 1).conj() == zeta_pow(p, p - 1));
    for (int t = 0; t < 40; ++t) {
      CycInt x = random_cyc(p, rng), y = random_cyc(p, rng);
      REQUIRE((x * y).conj() == x.conj() * y.conj());
      REQUIRE((x + y).conj() == x.conj() + y.conj());
      REQUIRE(x.conj().conj() == x);
    }
  }
}

TEST_CASE("lambda valuation basics") {
  for (int p : {3, 5, 7}) {
    CycInt one_minus_zeta = CycInt(p, 1) - zeta_pow(p, 1);
    REQUIRE(lambda_val(one_minus_zeta) == 1);
    // p itself has valuation p-1
    REQUIRE(lambda_val(CycInt(p, (long long)p)) == p - 1);
    REQUIRE(lambda_val(CycInt(p, 1)) == 0);
    REQUIRE_FALSE(lambda_val(CycInt(p)).has_value());  // 0 -> +infinity
  }
}

TEST_CASE("valuation of 3 * (1-zeta_3)^3 is 5") {
  CycInt lam = CycInt(3, 1) - zeta_pow(3, 1);
  CycInt x = CycInt(3, 3) * lam * lam * lam;
  REQUIRE(lambda_val(x) == 5);  // val(3) = 2 plus three factors
}

TEST_CASE("valuation is additive on products") {
  std::mt19937_64 rng(7);
  for (int p : {3, 5}) {
    for (int t = 0; t < 60; ++t) {
      CycInt x = random_cyc(p, rng), y = random_cyc(p, rng);
      if (x.is_zero() || y.is_zero()) continue;
      auto vx = lambda_val(x), vy = lambda_val(y), vxy = lambda_val(x * y);
      REQUIRE(vxy == *vx + *vy);
    }
  }
}

TEST_CASE("divisibility test agrees with valuation and division is exact") {
  std::mt19937_64 rng(11);
  for (int p : {3, 5, 7}) {
    for (int t = 0; t < 60; ++t) {
      CycInt x = random_cyc(p, rng);
      if (x.is_zero()) continue;
      bool div = lambda_divisible(x);
      REQUIRE(div == (*lambda_val(x) >= 1));
      if (div) {
        CycInt q = lambda_div(x);
        CycInt lam = CycInt(p, 1) - zeta_pow(p, 1);
        REQUIRE(q * lam == x);
      }
    }
  }
}

TEST_CASE("numeric embedding") {
  // |1 - e^{2 pi i/5}| = 2 sin(pi/5)
  CycInt lam = CycInt(5, 1) - zeta_pow(5, 1);
  REQUIRE(std::abs(std::abs(lam.embed(1)) - 2.0 * std::sin(3.14159265358979323846 / 5)) < 1e-12);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    CycInt x = random_cyc(7, rng), y = random_cyc(7, rng);
    for (int j = 1; j < 7; ++j) {
      auto lhs = (x * y).embed(j);
      auto rhs = x.embed(j) * y.embed(j);
      REQUIRE(std::abs(lhs - rhs) < 1e-6);
    }
  }
}

TEST_CASE("rational layer reduces and detects integrality") {
  CycInt x(5);
  x.c = {6, 2, 4, 8};
  CycRat r(x, 2);
  REQUIRE(r.is_integral());
  REQUIRE(r.num.c == std::vector<Int>{3, 1, 2, 4});
  CycRat half(CycInt(5, 1), 2);
  REQUIRE_FALSE(half.is_integral());
  REQUIRE(half + half == CycRat(CycInt(5, 1)));
  CycRat prod = half * CycRat(CycInt(5, 2));
  REQUIRE(prod.is_integral());
  // division by an integer scalar
  REQUIRE(CycRat(CycInt(5, 10)).div_int(5) == CycRat(CycInt(5, 2)));
}

TEST_CASE("mixed cyclotomic orders are rejected") {
  REQUIRE_THROWS_AS(CycInt(3, 1) + CycInt(5, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(CycInt(4), std::invalid_argument);
}
