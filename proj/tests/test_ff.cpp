#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "dwork/ff.hpp"

using namespace dwork;

namespace {

// Independent check used as the oracle for modulus selection: a monic cubic
// or quadratic over F_p is reducible iff it has a root.
bool has_root(const std::vector<u8>& m, int p) {
  for (int x = 0; x < p; ++x) {
    long long acc = 0;
    for (int i = (int)m.size() - 1; i >= 0; --i) acc = (acc * x + m[i]) % p;
    if (acc == 0) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("canonical modulus, degree 1, is x") {
  const FField& F = ffield(3, 1);
  REQUIRE(F.mod == detail::Poly{0, 1});
  REQUIRE(F.q == 3);
  REQUIRE(F.add(2, 2) == 1);
  REQUIRE(F.mul(2, 2) == 1);
  REQUIRE(F.trace(2) == 2);
}

TEST_CASE("canonical modulus for F_9 is x^2+1") {
  const FField& F = ffield(3, 2);
  REQUIRE(F.mod == detail::Poly{1, 0, 1});
  // oracle: the only lex-smaller monic quadratics are x^2+c1*x, all divisible by x
  REQUIRE_FALSE(has_root(F.mod, 3));
}

TEST_CASE("canonical modulus for F_125 is x^3+x^2+1") {
  const FField& F = ffield(5, 3);
  REQUIRE(F.mod == detail::Poly{1, 0, 1, 1});
  REQUIRE_FALSE(has_root(F.mod, 5));
  // oracle: every lex-smaller monic cubic factors (cubics factor iff they
  // have a root). Lex order compares c_0 first, then c_1, then c_2.
  for (int c0 = 0; c0 <= 1; ++c0)
    for (int c1 = 0; c1 < 5; ++c1)
      for (int c2 = 0; c2 < 5; ++c2) {
        if (std::make_tuple(c0, c1, c2) >= std::make_tuple(1, 0, 1)) continue;
        REQUIRE(has_root({(u8)c0, (u8)c1, (u8)c2, 1}, 5));
      }
}

TEST_CASE("field axioms on sampled F_49 elements") {
  const FField& F = ffield(7, 2);
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<u64> pick(0, F.q - 1);
  for (int t = 0; t < 200; ++t) {
    u64 a = pick(rng), b = pick(rng), c = pick(rng);
    REQUIRE(F.add(a, b) == F.add(b, a));
    REQUIRE(F.mul(a, b) == F.mul(b, a));
    REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
    REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
    REQUIRE(F.add(a, F.neg(a)) == 0);
    if (a) REQUIRE(F.mul(a, F.inv(a)) == 1);
  }
  REQUIRE(F.mul(1, 5) == 5);
}

TEST_CASE("trace equals the Frobenius orbit sum and is balanced") {
  for (auto [p, k] : {std::pair{3, 3}, std::pair{7, 2}, std::pair{3, 2}}) {
    const FField& F = ffield(p, k);
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<u64> pick(0, F.q - 1);
    for (int t = 0; t < 50; ++t) {
      u64 a = pick(rng);
      u64 s = 0, cur = a;
      for (int i = 0; i < k; ++i) {
        s = F.add(s, cur);
        cur = F.frob(cur);
      }
      REQUIRE(s < (u64)p);  // orbit sum lands in the prime field
      REQUIRE((u64)F.trace(a) == s);
    }
    // each trace value is hit q/p times
    std::vector<int> fiber(p, 0);
    for (u64 a = 0; a < F.q; ++a) fiber[F.trace(a)]++;
    for (int v = 0; v < p; ++v) REQUIRE(fiber[v] == (int)(F.q / p));
  }
}

TEST_CASE("multiplicative group of F_{5^4} is cyclic of order 624") {
  const FField& F = ffield(5, 4);
  // 624 = 2^4 * 3 * 13
  const u64 ord = 624;
  bool found = false;
  for (u64 g = 1; g < F.q && !found; ++g) {
    if (F.pow(g, ord) != 1) continue;  // always true, sanity
    if (F.pow(g, ord / 2) == 1) continue;
    if (F.pow(g, ord / 3) == 1) continue;
    if (F.pow(g, ord / 13) == 1) continue;
    found = true;
    // a generator's powers enumerate every unit
    std::set<u64> seen;
    u64 cur = 1;
    for (u64 i = 0; i < ord; ++i) {
      seen.insert(cur);
      cur = F.mul(cur, g);
    }
    REQUIRE(cur == 1);
    REQUIRE(seen.size() == ord);
  }
  REQUIRE(found);
}

TEST_CASE("product of all units of F_{5^3} is -1") {
  const FField& F = ffield(5, 3);
  u64 prod = 1;
  for (u64 a = 1; a < F.q; ++a) prod = F.mul(prod, a);
  REQUIRE(prod == F.from_int(-1));
  REQUIRE(F.from_int(-1) == 4);
}

TEST_CASE("Frobenius is an automorphism fixing exactly the prime field") {
  const FField& F = ffield(3, 2);
  int fixed = 0;
  for (u64 a = 0; a < F.q; ++a)
    if (F.frob(a) == a) ++fixed;
  REQUIRE(fixed == 3);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<u64> pick(0, F.q - 1);
  for (int t = 0; t < 100; ++t) {
    u64 a = pick(rng), b = pick(rng);
    REQUIRE(F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b)));
    REQUIRE(F.frob(F.mul(a, b)) == F.mul(F.frob(a), F.frob(b)));
  }
}

TEST_CASE("subfield embedding F_9 -> F_81") {
  const FField& S = ffield(3, 2);
  const FField& B = ffield(3, 4);
  const auto& pows = embedding_powers(3, 2, 4);
  // beta is a root of x^2 + 1 inside F_81
  u64 beta = pows[1];
  REQUIRE(B.add(B.mul(beta, beta), 1) == 0);
  std::set<u64> image;
  for (u64 a = 0; a < S.q; ++a) image.insert(embed_elem(3, 2, 4, a));
  REQUIRE(image.size() == S.q);  // injective
  for (u64 a = 0; a < S.q; ++a)
    for (u64 b = 0; b < S.q; ++b) {
      REQUIRE(embed_elem(3, 2, 4, S.mul(a, b)) ==
              B.mul(embed_elem(3, 2, 4, a), embed_elem(3, 2, 4, b)));
      REQUIRE(embed_elem(3, 2, 4, S.add(a, b)) ==
              B.add(embed_elem(3, 2, 4, a), embed_elem(3, 2, 4, b)));
    }
  // trace transitivity: Tr_{81/3} on the image doubles Tr_{9/3}
  for (u64 a = 0; a < S.q; ++a)
    REQUIRE(B.trace(embed_elem(3, 2, 4, a)) == (2 * S.trace(a)) % 3);
  // embedding into the same field is the identity
  REQUIRE(embed_elem(3, 2, 2, 7) == 7);
}

TEST_CASE("degree and size limits are enforced") {
  REQUIRE_THROWS_AS(FField(4, 2), std::invalid_argument);
  REQUIRE_THROWS_AS(FField(3, 25), std::invalid_argument);
  REQUIRE_THROWS_AS(FField(7, 23), std::invalid_argument);  // index would overflow
  REQUIRE_THROWS_AS(ffield(5, 2).inv(0), std::domain_error);
}
