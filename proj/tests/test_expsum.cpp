#include <catch2/catch_amalgamated.hpp>
#include <complex>
#include <cstdio>
#include <random>

#include "dwork/expsum.hpp"

using namespace dwork;

namespace {

// reference Kloosterman value by plain field arithmetic
CycInt naive_K(const FField& F, u64 b) {
  CycInt s(F.p);
  for (u64 x = 1; x < F.q; ++x) {
    u64 t = F.add(x, F.inv(x));
    s += zeta_pow(F.p, F.trace(F.mul(b, t)));
  }
  return s;
}

// reference torus sum by evaluating f at every point with field arithmetic
CycInt naive_sum(int p, int a, int k, const LaurentPoly& f) {
  int m = a * k;
  const FField& F = ffield(p, m);
  std::vector<u64> cemb(f.coeffs.size());
  for (size_t j = 0; j < f.coeffs.size(); ++j) cemb[j] = embed_elem(p, a, m, f.coeffs[j]);
  CycInt s(p);
  std::vector<u64> x(f.nvars, 1);
  std::function<void(int)> rec = [&](int v) {
    if (v == f.nvars) {
      u64 val = 0;
      for (size_t j = 0; j < f.exps.size(); ++j) {
        u64 term = cemb[j];
        for (int i = 0; i < f.nvars; ++i) {
          long long e = f.exps[j][i];
          if (e == 0) continue;
          u64 base = e > 0 ? x[i] : F.inv(x[i]);
          term = F.mul(term, F.pow(base, (u64)(e > 0 ? e : -e)));
        }
        val = F.add(val, term);
      }
      s += zeta_pow(p, F.trace(val));
      return;
    }
    for (u64 u = 1; u < F.q; ++u) {
      x[v] = u;
      rec(v + 1);
    }
  };
  rec(0);
  return s;
}

std::vector<u64> random_units(std::mt19937_64& rng, u64 q, int count) {
  std::uniform_int_distribution<u64> d(1, q - 1);
  std::vector<u64> a(count);
  for (auto& v : a) v = d(rng);
  return a;
}

}  // namespace

TEST_CASE("unit walk enumerates the whole group with correct traces") {
  const FField& F = ffield(5, 2);
  UnitWalk w = build_walk(F);
  REQUIRE(w.Nu == 24);
  CHECK(w.log[0] == UnitWalk::kNoLog);
  CHECK(w.log[1] == 0);
  CHECK(w.log[w.gen] == 1);
  std::vector<bool> seen(w.Nu, false);
  for (u64 idx = 1; idx < F.q; ++idx) {
    REQUIRE(w.log[idx] != UnitWalk::kNoLog);
    REQUIRE(w.log[idx] < w.Nu);
    CHECK(!seen[w.log[idx]]);
    seen[w.log[idx]] = true;
  }
  for (u64 i = 0; i < w.Nu; ++i) {
    u64 idx = F.pow(w.gen, i);
    CHECK(w.log[idx] == i);
    CHECK(w.tr_log[i] == (u8)F.trace(idx));
  }
}

TEST_CASE("unit walk edge cases") {
  UnitWalk w2 = build_walk(ffield(2, 1));
  CHECK(w2.Nu == 1);
  CHECK(w2.log[1] == 0);
  UnitWalk w4 = build_walk(ffield(2, 2));
  CHECK(w4.Nu == 3);
}

TEST_CASE("smallest kloosterman table") {
  auto B = klo_bundle(3, 1);
  CHECK(B->kvalue(0) == CycInt(3, 2));
  CHECK(B->kvalue(1) == CycInt(3, -1));
  CHECK(B->kvalue(2) == CycInt(3, -1));
}

TEST_CASE("kloosterman table matches the naive sum") {
  for (auto [p, m] : {std::pair{3, 2}, {2, 3}, {5, 2}, {7, 1}, {3, 4}}) {
    auto B = klo_bundle(p, m);
    const FField& F = *B->F;
    for (u64 b = 0; b < F.q; ++b) {
      INFO("p=" << p << " m=" << m << " b=" << b);
      REQUIRE(B->kvalue(b) == naive_K(F, b));
    }
    CHECK(B->kvalue(0) == CycInt(p, (long long)(F.q - 1)));
  }
}

TEST_CASE("kloosterman values are real and even in b") {
  auto B = klo_bundle(3, 4);
  const FField& F = *B->F;
  Int csum = 0;
  CycInt total(3);
  for (u64 b = 0; b < F.q; ++b) {
    CycInt v = B->kvalue(b);
    CHECK(v.conj() == v);
    CHECK(B->kvalue(F.neg(b)) == v);
    total += v;
  }
  // sum over b counts solutions of x + 1/x = 0, i.e. x^2 = -1: two in F_81
  CHECK(total == CycInt(3, 162));
  (void)csum;
}

TEST_CASE("kloosterman values satisfy the square-root bound") {
  auto B = klo_bundle(3, 4);
  double limit = 2.0 * std::sqrt(81.0) + 1e-9;
  for (u64 b = 1; b < B->N; ++b) {
    std::complex<double> z = B->kvalue(b).embed(1);
    CHECK(std::abs(z) <= limit);
  }
  CHECK((double)B->max_abs <= (double)B->N);
}

TEST_CASE("log-ordered copy agrees with the canonical table") {
  auto B = klo_bundle(3, 4);
  const FField& F = *B->F;
  for (u64 j : {0ULL, 1ULL, 7ULL, 40ULL, 79ULL}) {
    u64 idx = F.pow(B->walk.gen, j);
    for (int c = 0; c < 2; ++c)
      CHECK(B->klog[j * 2 + c] == B->table[idx * 2 + c]);
  }
}

TEST_CASE("table files round-trip") {
  auto B = klo_bundle(3, 2);
  auto dir = std::filesystem::temp_directory_path() / "dwork_test_cache";
  std::filesystem::create_directories(dir);
  auto path = dir / "roundtrip.tbl";
  long long mx = 0;
  for (auto v : B->table) mx = std::max(mx, v < 0 ? -v : v);
  klo_detail::save_table(path, 3, 1, 2, B->table, mx);
  auto re = klo_detail::load_table(path, 3, 2);
  CHECK(re == B->table);
  // width is 4 here; the header must say so
  std::ifstream is(path, std::ios::binary);
  char magic[4];
  is.read(magic, 4);
  CHECK(std::memcmp(magic, "KLTB", 4) == 0);
  u32 hp = klo_detail::read_u32(is), ha = klo_detail::read_u32(is);
  u32 hk = klo_detail::read_u32(is), hw = klo_detail::read_u32(is);
  CHECK(hp == 3);
  CHECK(ha * hk == 2);
  CHECK(hw == 4);
  std::filesystem::remove(path);
}

TEST_CASE("wide-coordinate table files load") {
  // handcrafted width-8 file for the F_3 table: K(0)=2, K(1)=K(2)=-1
  auto dir = std::filesystem::temp_directory_path() / "dwork_test_cache";
  std::filesystem::create_directories(dir);
  auto path = dir / "wide.tbl";
  {
    std::ofstream os(path, std::ios::binary);
    os.write("KLTB", 4);
    klo_detail::write_u32(os, 3);
    klo_detail::write_u32(os, 1);
    klo_detail::write_u32(os, 1);
    klo_detail::write_u32(os, 8);
    auto put64 = [&](long long v) {
      u64 uv = (u64)v;
      for (int b = 0; b < 8; ++b) {
        char byte = (char)(uv >> (8 * b) & 0xFF);
        os.write(&byte, 1);
      }
    };
    put64(2);  put64(0);   // K(0)
    put64(-1); put64(0);   // K(1)
    put64(-1); put64(0);   // K(2)
  }
  auto table = klo_detail::load_table(path, 3, 1);
  auto B = klo_bundle(3, 1);
  CHECK(table == B->table);
  std::filesystem::remove(path);
}

TEST_CASE("corrupt table files are rejected") {
  auto dir = std::filesystem::temp_directory_path() / "dwork_test_cache";
  std::filesystem::create_directories(dir);
  auto path = dir / "bad.tbl";
  {
    std::ofstream os(path, std::ios::binary);
    os.write("NOPE", 4);
  }
  CHECK_THROWS_AS(klo_detail::load_table(path, 3, 1), std::runtime_error);
  std::filesystem::remove(path);
}

TEST_CASE("cache files are keyed by prime and absolute degree") {
  auto dir = std::filesystem::temp_directory_path() / "dwork_test_cache_names";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto B = klo_bundle(11, 1, kDefaultEntryBudget, dir.string());
  // the table depends only on F_{p^m}, so the name pins a = 1, k = m
  auto path = dir / "klo_p11_a1_k1.tbl";
  REQUIRE(std::filesystem::exists(path));
  CHECK(klo_detail::load_table(path, 11, 1) == B->table);
  std::filesystem::remove_all(dir);
}

TEST_CASE("table budgets are enforced before allocation") {
  CHECK_THROWS_AS(klo_bundle(3, 18, 1u << 20), budget_error);
  CHECK_THROWS_AS(klo_bundle(3, 23, u64(1) << 40), budget_error);  // hard cap
}

TEST_CASE("direct sum of a single variable") {
  LaurentPoly f;
  f.nvars = 1;
  f.exps = {{1}};
  f.coeffs = {1};
  CHECK(expsum_direct(3, 1, 1, f) == CycInt(3, -1));
  CHECK(expsum_direct(3, 1, 2, f) == CycInt(3, -1));
  CHECK(expsum_direct(5, 1, 2, f) == CycInt(5, -1));
  CHECK(expsum_direct(2, 1, 3, f) == CycInt(2, -1));
}

TEST_CASE("direct sum matches plain evaluation on random polynomials") {
  std::mt19937_64 rng(2024);
  for (auto [p, a, k] : {std::tuple{3, 1, 2}, {5, 1, 1}, {2, 1, 3}, {3, 2, 1}}) {
    u64 q = pow_u64((u64)p, (unsigned)a);
    std::uniform_int_distribution<long long> de(-2, 2);
    std::uniform_int_distribution<u64> dc(1, q - 1);
    for (int trial = 0; trial < 5; ++trial) {
      LaurentPoly f;
      f.nvars = 2;
      for (int t = 0; t < 3; ++t) {
        f.exps.push_back({de(rng), de(rng)});
        f.coeffs.push_back(dc(rng));
      }
      INFO("p=" << p << " k=" << k << " trial=" << trial);
      REQUIRE(expsum_direct(p, a, k, f) == naive_sum(p, a, k, f));
    }
  }
}

TEST_CASE("family evaluator agrees with the direct sum") {
  std::mt19937_64 rng(77);
  for (auto [p, a, k, n] : {std::tuple{3, 1, 1, 2}, {3, 1, 2, 2}, {5, 1, 1, 2},
                            {5, 1, 1, 3}, {3, 2, 1, 2}, {7, 1, 1, 2}}) {
    FamilyEvaluator ev(p, a, k);
    u64 q = pow_u64((u64)p, (unsigned)a);
    for (int trial = 0; trial < 4; ++trial) {
      auto coeffs = random_units(rng, q, n + 1);
      INFO("p=" << p << " a=" << a << " k=" << k << " n=" << n);
      CycInt fast = ev.family_sum(n, coeffs);
      CycInt slow = expsum_direct(p, a, k, family_poly(n, coeffs));
      REQUIRE(fast == slow);
    }
  }
}

TEST_CASE("family sums are fixed by coefficient frobenius") {
  FamilyEvaluator ev(3, 2, 1);
  const FField& Fq = ffield(3, 2);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 6; ++trial) {
    auto a = random_units(rng, 9, 3);
    std::vector<u64> afrob;
    for (u64 c : a) afrob.push_back(Fq.frob(c));
    CHECK(ev.family_sum(2, a) == ev.family_sum(2, afrob));
  }
}

TEST_CASE("negating the polynomial conjugates the sum") {
  std::mt19937_64 rng(11);
  for (auto [p, a, k] : {std::tuple{5, 1, 1}, {3, 1, 2}}) {
    const FField& Fq = ffield(p, a);
    u64 q = Fq.q;
    for (int trial = 0; trial < 4; ++trial) {
      auto coeffs = random_units(rng, q, 3);
      LaurentPoly f = family_poly(2, coeffs);
      LaurentPoly g = f;
      for (auto& c : g.coeffs) c = Fq.neg(c);
      CHECK(expsum_direct(p, a, k, g) == expsum_direct(p, a, k, f).conj());
    }
  }
}

TEST_CASE("direct sum budget refusal") {
  LaurentPoly f = family_poly(2, {1, 1, 1});
  CHECK_THROWS_AS(expsum_direct(7, 1, 2, f, 1000), budget_error);
}

TEST_CASE("family evaluator input validation") {
  FamilyEvaluator ev(3, 1, 1);
  CHECK_THROWS_AS(ev.family_sum(2, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(ev.family_sum(2, {1, 0, 1}), std::invalid_argument);
  CHECK_THROWS_AS(ev.family_sum(2, {1, 5, 1}), std::invalid_argument);
  CHECK_THROWS_AS(family_poly(2, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(family_poly(0, {1}), std::invalid_argument);
}
