#pragma once

// Finite fields F_{p^k} on a deterministic representation: the modulus is the
// lexicographically smallest monic irreducible of its degree (coefficients
// compared low-degree-first), and an element's canonical index is the base-p
// integer whose digits are its coefficient vector. Everything downstream
// (tables, caches, serialized reports) is reproducible because of this.

#include <array>
#include <map>
#include <memory>
#include <mutex>

#include "dwork/base.hpp"

namespace dwork {

namespace detail {

using Poly = std::vector<u8>;  // coefficient i = coefficient of x^i, over F_p

inline int poly_deg(const Poly& f) {
  for (int i = (int)f.size() - 1; i >= 0; --i)
    if (f[i]) return i;
  return -1;
}

inline void poly_rem(Poly& r, const Poly& m, int p) {
  int dm = poly_deg(m);
  for (int i = (int)r.size() - 1; i >= dm; --i) {
    if (!r[i]) continue;
    int c = r[i];
    for (int j = 0; j <= dm; ++j) {
      int t = r[i - dm + j] - c * m[j] % p;
      r[i - dm + j] = (u8)((t % p + p) % p);
    }
  }
  r.resize(dm);
}

inline Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int p) {
  std::vector<int> c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  Poly r(c.size());
  for (size_t i = 0; i < c.size(); ++i) r[i] = (u8)(c[i] % p);
  poly_rem(r, m, p);
  return r;
}

inline Poly poly_powmod(Poly base, u64 e, const Poly& m, int p) {
  Poly r{1};
  while (e) {
    if (e & 1) r = poly_mulmod(r, base, m, p);
    base = poly_mulmod(base, base, m, p);
    e >>= 1;
  }
  return r;
}

inline Poly poly_gcd(Poly a, Poly b, int p) {
  while (poly_deg(b) >= 0) {
    Poly r = a;
    r.resize(std::max(r.size(), b.size()) + 1, 0);
    // remainder of a by b: scale b monic first
    int db = poly_deg(b);
    int lead = b[db];
    int il = (int)powmod_u64(lead, p - 2, p);
    Poly bm(db + 1);
    for (int i = 0; i <= db; ++i) bm[i] = (u8)(b[i] * il % p);
    poly_rem(r, bm, p);
    a = b;
    b = r;
  }
  return a;
}

// m monic of degree k: irreducible iff x^{p^k} = x (mod m) and
// x^{p^{k/l}} - x is a unit mod m for every prime l | k.
inline bool poly_irreducible(const Poly& m, int p) {
  int k = poly_deg(m);
  if (k == 1) return true;
  std::vector<Poly> frob(k + 1);  // frob[j] = x^{p^j} mod m
  frob[0] = Poly{0, 1};
  for (int j = 1; j <= k; ++j) frob[j] = poly_powmod(frob[j - 1], p, m, p);
  Poly x{0, 1};
  if (poly_deg(frob[k]) != 1 || frob[k][1] != 1 || frob[k][0] != 0) return false;
  for (u64 l : prime_factors((u64)k)) {
    Poly d = frob[k / l];
    d.resize(std::max<size_t>(d.size(), 2), 0);
    int t = d[1] - 1;
    d[1] = (u8)((t % p + p) % p);
    if (poly_deg(poly_gcd(m, d, p)) > 0) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr int kMaxFieldDegree = 24;

// Lexicographically smallest monic irreducible of degree k over F_p,
// low-degree coefficients compared first. Returned as c_0..c_k with c_k = 1.
inline detail::Poly canonical_modulus(int p, int k) {
  detail::Poly m(k + 1, 0);
  m[k] = 1;
  u64 total = pow_u64((u64)p, (unsigned)k);
  // zero constant term means divisible by x, so lex order starts at c_0 = 1
  u64 start = k >= 2 ? pow_u64((u64)p, (unsigned)(k - 1)) : 0;
  for (u64 t = start; t < total; ++t) {
    // lex order on (c_0, ..., c_{k-1}): rightmost digit varies fastest
    u64 v = t;
    for (int i = k - 1; i >= 0; --i) {
      m[i] = (u8)(v % p);
      v /= p;
    }
    if (detail::poly_irreducible(m, p)) return m;
  }
  throw std::logic_error("no irreducible polynomial found");  // unreachable
}

class FField {
 public:
  int p = 0, k = 0;
  u64 q = 1;                 // p^k
  detail::Poly mod;          // canonical modulus, c_0..c_k
  std::vector<u8> tr_pow;    // Tr(x^i mod m) for i = 0..2k-2
  std::vector<u64> p_pow;    // p^0..p^k

  FField(int p_, int k_) : p(p_), k(k_) {
    if (!is_prime_u64((u64)p) || p < 2) throw std::invalid_argument("p must be prime");
    if (k < 1 || k > kMaxFieldDegree) throw std::invalid_argument("extension degree out of range");
    q = 1;
    p_pow.assign(k + 1, 1);
    for (int i = 0; i < k; ++i) {
      if (q > (u64(1) << 62) / (u64)p) throw std::invalid_argument("field too large to index");
      q *= (u64)p;
      p_pow[i + 1] = q;
    }
    mod = canonical_modulus(p, k);
    build_reduction_rows();
    build_trace_powers();
  }

  void digits_of(u64 idx, u8* d) const {
    for (int i = 0; i < k; ++i) {
      d[i] = (u8)(idx % (u64)p);
      idx /= (u64)p;
    }
  }
  u64 index_of(const u8* d) const {
    u64 r = 0;
    for (int i = k - 1; i >= 0; --i) r = r * (u64)p + d[i];
    return r;
  }

  u64 add(u64 a, u64 b) const {
    std::array<u8, kMaxFieldDegree> da, db;
    digits_of(a, da.data());
    digits_of(b, db.data());
    for (int i = 0; i < k; ++i) da[i] = (u8)((da[i] + db[i]) % p);
    return index_of(da.data());
  }
  u64 neg(u64 a) const {
    std::array<u8, kMaxFieldDegree> da;
    digits_of(a, da.data());
    for (int i = 0; i < k; ++i) da[i] = (u8)((p - da[i]) % p);
    return index_of(da.data());
  }
  u64 sub(u64 a, u64 b) const { return add(a, neg(b)); }

  u64 mul(u64 a, u64 b) const {
    std::array<u8, kMaxFieldDegree> da, db;
    digits_of(a, da.data());
    digits_of(b, db.data());
    std::array<u32, 2 * kMaxFieldDegree> c{};
    for (int i = 0; i < k; ++i) {
      if (!da[i]) continue;
      for (int j = 0; j < k; ++j) c[i + j] += (u32)da[i] * db[j];
    }
    std::array<u32, kMaxFieldDegree> acc{};
    for (int i = 0; i < k; ++i) acc[i] = c[i];
    for (int j = 0; j < k - 1; ++j) {
      u32 h = c[k + j] % (u32)p;
      if (!h) continue;
      const u8* row = red_rows_.data() + (size_t)j * k;
      for (int i = 0; i < k; ++i) acc[i] += h * row[i];
    }
    std::array<u8, kMaxFieldDegree> r;
    for (int i = 0; i < k; ++i) r[i] = (u8)(acc[i] % (u32)p);
    return index_of(r.data());
  }

  u64 pow(u64 a, u64 e) const {
    u64 r = 1 % q, b = a;
    while (e) {
      if (e & 1) r = mul(r, b);
      b = mul(b, b);
      e >>= 1;
    }
    return r;
  }
  u64 inv(u64 a) const {
    if (a == 0) throw std::domain_error("inverse of zero");
    return pow(a, q - 2);
  }
  u64 frob(u64 a) const { return pow(a, (u64)p); }

  int trace(u64 a) const {
    std::array<u8, kMaxFieldDegree> d;
    digits_of(a, d.data());
    u32 s = 0;
    for (int i = 0; i < k; ++i) s += (u32)d[i] * tr_pow[i];
    return (int)(s % (u32)p);
  }

  u64 from_int(long long v) const {
    long long r = v % p;
    if (r < 0) r += p;
    return (u64)r;
  }

  // scalar multiple c*a with c an integer residue
  u64 scale(long long c, u64 a) const { return mul(from_int(c), a); }

 private:
  std::vector<u8> red_rows_;  // row j = digits of x^{k+j} mod m, j = 0..k-2

  void build_reduction_rows() {
    red_rows_.assign((size_t)std::max(0, k - 1) * k, 0);
    std::vector<int> cur(k);  // x^{k+j} mod m
    for (int i = 0; i < k; ++i) cur[i] = (p - mod[i]) % p;  // x^k = -(tail)
    for (int j = 0; j < k - 1; ++j) {
      for (int i = 0; i < k; ++i) red_rows_[(size_t)j * k + i] = (u8)cur[i];
      // multiply by x
      int top = cur[k - 1];
      for (int i = k - 1; i > 0; --i) cur[i] = cur[i - 1];
      cur[0] = 0;
      if (top) {
        for (int i = 0; i < k; ++i) cur[i] = (cur[i] + top * ((p - mod[i]) % p)) % p;
      }
    }
  }

  // Newton's identities on the modulus give Tr(x^j) = power sum of its roots.
  void build_trace_powers() {
    int need = std::max(1, 2 * k - 1);
    std::vector<int> s(need);
    s[0] = k % p;
    for (int j = 1; j < need; ++j) {
      long long acc = 0;
      if (j <= k) {
        for (int i = 1; i < j; ++i) acc += (long long)mod[k - i] * s[j - i];
        acc += (long long)(j % p) * mod[k - j];
      } else {
        for (int i = 1; i <= k; ++i) acc += (long long)mod[k - i] * s[j - i];
      }
      s[j] = (int)((p - acc % p) % p);
    }
    tr_pow.assign(s.begin(), s.end());
  }
};

// Registry: one immutable field object per (p, k).
inline const FField& ffield(int p, int k) {
  static std::map<std::pair<int, int>, std::unique_ptr<FField>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(p, k);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<FField>(p, k)).first;
  return *it->second;
}

// Root of the degree-a canonical modulus inside F_{p^k} (a | k), chosen as the
// root of smallest canonical index. Kernel of Frobenius^a - id gives the
// subfield; the a roots of the modulus all lie there.
inline u64 subfield_root(const FField& big, int a) {
  int p = big.p, k = big.k;
  if (a < 1 || k % a != 0) throw std::invalid_argument("subfield degree must divide k");
  if (a == 1) return 0;  // canonical degree-1 modulus is x
  // columns of M = Frob^a - I on the basis x^i
  u64 xq = big.p_pow[1];  // element "x"
  for (int j = 0; j < a; ++j) xq = big.frob(xq);
  std::vector<std::vector<u8>> M(k, std::vector<u8>(k));
  u64 col = 1;  // (x^{p^a})^i, starting at i = 0
  for (int i = 0; i < k; ++i) {
    std::array<u8, kMaxFieldDegree> d;
    big.digits_of(col, d.data());
    for (int r = 0; r < k; ++r) {
      int v = d[r] - (r == i ? 1 : 0);
      M[r][i] = (u8)((v % p + p) % p);
    }
    col = big.mul(col, xq);
  }
  // kernel basis mod p
  std::vector<int> pivot_col(k, -1);
  int rank = 0;
  for (int c = 0; c < k && rank < k; ++c) {
    int piv = -1;
    for (int r = rank; r < k; ++r)
      if (M[r][c]) { piv = r; break; }
    if (piv < 0) continue;
    std::swap(M[piv], M[rank]);
    int il = (int)powmod_u64(M[rank][c], p - 2, p);
    for (int j = 0; j < k; ++j) M[rank][j] = (u8)(M[rank][j] * il % p);
    for (int r = 0; r < k; ++r) {
      if (r == rank || !M[r][c]) continue;
      int f = M[r][c];
      for (int j = 0; j < k; ++j) M[r][j] = (u8)((M[r][j] + (p - f) * M[rank][j]) % p);
    }
    pivot_col[rank++] = c;
  }
  std::vector<std::vector<u8>> basis;
  for (int c = 0; c < k; ++c) {
    bool is_pivot = false;
    for (int r = 0; r < rank; ++r) is_pivot |= (pivot_col[r] == c);
    if (is_pivot) continue;
    std::vector<u8> v(k, 0);
    v[c] = 1;
    for (int r = 0; r < rank; ++r) v[pivot_col[r]] = (u8)((p - M[r][c]) % p);
    basis.push_back(std::move(v));
  }
  if ((int)basis.size() != a)
    throw std::logic_error("unexpected fixed-subfield dimension");
  // enumerate the p^a kernel elements, keep roots of the subfield modulus
  detail::Poly msub = canonical_modulus(p, a);
  u64 best = 0;
  bool found = false;
  u64 count = pow_u64((u64)p, (unsigned)a);
  for (u64 t = 1; t < count; ++t) {
    std::array<u8, kMaxFieldDegree> d{};
    u64 v = t;
    for (int i = 0; i < a; ++i) {
      int c = (int)(v % (u64)p);
      v /= (u64)p;
      if (c)
        for (int r = 0; r < k; ++r) d[r] = (u8)((d[r] + c * basis[i][r]) % p);
    }
    u64 cand = big.index_of(d.data());
    // Horner: msub(cand)
    u64 acc = 1;  // leading coefficient
    for (int i = a - 1; i >= 0; --i) acc = big.add(big.mul(acc, cand), msub[i]);
    if (acc == 0 && (!found || cand < best)) {
      best = cand;
      found = true;
    }
  }
  if (!found) throw std::logic_error("subfield modulus has no root");
  return best;
}

// Powers beta^0..beta^{a-1} of the canonical embedding root, cached per
// (p, a, k). embed_elem maps a canonical F_{p^a} index into F_{p^k}.
inline const std::vector<u64>& embedding_powers(int p, int a, int k) {
  static std::map<std::tuple<int, int, int>, std::vector<u64>> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(p, a, k);
  auto it = cache.find(key);
  if (it == cache.end()) {
    const FField& big = ffield(p, k);
    u64 beta = subfield_root(big, a);
    std::vector<u64> pows(a);
    u64 cur = 1;
    for (int i = 0; i < a; ++i) {
      pows[i] = cur;
      cur = big.mul(cur, beta);
    }
    it = cache.emplace(key, std::move(pows)).first;
  }
  return it->second;
}

inline u64 embed_elem(int p, int a, int k, u64 sub_idx) {
  if (a == k) return sub_idx;
  const FField& big = ffield(p, k);
  const auto& pows = embedding_powers(p, a, k);
  u64 r = 0;
  for (int i = 0; i < a; ++i) {
    u64 d = sub_idx % (u64)p;
    sub_idx /= (u64)p;
    if (d) r = big.add(r, big.scale((long long)d, pows[i]));
  }
  return r;
}

}  // namespace dwork
