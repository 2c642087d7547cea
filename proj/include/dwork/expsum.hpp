#pragma once

// Exponential sums over the torus, exactly, as elements of Z[zeta_p].
//
// Two evaluators. expsum_direct walks every point of (F*)^m in discrete-log
// space and is the reference for everything else. FamilyEvaluator collapses
// the sweep family to a one-dimensional sum against a table of Kloosterman
// values K(b) = sum_{x != 0} zeta^Tr(b(x + 1/x)); the table for a field is
// built once by a digit-by-digit character transform and memoized (and
// optionally written to disk).

#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <mutex>

#include "dwork/cyclo.hpp"
#include "dwork/ff.hpp"
#include "dwork/polytope.hpp"

namespace dwork {

constexpr u64 kDefaultEntryBudget = u64(1) << 26;       // table entries
constexpr u64 kDefaultTupleBudget = 1000000000ULL;      // direct-sum points
constexpr u64 kHardEntryCap = (u64(1) << 31) - 1;       // index arithmetic is 32-bit

struct LaurentPoly {
  int nvars = 0;
  std::vector<Point> exps;
  std::vector<u64> coeffs;  // canonical indices in the coefficient field
};

// a_1 (x_1 + 1/x_1) x_{n+1} + ... + a_n (x_n + 1/x_n) x_{n+1}
//   + a_{n+1} x_{n+1} + 1/x_{n+1},  coefficients as F_q indices
inline LaurentPoly family_poly(int n, const std::vector<u64>& a) {
  if (n < 1) throw std::invalid_argument("family needs n >= 1");
  if ((int)a.size() != n + 1) throw std::invalid_argument("family needs n+1 coefficients");
  for (u64 c : a)
    if (c == 0) throw std::invalid_argument("family coefficients must be units");
  LaurentPoly f;
  f.nvars = n + 1;
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      Point u(n + 1, 0);
      u[i] = s;
      u[n] = 1;
      f.exps.push_back(u);
      f.coeffs.push_back(a[i]);
    }
  Point up(n + 1, 0), down(n + 1, 0);
  up[n] = 1;
  down[n] = -1;
  f.exps.push_back(up);
  f.coeffs.push_back(a[n]);
  f.exps.push_back(down);
  f.coeffs.push_back(1);
  return f;
}

// ---------------------------------------------------------------------------
// Discrete-log tables for one field.

struct UnitWalk {
  u64 N = 0, Nu = 0;  // field size, unit count
  u64 gen = 0;        // canonical index of the chosen generator
  std::vector<u32> log;     // canonical index -> log; log[0] is a sentinel
  std::vector<u8> tr_log;   // log -> trace to F_p
  static constexpr u32 kNoLog = 0xFFFFFFFFu;
};

inline u64 find_generator(const FField& F) {
  u64 Nu = F.q - 1;
  if (Nu == 1) return 1;
  auto primes = prime_factors(Nu);
  for (u64 idx = 2; idx < F.q; ++idx) {
    bool ok = true;
    for (u64 ell : primes)
      if (F.pow(idx, Nu / ell) == 1) {
        ok = false;
        break;
      }
    if (ok) return idx;
  }
  throw std::logic_error("unit group has no generator");
}

// Walks g^0, g^1, ... through the whole unit group, recording logs and
// traces. When blob is given it receives the digit vectors of g^i
// back-to-back (Nu * k bytes), which the Kloosterman builder consumes.
inline UnitWalk build_walk(const FField& F, std::vector<u8>* blob = nullptr) {
  if (F.q > kHardEntryCap) throw budget_error("field too large for log tables");
  UnitWalk w;
  w.N = F.q;
  w.Nu = F.q - 1;
  w.gen = find_generator(F);
  w.log.assign(F.q, UnitWalk::kNoLog);
  w.tr_log.assign(w.Nu, 0);
  if (blob) blob->assign(w.Nu * (size_t)F.k, 0);
  int m = F.k, p = F.p;
  // multiplication by g as a matrix on digit vectors
  std::vector<u8> M(m * m);
  for (int c = 0; c < m; ++c) {
    u64 col = F.mul(w.gen, F.p_pow[c]);
    std::array<u8, kMaxFieldDegree> d;
    F.digits_of(col, d.data());
    for (int r = 0; r < m; ++r) M[r * m + c] = d[r];
  }
  std::vector<u8> cur(m, 0), nxt(m, 0);
  cur[0] = 1;
  for (u64 i = 0; i < w.Nu; ++i) {
    u64 idx = 0;
    for (int j = m - 1; j >= 0; --j) idx = idx * p + cur[j];
    w.log[idx] = (u32)i;
    u32 t = 0;
    for (int j = 0; j < m; ++j) t += (u32)cur[j] * F.tr_pow[j];
    w.tr_log[i] = (u8)(t % p);
    if (blob) std::memcpy(blob->data() + i * (size_t)m, cur.data(), m);
    for (int r = 0; r < m; ++r) {
      u32 acc = 0;
      for (int c = 0; c < m; ++c) acc += (u32)M[r * m + c] * cur[c];
      nxt[r] = (u8)(acc % p);
    }
    std::swap(cur, nxt);
  }
  if (cur[0] != 1) throw std::logic_error("walk did not close");
  for (int j = 1; j < m; ++j)
    if (cur[j] != 0) throw std::logic_error("walk did not close");
  return w;
}

// ---------------------------------------------------------------------------
// Kloosterman table: K(b) for every b in F_{p^m}, stored as p-1 integer
// coordinates in the power basis of Z[zeta_p].

struct KloBundle {
  int p = 0, m = 0;
  const FField* F = nullptr;
  u64 N = 0, Nu = 0;
  UnitWalk walk;
  std::vector<long long> table;  // N rows of p-1 coords, by canonical index
  std::vector<long long> klog;   // Nu rows of p-1 coords, by discrete log
  long long max_abs = 0;

  CycInt kvalue(u64 idx) const {
    CycInt v(p);
    for (int c = 0; c < p - 1; ++c) v.c[c] = table[idx * (p - 1) + c];
    return v;
  }
};

namespace klo_detail {

// #{x in F* : x + 1/x = t} for every t, via the digit blob of the walk
inline std::vector<u8> pair_counts(const FField& F, const UnitWalk& w,
                                   const std::vector<u8>& blob) {
  std::vector<u8> C(F.q, 0);
  int m = F.k, p = F.p;
  for (u64 i = 0; i < w.Nu; ++i) {
    u64 j = (w.Nu - i) % w.Nu;  // log of 1/g^i
    const u8* a = blob.data() + i * (size_t)m;
    const u8* b = blob.data() + j * (size_t)m;
    u64 idx = 0;
    for (int r = m - 1; r >= 0; --r) {
      u32 s = (u32)a[r] + b[r];
      if (s >= (u32)p) s -= p;
      idx = idx * p + s;
    }
    C[idx]++;
  }
  return C;
}

// in-place transform F[tau] = sum_t C[t] zeta^{sum_j t_j tau_j} over the
// digit grid; entries are p unreduced zeta-power coordinates
inline void character_transform(std::vector<i32>& w, u64 N, int p, int m) {
  std::vector<int> rot(p * p);
  for (int t = 0; t < p; ++t)
    for (int tau = 0; tau < p; ++tau) rot[t * p + tau] = t * tau % p;
  std::vector<i32> in(p * p), out(p * p);
  u64 stride = 1;
  for (int dim = 0; dim < m; ++dim) {
    for (u64 base = 0; base < N; base += stride * p) {
      for (u64 off = 0; off < stride; ++off) {
        u64 i0 = base + off;
        for (int t = 0; t < p; ++t)
          std::memcpy(in.data() + t * p, w.data() + (i0 + t * stride) * p,
                      p * sizeof(i32));
        std::fill(out.begin(), out.end(), 0);
        for (int tau = 0; tau < p; ++tau)
          for (int t = 0; t < p; ++t) {
            int e = rot[t * p + tau];
            // add in[t] * zeta^e
            for (int c = 0; c < p; ++c) {
              int cc = c + e;
              if (cc >= p) cc -= p;
              out[tau * p + cc] += in[t * p + c];
            }
          }
        for (int tau = 0; tau < p; ++tau)
          std::memcpy(w.data() + (i0 + tau * stride) * p, out.data() + tau * p,
                      p * sizeof(i32));
      }
    }
    stride *= p;
  }
}

// The table depends only on the field F_{p^m}, so it is stored once under
// a = 1, k = m and shared by every (a, k) factorization of m.
inline std::filesystem::path cache_file(const std::string& dir, int p, int m) {
  return std::filesystem::path(dir) / ("klo_p" + std::to_string(p) + "_a1_k" +
                                       std::to_string(m) + ".tbl");
}

inline void write_u32(std::ostream& os, u32 v) {
  u8 b[4] = {(u8)(v & 0xFF), (u8)(v >> 8 & 0xFF), (u8)(v >> 16 & 0xFF), (u8)(v >> 24)};
  os.write((const char*)b, 4);
}

inline u32 read_u32(std::istream& is) {
  u8 b[4];
  is.read((char*)b, 4);
  return (u32)b[0] | (u32)b[1] << 8 | (u32)b[2] << 16 | (u32)b[3] << 24;
}

inline void save_table(const std::filesystem::path& path, int p, int a, int k,
                       const std::vector<long long>& table, long long max_abs) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  int width = (max_abs < (1LL << 31)) ? 4 : 8;
  os.write("KLTB", 4);
  write_u32(os, (u32)p);
  write_u32(os, (u32)a);
  write_u32(os, (u32)k);
  write_u32(os, (u32)width);
  std::vector<char> buf;
  buf.reserve(table.size() * width);
  for (long long v : table) {
    u64 uv = (u64)v;
    for (int b = 0; b < width; ++b) buf.push_back((char)(uv >> (8 * b) & 0xFF));
  }
  os.write(buf.data(), (std::streamsize)buf.size());
  if (!os) throw std::runtime_error("failed writing " + path.string());
}

inline std::vector<long long> load_table(const std::filesystem::path& path, int p, int m) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path.string());
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "KLTB", 4) != 0)
    throw std::runtime_error("bad table magic in " + path.string());
  u32 fp = read_u32(is), fa = read_u32(is), fk = read_u32(is), width = read_u32(is);
  if (fp != (u32)p || fa * fk != (u32)m)
    throw std::runtime_error("table header mismatch in " + path.string());
  if (width != 4 && width != 8)
    throw std::runtime_error("unsupported coordinate width in " + path.string());
  u64 N = pow_u64((u64)p, (unsigned)m);
  size_t count = (size_t)N * (p - 1);
  std::vector<char> buf(count * width);
  is.read(buf.data(), (std::streamsize)buf.size());
  if (!is || (size_t)is.gcount() != buf.size())
    throw std::runtime_error("truncated table " + path.string());
  std::vector<long long> table(count);
  for (size_t i = 0; i < count; ++i) {
    u64 uv = 0;
    for (int b = 0; b < width; ++b)
      uv |= (u64)(u8)buf[i * width + b] << (8 * b);
    if (width == 4)
      table[i] = (long long)(int32_t)(u32)uv;
    else
      table[i] = (long long)uv;
  }
  return table;
}

}  // namespace klo_detail

inline std::shared_ptr<const KloBundle> klo_bundle(int p, int m,
                                                   u64 entry_budget = kDefaultEntryBudget,
                                                   std::string cache_dir = {}) {
  static std::map<std::pair<int, int>, std::shared_ptr<const KloBundle>> reg;
  static std::mutex mx;
  {
    std::lock_guard<std::mutex> lk(mx);
    auto it = reg.find({p, m});
    if (it != reg.end()) return it->second;
  }
  // budget check before any allocation
  u64 N = 1;
  for (int i = 0; i < m; ++i) {
    if (N > kHardEntryCap / (u64)p) throw budget_error("kloosterman table exceeds hard cap");
    N *= (u64)p;
  }
  if (N > entry_budget) throw budget_error("kloosterman table exceeds entry budget");
  if (cache_dir.empty()) {
    const char* env = std::getenv("DWORK_CACHE");
    if (env) cache_dir = env;
  }

  auto B = std::make_shared<KloBundle>();
  B->p = p;
  B->m = m;
  B->F = &ffield(p, m);
  B->N = N;
  B->Nu = N - 1;
  const FField& F = *B->F;

  bool loaded = false;
  if (!cache_dir.empty()) {
    auto path = klo_detail::cache_file(cache_dir, p, m);
    if (std::filesystem::exists(path)) {
      B->table = klo_detail::load_table(path, p, m);
      B->walk = build_walk(F);
      loaded = true;
    }
  }
  if (!loaded) {
    std::vector<u8> blob;
    B->walk = build_walk(F, &blob);
    std::vector<u8> C = klo_detail::pair_counts(F, B->walk, blob);
    blob.clear();
    blob.shrink_to_fit();
    std::vector<i32> w((size_t)N * p, 0);
    for (u64 t = 0; t < N; ++t) w[t * p] = C[t];
    C.clear();
    C.shrink_to_fit();
    klo_detail::character_transform(w, N, p, m);
    // readout: K(b) = F[G b], G the Hankel matrix of trace powers
    B->table.assign((size_t)N * (p - 1), 0);
    std::vector<std::vector<u8>> gcol(m, std::vector<u8>(m));
    for (int j = 0; j < m; ++j)
      for (int r = 0; r < m; ++r) gcol[j][r] = F.tr_pow[j + r];
    std::vector<u8> digits(m, 0), tau(m, 0);
    for (u64 b = 0;; ++b) {
      u64 tidx = 0;
      for (int r = m - 1; r >= 0; --r) tidx = tidx * p + tau[r];
      long long base = (long long)w[tidx * p + p - 1];
      for (int c = 0; c < p - 1; ++c)
        B->table[b * (p - 1) + c] = (long long)w[tidx * p + c] - base;
      if (b + 1 == N) break;
      int j = 0;
      while (digits[j] == p - 1) {
        digits[j] = 0;
        for (int r = 0; r < m; ++r) {
          tau[r] = (u8)((tau[r] + gcol[j][r]) % p);
        }
        ++j;
      }
      digits[j]++;
      for (int r = 0; r < m; ++r) tau[r] = (u8)((tau[r] + gcol[j][r]) % p);
    }
    if (!cache_dir.empty()) {
      std::filesystem::create_directories(cache_dir);
      long long mx_abs = 0;
      for (long long v : B->table) mx_abs = std::max(mx_abs, v < 0 ? -v : v);
      klo_detail::save_table(klo_detail::cache_file(cache_dir, p, m), p, 1, m,
                             B->table, mx_abs);
    }
  }
  // scatter into log order for the family inner loop
  B->klog.assign((size_t)B->Nu * (p - 1), 0);
  long long mx_abs = 0;
  for (u64 idx = 1; idx < N; ++idx) {
    u32 lg = B->walk.log[idx];
    for (int c = 0; c < p - 1; ++c) {
      long long v = B->table[idx * (p - 1) + c];
      B->klog[(size_t)lg * (p - 1) + c] = v;
      mx_abs = std::max(mx_abs, v < 0 ? -v : v);
    }
  }
  B->max_abs = mx_abs;

  std::lock_guard<std::mutex> lk(mx);
  auto [it, fresh] = reg.emplace(std::make_pair(p, m), B);
  return it->second;
}

// ---------------------------------------------------------------------------
// Direct evaluation of S*(f) over (F_{p^{ak}}*)^nvars by odometer in log
// space; trace-linearity turns each point into a few table lookups.

inline CycInt expsum_direct(int p, int a, int k, const LaurentPoly& f,
                            u64 tuple_budget = kDefaultTupleBudget) {
  int m = a * k;
  const FField& F = ffield(p, m);
  u64 Nu = F.q - 1;
  // budget first, before any table work
  u64 total = 1;
  for (int i = 0; i < f.nvars; ++i) {
    if (total > tuple_budget / Nu) throw budget_error("direct sum exceeds tuple budget");
    total *= Nu;
  }
  UnitWalk w = build_walk(F);
  size_t T = f.exps.size();
  std::vector<u64> r(T);  // running log of each term value
  u64 qsub = pow_u64((u64)p, (unsigned)a);
  for (size_t j = 0; j < T; ++j) {
    if ((int)f.exps[j].size() != f.nvars) throw std::invalid_argument("exponent arity mismatch");
    if (f.coeffs[j] == 0 || f.coeffs[j] >= qsub)
      throw std::invalid_argument("coefficients must be units of the coefficient field");
    r[j] = w.log[embed_elem(p, a, m, f.coeffs[j])];
  }
  // per-variable term lists and exponent steps mod Nu
  std::vector<std::vector<std::pair<size_t, u64>>> touch(f.nvars);
  for (size_t j = 0; j < T; ++j)
    for (int v = 0; v < f.nvars; ++v)
      if (f.exps[j][v] != 0) {
        long long e = f.exps[j][v] % (long long)Nu;
        if (e < 0) e += (long long)Nu;
        touch[v].push_back({j, (u64)e});
      }
  // cheapest variable first in the odometer
  std::vector<int> order(f.nvars);
  for (int v = 0; v < f.nvars; ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return touch[x].size() < touch[y].size(); });

  std::vector<u64> counts(p, 0);
  std::vector<u64> l(f.nvars, 0);
  u64 tr_sum = 0;
  for (size_t j = 0; j < T; ++j) tr_sum += w.tr_log[r[j]];
  for (u64 step = 0;; ++step) {
    counts[tr_sum % p]++;
    if (step + 1 == total) break;
    for (int oi = 0;; ++oi) {
      int v = order[oi];
      for (auto& [j, e] : touch[v]) {
        tr_sum -= w.tr_log[r[j]];
        r[j] += e;
        if (r[j] >= Nu) r[j] -= Nu;
        tr_sum += w.tr_log[r[j]];
      }
      if (++l[v] < Nu) break;
      l[v] = 0;  // term logs have wrapped around with it
    }
  }
  CycInt out(p);
  for (int c = 0; c < p - 1; ++c) out.c[c] = Int(counts[c]) - Int(counts[p - 1]);
  return out;
}

// ---------------------------------------------------------------------------
// Family sums S*(f_a) over F_{q^k}, q = p^a, via the Kloosterman table:
// S = sum_{y != 0} zeta^{Tr(a_{n+1} y + 1/y)} prod_i K(a_i y).

class FamilyEvaluator {
 public:
  FamilyEvaluator(int p, int a, int k, u64 entry_budget = kDefaultEntryBudget,
                  std::string cache_dir = {})
      : p_(p), a_(a), k_(k), q_(pow_u64((u64)p, (unsigned)a)) {
    B_ = klo_bundle(p, a * k, entry_budget, std::move(cache_dir));
    embed_log_.assign(q_, UnitWalk::kNoLog);
    for (u64 s = 1; s < q_; ++s)
      embed_log_[s] = B_->walk.log[embed_elem(p_, a_, a_ * k_, s)];
  }

  const KloBundle& bundle() const { return *B_; }

  CycInt family_sum(int n, const std::vector<u64>& a) const {
    if ((int)a.size() != n + 1) throw std::invalid_argument("need n+1 coefficients");
    for (u64 c : a)
      if (c == 0 || c >= q_) throw std::invalid_argument("coefficients must be units of F_q");
    int p = p_;
    u64 Nu = B_->Nu;
    std::vector<u64> la(n + 1);
    for (int i = 0; i <= n; ++i) la[i] = embed_log_[a[i]];
    // overflow bound for the i128 fast path
    bool fits = true;
    {
      long double bound = (long double)Nu;
      for (int i = 0; i < n; ++i) bound *= (long double)(2 * p) * (long double)std::max<long long>(B_->max_abs, 1);
      if (bound > 1e37L) fits = false;
    }
    if (!fits) return family_sum_big(n, la);
    std::vector<i128> acc(p, 0);
    std::vector<i128> prod(p), tmp(p);
    const long long* klog = B_->klog.data();
    const u8* tr = B_->walk.tr_log.data();
    for (u64 j = 0; j < Nu; ++j) {
      u64 row0 = la[0] + j;
      if (row0 >= Nu) row0 -= Nu;
      const long long* k0 = klog + row0 * (p - 1);
      for (int c = 0; c < p - 1; ++c) prod[c] = k0[c];
      prod[p - 1] = 0;
      for (int i = 1; i < n; ++i) {
        u64 row = la[i] + j;
        if (row >= Nu) row -= Nu;
        const long long* ki = klog + row * (p - 1);
        std::fill(tmp.begin(), tmp.end(), 0);
        for (int c1 = 0; c1 < p - 1; ++c1) {
          if (prod[c1] == 0) continue;
          for (int c2 = 0; c2 < p - 1; ++c2) {
            int cc = c1 + c2;
            if (cc >= p) cc -= p;
            tmp[cc] += prod[c1] * ki[c2];
          }
        }
        // fold zeta^{p-1} into the power basis
        i128 top = tmp[p - 1];
        for (int c = 0; c < p - 1; ++c) prod[c] = tmp[c] - top;
        prod[p - 1] = 0;
      }
      u64 rowt = la[n] + j;
      if (rowt >= Nu) rowt -= Nu;
      u32 t = tr[rowt] + tr[(Nu - j) % Nu];
      if (t >= (u32)p) t -= p;
      for (int c = 0; c < p - 1; ++c) {
        int cc = c + (int)t;
        if (cc >= p) cc -= p;
        acc[cc] += prod[c];
      }
    }
    CycInt out(p);
    i128 top = acc[p - 1];
    for (int c = 0; c < p - 1; ++c) {
      i128 v = acc[c] - top;
      bool neg = v < 0;
      if (neg) v = -v;
      u64 lo = (u64)(v & (i128)0xFFFFFFFFFFFFFFFFULL);
      u64 hi = (u64)(v >> 64);
      Int big = (Int(hi) << 64) + Int(lo);
      out.c[c] = neg ? -big : big;
    }
    return out;
  }

 private:
  CycInt family_sum_big(int n, const std::vector<u64>& la) const {
    int p = p_;
    u64 Nu = B_->Nu;
    std::vector<Int> acc(p, Int(0)), prod(p), tmp(p);
    const long long* klog = B_->klog.data();
    const u8* tr = B_->walk.tr_log.data();
    for (u64 j = 0; j < Nu; ++j) {
      u64 row0 = (la[0] + j) % Nu;
      const long long* k0 = klog + row0 * (p - 1);
      for (int c = 0; c < p - 1; ++c) prod[c] = Int(k0[c]);
      prod[p - 1] = 0;
      for (int i = 1; i < n; ++i) {
        u64 row = (la[i] + j) % Nu;
        const long long* ki = klog + row * (p - 1);
        for (auto& t : tmp) t = 0;
        for (int c1 = 0; c1 < p - 1; ++c1)
          for (int c2 = 0; c2 < p - 1; ++c2) {
            int cc = c1 + c2;
            if (cc >= p) cc -= p;
            tmp[cc] += prod[c1] * Int(ki[c2]);
          }
        Int top = tmp[p - 1];
        for (int c = 0; c < p - 1; ++c) prod[c] = tmp[c] - top;
        prod[p - 1] = 0;
      }
      u32 t = tr[(la[n] + j) % Nu] + tr[(Nu - j) % Nu];
      if (t >= (u32)p) t -= p;
      for (int c = 0; c < p - 1; ++c) {
        int cc = c + (int)t;
        if (cc >= p) cc -= p;
        acc[cc] += prod[c];
      }
    }
    CycInt out(p);
    for (int c = 0; c < p - 1; ++c) out.c[c] = acc[c] - acc[p - 1];
    return out;
  }

  int p_, a_, k_;
  u64 q_;
  std::shared_ptr<const KloBundle> B_;
  std::vector<u64> embed_log_;
};

}  // namespace dwork
