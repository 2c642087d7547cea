#pragma once

// Case pipeline and sweep driver. A case runs nondegeneracy, power sums,
// symmetry completion, the vertex-coincidence verdict, and the closed-form
// values, and packs the result into one record; a sweep runs every unit
// coefficient vector of a grid and aggregates counts plus the pointwise
// minimum of the observed polygons. Serialization of records lives here too
// so the CLI and the tests share one format.

#include <json.hpp>

#include <chrono>
#include <fstream>
#include <thread>

#include "dwork/frobenius.hpp"
#include "dwork/lfun.hpp"

namespace dwork {

struct CaseFlags {
  int kmax = 0;              // direct sums beyond the forced vertex set
  bool full_degree = false;  // force all d power sums
  std::string cache_dir;     // empty: fall back to DWORK_CACHE
  u64 entry_budget = kDefaultEntryBudget;
};

struct HasseReport {
  int p = 0, a = 1, n = 1;
  std::vector<u64> coeffs;
  bool nondegenerate = false;
  u64 h_le1 = 0;
  std::optional<u64> h_full;          // n in {2, 3} only
  std::vector<OrdPoint> breakpoints;  // profile at the hodge vertex abscissas
  std::optional<bool> np_eq_hp;       // absent exactly when degenerate
  long long failing_index = -1;
  long long ms = 0;

  // retained for downstream checks, not serialized
  std::vector<OrdPoint> profile;
  std::optional<LSeries> series;
  std::optional<Polygon> partial_np;
};

// smallest k so that every hodge vertex abscissa x is reachable either
// directly (x <= k) or through the pairing x <-> d - x
inline int forced_kmax(const Polygon& hodge, int d) {
  long long need = 1;
  for (auto& [x, y] : hodge.break_points()) need = std::max(need, std::min(x, d - x));
  return (int)need;
}

inline HasseReport run_case(int p, int a, int n, const std::vector<u64>& coeffs,
                            const CaseFlags& flags = {}) {
  auto t0 = std::chrono::steady_clock::now();
  HasseReport r;
  r.p = p;
  r.a = a;
  r.n = n;
  r.coeffs = coeffs;
  r.nondegenerate = nondegenerate(p, a, coeffs, n);  // validates the input
  r.h_le1 = hasse_closed_le1(p, a, coeffs, n);
  if (n == 2 || n == 3) r.h_full = hasse_closed_full(p, a, coeffs, n);
  if (r.nondegenerate) {
    int d = 1 << (n + 1);
    Polygon hodge = family_polytope(n).hodge_polygon();
    int kmax = flags.full_degree ? d : std::max(flags.kmax, forced_kmax(hodge, d));
    kmax = std::min(kmax, d);
    std::vector<CycInt> sums;
    sums.reserve((size_t)kmax);
    for (int k = 1; k <= kmax; ++k) {
      FamilyEvaluator ev(p, a, k, flags.entry_budget, flags.cache_dir);
      sums.push_back(ev.family_sum(n, coeffs));
    }
    LSeries L = lseries_from_sums(p, a, n, sums);
    r.profile = valuation_profile(L);
    symmetry_complete(r.profile, L);
    auto verdict = np_eq_hp(r.profile, hodge);
    r.np_eq_hp = verdict.equal;
    r.failing_index = verdict.failing_index;
    for (auto& [x, y] : hodge.break_points())
      for (auto& e : r.profile)
        if (e.index == x) {
          r.breakpoints.push_back(e);
          break;
        }
    r.partial_np = newton_polygon(r.profile, d);
    r.series = std::move(L);
  }
  r.ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0)
             .count();
  return r;
}

struct SweepSummary {
  u64 total = 0, ordinary = 0, non_ordinary = 0, degenerate = 0;
  std::optional<Polygon> empirical_gnp;  // absent when every vector is degenerate
  std::optional<bool> gnp_eq_hp;
};

struct SweepRecord {
  std::vector<HasseReport> reports;  // lexicographic over unit index tuples
  SweepSummary summary;
};

inline SweepRecord run_sweep(int p, int a, int n, const CaseFlags& flags = {}, int jobs = 1,
                             u64 sweep_budget = 1000000ULL) {
  const FField& F = ffield(p, a);
  int m = n + 1;
  double size = 1;
  for (int i = 0; i < m; ++i) size *= (double)(F.q - 1);
  if (size > (double)sweep_budget) throw budget_error("sweep grid exceeds the step budget");
  u64 N = (u64)(size + 0.5);

  // shared tables before any fan-out
  int d = 1 << (n + 1);
  Polygon hodge = family_polytope(n).hodge_polygon();
  int kmax = flags.full_degree ? d : std::max(flags.kmax, forced_kmax(hodge, d));
  kmax = std::min(kmax, d);
  for (int k = 1; k <= kmax; ++k) klo_bundle(p, a * k, flags.entry_budget, flags.cache_dir);

  SweepRecord rec;
  rec.reports.resize(N);
  auto coeffs_at = [&](u64 idx) {
    std::vector<u64> c((size_t)m);
    for (int i = m - 1; i >= 0; --i) {
      c[(size_t)i] = 1 + idx % (F.q - 1);
      idx /= (F.q - 1);
    }
    return c;
  };
  auto work = [&](u64 lo, u64 hi) {
    for (u64 t = lo; t < hi; ++t) rec.reports[t] = run_case(p, a, n, coeffs_at(t), flags);
  };
  int J = std::max(1, jobs);
  if (J == 1 || N < 2 * (u64)J) {
    work(0, N);
  } else {
    std::vector<std::thread> pool;
    u64 chunk = (N + (u64)J - 1) / (u64)J;
    for (int j = 0; j < J; ++j) {
      u64 lo = (u64)j * chunk, hi = std::min(N, lo + chunk);
      if (lo < hi) pool.emplace_back(work, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  rec.summary.total = N;
  std::vector<std::optional<Rat>> best((size_t)d + 1);
  for (auto& r : rec.reports) {
    if (!r.nondegenerate) {
      ++rec.summary.degenerate;
      continue;
    }
    ++(*r.np_eq_hp ? rec.summary.ordinary : rec.summary.non_ordinary);
    for (int x = 0; x <= d; ++x) {
      Rat v = r.partial_np->value_at(x);
      if (!best[(size_t)x] || v < *best[(size_t)x]) best[(size_t)x] = v;
    }
  }
  if (rec.summary.degenerate < N) {
    std::vector<std::pair<long long, Rat>> pts;
    for (int x = 0; x <= d; ++x)
      if (best[(size_t)x]) pts.push_back({x, *best[(size_t)x]});
    rec.summary.empirical_gnp = Polygon::lower_hull(std::move(pts));
    rec.summary.gnp_eq_hp = (*rec.summary.empirical_gnp == hodge);
  }
  return rec;
}

// --------------------------------------------------------------------------
// Serialization. Field elements travel as base-p digit strings, most
// significant digit first, so prime-field elements read as plain integers.

inline std::string digit_string(const FField& F, u64 x) {
  std::vector<u8> d((size_t)F.k);
  F.digits_of(x, d.data());
  int top = F.k - 1;
  while (top > 0 && d[(size_t)top] == 0) --top;
  std::string s;
  for (int i = top; i >= 0; --i) s += (char)('0' + d[(size_t)i]);
  return s;
}

inline u64 parse_digit_string(const FField& F, const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty field element");
  if ((int)s.size() > F.k) throw std::invalid_argument("too many digits for the field");
  u64 idx = 0;
  for (char c : s) {
    if (c < '0' || c >= '0' + F.p) throw std::invalid_argument("digit out of range for base p");
    idx = idx * (u64)F.p + (u64)(c - '0');
  }
  return idx;
}

inline nlohmann::ordered_json polygon_json(const Polygon& g) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (auto& [x, y] : g.v) out.push_back({x, y.num, y.den});
  return out;
}

inline nlohmann::ordered_json report_json(const HasseReport& r) {
  const FField& F = ffield(r.p, r.a);
  nlohmann::ordered_json j;
  j["spec"]["p"] = r.p;
  j["spec"]["a"] = r.a;
  j["spec"]["n"] = r.n;
  auto cs = nlohmann::ordered_json::array();
  for (u64 c : r.coeffs) cs.push_back(digit_string(F, c));
  j["spec"]["coeffs"] = cs;
  j["nondegenerate"] = r.nondegenerate;
  j["h_le1"] = digit_string(F, r.h_le1);
  if (r.h_full)
    j["h_full"] = digit_string(F, *r.h_full);
  else
    j["h_full"] = nullptr;
  auto bp = nlohmann::ordered_json::array();
  for (auto& e : r.breakpoints) {
    nlohmann::ordered_json b;
    b["index"] = e.index;
    if (e.ord) {
      b["ord_num"] = e.ord->num;
      b["ord_den"] = e.ord->den;
    } else {
      b["ord_num"] = nullptr;
      b["ord_den"] = nullptr;
    }
    b["source"] = e.source == OrdSource::Direct ? "direct" : "symmetry";
    bp.push_back(b);
  }
  j["breakpoints"] = bp;
  if (r.np_eq_hp)
    j["np_eq_hp"] = *r.np_eq_hp;
  else
    j["np_eq_hp"] = nullptr;
  j["ms"] = r.ms;
  return j;
}

inline nlohmann::ordered_json summary_json(const SweepSummary& s) {
  nlohmann::ordered_json j;
  j["summary"]["count"] = s.total;
  j["summary"]["ordinary"] = s.ordinary;
  j["summary"]["non_ordinary"] = s.non_ordinary;
  j["summary"]["degenerate"] = s.degenerate;
  j["summary"]["empirical_gnp"] = s.empirical_gnp ? polygon_json(*s.empirical_gnp)
                                                  : nlohmann::ordered_json(nullptr);
  j["summary"]["gnp_eq_hp"] =
      s.gnp_eq_hp ? nlohmann::ordered_json(*s.gnp_eq_hp) : nlohmann::ordered_json(nullptr);
  return j;
}

inline std::string csv_row(const HasseReport& r, u64 idx) {
  const FField& F = ffield(r.p, r.a);
  std::string cs;
  for (size_t i = 0; i < r.coeffs.size(); ++i) {
    if (i) cs += ';';
    cs += digit_string(F, r.coeffs[i]);
  }
  std::string row = std::to_string(idx) + "," + cs + "," + (r.nondegenerate ? "1" : "0") + "," +
                    digit_string(F, r.h_le1) + ",";
  if (r.h_full) row += digit_string(F, *r.h_full);
  row += ",";
  if (r.np_eq_hp) row += *r.np_eq_hp ? "1" : "0";
  return row;
}

// two columns per vertex, decimals chosen to round-trip the exact slopes
inline std::string polygon_text(const Polygon& g) {
  std::string text;
  for (auto& [x, y] : g.v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%lld %.12g\n", x, (double)y.num / (double)y.den);
    text += buf;
  }
  return text;
}

inline void write_polygon_file(const Polygon& g, const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path.string());
  os << polygon_text(g);
}

// <base>.jsonl: one record per line plus a final summary line
// <base>.csv:   per-vector table
// <base>.gnp.txt: empirical polygon vertices, when defined
inline void write_sweep(const SweepRecord& rec, const std::string& base) {
  {
    std::ofstream os(base + ".jsonl");
    if (!os) throw std::runtime_error("cannot open " + base + ".jsonl");
    for (auto& r : rec.reports) os << report_json(r).dump() << "\n";
    os << summary_json(rec.summary).dump() << "\n";
  }
  {
    std::ofstream os(base + ".csv");
    if (!os) throw std::runtime_error("cannot open " + base + ".csv");
    os << "index,coeffs,nondegenerate,h_le1,h_full,np_eq_hp\n";
    for (u64 i = 0; i < rec.reports.size(); ++i) os << csv_row(rec.reports[i], i) << "\n";
  }
  if (rec.summary.empirical_gnp) write_polygon_file(*rec.summary.empirical_gnp, base + ".gnp.txt");
}

}  // namespace dwork
