#pragma once

// Newton polytopes of Laurent polynomials: exact facet description, weight
// function, lattice-point weight counts, Hodge numbers and the two polygons
// built from them. The generic path does brute-force exact hulls (ambient
// dimension <= 4 is plenty here); the two polytope families the pipeline
// actually sweeps get closed forms valid for every n.

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <optional>

#include "dwork/base.hpp"

namespace dwork {

using Point = std::vector<long long>;

struct Facet {
  std::vector<long long> e;  // primitive integer normal
  long long c = 0;           // <e,x> <= c on the polytope; c >= 0, origin inside
  bool flagged() const { return c > 0; }
};

// ---------------------------------------------------------------------------
// Polygons: piecewise-linear convex graphs through exact points.

struct Polygon {
  std::vector<std::pair<long long, Rat>> v;  // vertices, x strictly increasing

  static Polygon lower_hull(std::vector<std::pair<long long, Rat>> pts) {
    std::sort(pts.begin(), pts.end(), [](auto& a, auto& b) {
      return a.first != b.first ? a.first < b.first : a.second < b.second;
    });
    // keep only the lowest y per x
    std::vector<std::pair<long long, Rat>> u;
    for (auto& p : pts)
      if (u.empty() || u.back().first != p.first) u.push_back(p);
    Polygon h;
    for (auto& p : u) {
      while (h.v.size() >= 2) {
        auto& a = h.v[h.v.size() - 2];
        auto& b = h.v[h.v.size() - 1];
        // drop b unless the chain turns strictly left at b
        Rat lhs = (b.second - a.second) * Rat(p.first - b.first);
        Rat rhs = (p.second - b.second) * Rat(b.first - a.first);
        if (lhs < rhs) break;
        h.v.pop_back();
      }
      h.v.push_back(p);
    }
    return h;
  }

  Rat value_at(long long x) const {
    if (v.empty() || x < v.front().first || x > v.back().first)
      throw std::out_of_range("polygon evaluated outside support");
    for (size_t i = 0; i + 1 < v.size(); ++i) {
      if (x > v[i + 1].first) continue;
      auto [x0, y0] = v[i];
      auto [x1, y1] = v[i + 1];
      if (x == x0) return y0;
      return y0 + (y1 - y0) * Rat(x - x0, x1 - x0);
    }
    return v.back().second;
  }

  // vertices excluding the two endpoints
  std::vector<std::pair<long long, Rat>> break_points() const {
    if (v.size() <= 2) return {};
    return {v.begin() + 1, v.end() - 1};
  }

  friend bool operator==(const Polygon& a, const Polygon& b) { return a.v == b.v; }
  friend bool operator!=(const Polygon& a, const Polygon& b) { return !(a == b); }
};

// ---------------------------------------------------------------------------
// Exact convex hulls, brute force over normal candidates. Fine for <= ~20
// points in dimension <= 4.

namespace hull_detail {

inline long long det_ll(std::vector<std::vector<long long>> a) {
  // fraction-free Gaussian elimination (Bareiss)
  int n = (int)a.size();
  long long prev = 1, sign = 1;
  for (int i = 0; i < n - 1; ++i) {
    if (a[i][i] == 0) {
      int piv = -1;
      for (int r = i + 1; r < n; ++r)
        if (a[r][i] != 0) { piv = r; break; }
      if (piv < 0) return 0;
      std::swap(a[i], a[piv]);
      sign = -sign;
    }
    for (int r = i + 1; r < n; ++r)
      for (int c = i + 1; c < n; ++c)
        a[r][c] = (a[i][i] * a[r][c] - a[r][i] * a[i][c]) / prev;
    prev = a[i][i];
  }
  return sign * a[n - 1][n - 1];
}

// normal of the hyperplane through pts[0..m-1] (generalized cross product of
// the difference vectors); zero vector if they are affinely dependent
inline std::vector<long long> hyperplane_normal(const std::vector<Point>& pts) {
  int m = (int)pts[0].size();
  std::vector<std::vector<long long>> d(m - 1, std::vector<long long>(m));
  for (int i = 0; i + 1 < m; ++i)
    for (int j = 0; j < m; ++j) d[i][j] = pts[i + 1][j] - pts[0][j];
  std::vector<long long> e(m);
  for (int j = 0; j < m; ++j) {
    std::vector<std::vector<long long>> minor(m - 1, std::vector<long long>(m - 1));
    for (int r = 0; r + 1 < m; ++r) {
      int cc = 0;
      for (int c = 0; c < m; ++c)
        if (c != j) minor[r][cc++] = d[r][c];
    }
    long long dv = (m == 1) ? 1 : det_ll(minor);
    e[j] = (j % 2 == 0) ? dv : -dv;
  }
  return e;
}

inline long long dot(const std::vector<long long>& a, const Point& b) {
  long long s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline int lin_rank(const std::vector<Point>& pts, int m) {
  std::vector<std::vector<Rat>> rows;
  for (auto& p : pts) {
    std::vector<Rat> r(m);
    for (int j = 0; j < m; ++j) r[j] = Rat(p[j]);
    for (auto& base : rows) {
      int lead = -1;
      for (int j = 0; j < m; ++j)
        if (base[j] != Rat(0)) { lead = j; break; }
      if (lead >= 0 && r[lead] != Rat(0)) {
        Rat f = r[lead] / base[lead];
        for (int j = 0; j < m; ++j) r[j] = r[j] - f * base[j];
      }
    }
    bool nz = false;
    for (int j = 0; j < m; ++j) nz |= (r[j] != Rat(0));
    if (nz) rows.push_back(r);
    if ((int)rows.size() == m) break;
  }
  return (int)rows.size();
}

// all facets of conv(pts); pts must span R^m affinely
inline std::vector<Facet> hull_facets(const std::vector<Point>& pts, int m) {
  std::vector<Facet> out;
  std::map<std::pair<std::vector<long long>, long long>, bool> seen;
  size_t n = pts.size();
  if (m == 1) {
    long long lo = pts[0][0], hi = pts[0][0];
    for (auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    out.push_back({{1}, hi});
    out.push_back({{-1}, -lo});
    return out;
  }
  // iterate over all m-subsets
  std::vector<size_t> comb(m);
  for (size_t i = 0; i < (size_t)m; ++i) comb[i] = i;
  while (true) {
    std::vector<Point> sub;
    for (int i = 0; i < m; ++i) sub.push_back(pts[comb[i]]);
    auto e = hyperplane_normal(sub);
    bool zero = true;
    for (auto v : e) zero &= (v == 0);
    if (!zero) {
      long long g = 0;
      for (auto v : e) g = std::gcd(g, v < 0 ? -v : v);
      for (auto& v : e) v /= g;
      long long c = dot(e, sub[0]);
      bool le = true, ge = true;
      for (auto& p : pts) {
        long long d = dot(e, p);
        le &= (d <= c);
        ge &= (d >= c);
      }
      if (le || ge) {
        if (!le) {
          for (auto& v : e) v = -v;
          c = -c;
        }
        if (!seen.count({e, c})) {
          seen[{e, c}] = true;
          out.push_back({e, c});
        }
      }
    }
    // next combination
    int i = m - 1;
    while (i >= 0 && comb[i] == n - (size_t)(m - i)) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < m; ++j) comb[j] = comb[j - 1] + 1;
  }
  return out;
}

inline std::vector<Point> hull_vertices(const std::vector<Point>& pts,
                                        const std::vector<Facet>& facets, int m) {
  std::vector<Point> vs;
  for (auto& p : pts) {
    std::vector<Point> active;  // facet normals through p
    for (auto& f : facets)
      if (dot(f.e, p) == f.c) active.push_back(Point(f.e.begin(), f.e.end()));
    if ((int)active.size() >= m && lin_rank(active, m) == m)
      if (std::find(vs.begin(), vs.end(), p) == vs.end()) vs.push_back(p);
  }
  std::sort(vs.begin(), vs.end());
  return vs;
}

// m! * volume of conv(pts), exact; recursive pyramid decomposition
inline Rat normalized_volume(const std::vector<Point>& pts, int m) {
  if (m == 1) {
    long long lo = pts[0][0], hi = pts[0][0];
    for (auto& p : pts) {
      lo = std::min(lo, p[0]);
      hi = std::max(hi, p[0]);
    }
    return Rat(hi - lo);
  }
  auto facets = hull_facets(pts, m);
  const Point& v0 = pts[0];
  Rat total(0);
  for (auto& f : facets) {
    long long h = f.c - dot(f.e, v0);
    if (h == 0) continue;  // v0 on the facet: flat pyramid
    std::vector<Point> fp;
    for (auto& p : pts)
      if (dot(f.e, p) == f.c) fp.push_back(p);
    int drop = -1;
    for (int j = 0; j < m; ++j)
      if (f.e[j] != 0) { drop = j; break; }
    std::vector<Point> proj;
    for (auto& p : fp) {
      Point q;
      for (int j = 0; j < m; ++j)
        if (j != drop) q.push_back(p[j]);
      proj.push_back(q);
    }
    Rat base = normalized_volume(proj, m - 1);
    long long ed = f.e[drop] < 0 ? -f.e[drop] : f.e[drop];
    total = total + Rat(h < 0 ? -h : h) * base / Rat(ed);
  }
  return total;
}

}  // namespace hull_detail

// ---------------------------------------------------------------------------

struct WeightTable {
  int D = 1;
  std::vector<long long> W;  // W[i] = #{u : w(u) = i/D}
};

class Polytope {
 public:
  enum class Kind { Generic, FamilyFull, FamilyRestricted };

  int m = 0;  // ambient dimension
  int D = 1;
  Kind kind = Kind::Generic;
  int family_n = 0;
  std::vector<Facet> facets;
  std::vector<Point> vertices;

  bool origin_interior() const {
    for (auto& f : facets)
      if (!f.flagged()) return false;
    return true;
  }

  // weight of a lattice point; nullopt = +infinity (outside the cone)
  std::optional<Rat> weight(const Point& u) const {
    if (kind == Kind::FamilyFull) {
      long long s = 0;
      for (int i = 0; i < family_n; ++i) s += u[i] < 0 ? -u[i] : u[i];
      long long h = u[family_n];
      return Rat(std::max({(long long)0, h, 2 * s - h}));
    }
    if (kind == Kind::FamilyRestricted) {
      long long s = 0;
      for (int i = 0; i < family_n; ++i) s += u[i] < 0 ? -u[i] : u[i];
      long long h = u[family_n];
      if (s > h) return std::nullopt;
      return Rat(h);
    }
    Rat best(0);
    for (auto& f : facets) {
      long long d = hull_detail::dot(f.e, u);
      if (!f.flagged()) {
        if (d > 0) return std::nullopt;
        continue;
      }
      Rat w(d, f.c);
      if (best < w) best = w;
    }
    return best;
  }

  // W(i/D) for i = 0..kmax_num
  WeightTable weight_counts(int kmax_num) const {
    WeightTable t;
    t.D = D;
    t.W.assign(kmax_num + 1, 0);
    if (kind == Kind::FamilyFull) {
      // generating function H(x) / (1-x)^{n+1} with H(j) = C(n+1, j)
      int n = family_n;
      for (int k = 0; k <= kmax_num; ++k) {
        long long s = 0;
        for (int j = 0; j <= std::min(k, n + 1); ++j)
          s += binom(n + 1, j) * binom(k - j + n, n);
        t.W[k] = s;
      }
      return t;
    }
    if (kind == Kind::FamilyRestricted) {
      // lattice points of the radius-k l1 ball in Z^n
      int n = family_n;
      for (int k = 0; k <= kmax_num; ++k) {
        long long s = 0;
        for (int j = 0; j <= std::min(n, k); ++j)
          s += (1LL << j) * binom(n, j) * binom(k, j);
        t.W[k] = s;
      }
      return t;
    }
    enumerate_box(kmax_num, [&](const Point&, int wnum) { t.W[wnum]++; });
    return t;
  }

  // lattice points with weight <= kmax_num/D, bucketed by weight numerator,
  // each bucket sorted lexicographically
  std::vector<std::vector<Point>> points_weight_le(int kmax_num) const {
    std::vector<std::vector<Point>> buckets(kmax_num + 1);
    if (kind == Kind::Generic) {
      enumerate_box(kmax_num, [&](const Point& u, int wnum) { buckets[wnum].push_back(u); });
    } else {
      // family cones: |u_1| + ... + |u_n| bounded in terms of the height
      int n = family_n;
      long long hmin = (kind == Kind::FamilyFull) ? -kmax_num : 0;
      for (long long h = hmin; h <= kmax_num; ++h) {
        long long rad = (kind == Kind::FamilyFull) ? (kmax_num + h) / 2 : h;
        Point u(n + 1, 0);
        u[n] = h;
        enumerate_l1_ball(u, 0, rad, [&](const Point& v) {
          auto w = weight(v);
          if (w && *w <= Rat(kmax_num, D)) {
            Rat scaled = *w * Rat(D);
            buckets[(int)scaled.num].push_back(v);
          }
        });
      }
    }
    for (auto& b : buckets) std::sort(b.begin(), b.end());
    return buckets;
  }

  // H(k) = sum_i (-1)^i C(m, i) W(k - i*D), k = 0..m*D
  std::vector<long long> hodge_numbers() const {
    if (kind == Kind::FamilyFull) {
      std::vector<long long> H(m + 1);
      for (int k = 0; k <= m; ++k) H[k] = binom(m, k);
      return H;
    }
    auto t = weight_counts(m * D);
    std::vector<long long> H(m * D + 1, 0);
    for (int k = 0; k <= m * D; ++k) {
      long long s = 0;
      for (int i = 0; i <= m; ++i) {
        int j = k - i * D;
        if (j < 0) break;
        s += (i % 2 ? -1 : 1) * binom(m, i) * t.W[j];
      }
      H[k] = s;
    }
    return H;
  }

  Polygon hodge_polygon() const {
    auto H = hodge_numbers();
    Polygon g;
    g.v.push_back({0, Rat(0)});
    long long x = 0;
    Rat y(0);
    for (int k = 0; k < (int)H.size(); ++k) {
      if (H[k] == 0) continue;
      x += H[k];
      y = y + Rat(k, D) * Rat(H[k]);
      g.v.push_back({x, y});
    }
    return g;
  }

  Polygon chain_polygon(int kmax_num) const {
    auto t = weight_counts(kmax_num);
    Polygon g;
    g.v.push_back({0, Rat(0)});
    long long x = 0;
    Rat y(0);
    for (int i = 0; i <= kmax_num; ++i) {
      if (t.W[i] == 0) continue;
      x += t.W[i];
      y = y + Rat(i, D) * Rat(t.W[i]);
      g.v.push_back({x, y});
    }
    return g;
  }

  // m! * Vol
  Int normalized_volume() const {
    if (kind == Kind::FamilyFull) return Int(1) << (family_n + 1);
    std::vector<Point> pts = vertices;
    Rat v = hull_detail::normalized_volume(pts, m);
    if (!v.is_integer()) throw std::logic_error("normalized volume must be integral");
    return Int(v.num);
  }

  static long long binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  }

 private:
  template <typename F>
  void enumerate_box(int kmax_num, F&& visit) const {
    // bounding box of (kmax/D) * polytope from the vertex coordinates
    std::vector<long long> lo(m, 0), hi(m, 0);
    for (auto& v : vertices)
      for (int j = 0; j < m; ++j) {
        // scale kmax/D, round outward
        long long num = v[j] * kmax_num;
        long long f = num >= 0 ? num / D : -((-num + D - 1) / D);
        long long cc = num >= 0 ? (num + D - 1) / D : -((-num) / D);
        lo[j] = std::min(lo[j], f);
        hi[j] = std::max(hi[j], cc);
      }
    Point u(m);
    std::function<void(int)> rec = [&](int level) {
      if (level == m) {
        auto w = weight(u);
        if (w && *w <= Rat(kmax_num, D)) {
          Rat scaled = *w * Rat(D);
          visit(u, (int)scaled.num);
        }
        return;
      }
      for (long long x = lo[level]; x <= hi[level]; ++x) {
        u[level] = x;
        rec(level + 1);
      }
    };
    rec(0);
  }

  template <typename F>
  void enumerate_l1_ball(Point& u, int i, long long rad, F&& visit) const {
    if (rad < 0) return;
    if (i == family_n) {
      visit(u);
      return;
    }
    for (long long x = -rad; x <= rad; ++x) {
      u[i] = x;
      enumerate_l1_ball(u, i + 1, rad - (x < 0 ? -x : x), visit);
    }
    u[i] = 0;
  }
};

// conv(points ∪ {origin}); errors when the hull is not full-dimensional.
// The generic path is limited to ambient dimension 4.
inline Polytope polytope_from_monomials(const std::vector<Point>& monomials) {
  if (monomials.empty()) throw std::invalid_argument("no monomials");
  int m = (int)monomials[0].size();
  if (m < 1 || m > 4) throw std::invalid_argument("generic polytope path supports dimension 1..4");
  std::vector<Point> pts = monomials;
  for (auto& p : pts)
    if ((int)p.size() != m) throw std::invalid_argument("mixed exponent dimensions");
  pts.push_back(Point(m, 0));
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (hull_detail::lin_rank(pts, m) < m)
    throw std::invalid_argument("polytope is not full-dimensional");
  Polytope P;
  P.m = m;
  P.kind = Polytope::Kind::Generic;
  P.facets = hull_detail::hull_facets(pts, m);
  for (auto& f : P.facets)
    if (f.c < 0) throw std::logic_error("origin outside the hull");
  P.vertices = hull_detail::hull_vertices(pts, P.facets, m);
  long long D = 1;
  for (auto& f : P.facets)
    if (f.flagged()) D = std::lcm(D, f.c);
  P.D = (int)D;
  return P;
}

// Delta_n: hull of {±e_i + e_{n+1} (i <= n), e_{n+1}, -e_{n+1}}.
// Facets: x_{n+1} <= 1 and 2*sum eps_i x_i - x_{n+1} <= 1 for eps in {±1}^n.
inline Polytope family_polytope(int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("family dimension out of range");
  Polytope P;
  P.m = n + 1;
  P.D = 1;
  P.kind = Polytope::Kind::FamilyFull;
  P.family_n = n;
  Facet top;
  top.e.assign(n + 1, 0);
  top.e[n] = 1;
  top.c = 1;
  P.facets.push_back(top);
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    Facet f;
    f.e.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) f.e[i] = (mask >> i & 1) ? 2 : -2;
    f.e[n] = -1;
    f.c = 1;
    P.facets.push_back(f);
  }
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      Point v(n + 1, 0);
      v[i] = s;
      v[n] = 1;
      P.vertices.push_back(v);
    }
  Point bottom(n + 1, 0);
  bottom[n] = -1;
  P.vertices.push_back(bottom);
  std::sort(P.vertices.begin(), P.vertices.end());
  return P;
}

// Delta'_n: pyramid over the n-cross-polytope at height 1 with apex 0; the
// only facet missing the origin is x_{n+1} <= 1.
inline Polytope family_restricted_polytope(int n) {
  if (n < 1 || n > 16) throw std::invalid_argument("family dimension out of range");
  Polytope P;
  P.m = n + 1;
  P.D = 1;
  P.kind = Polytope::Kind::FamilyRestricted;
  P.family_n = n;
  Facet top;
  top.e.assign(n + 1, 0);
  top.e[n] = 1;
  top.c = 1;
  P.facets.push_back(top);
  for (long long mask = 0; mask < (1LL << n); ++mask) {
    Facet f;
    f.e.assign(n + 1, 0);
    for (int i = 0; i < n; ++i) f.e[i] = (mask >> i & 1) ? 1 : -1;
    f.e[n] = -1;
    f.c = 0;
    P.facets.push_back(f);
  }
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      Point v(n + 1, 0);
      v[i] = s;
      v[n] = 1;
      P.vertices.push_back(v);
    }
  Point apex(n + 1, 0);
  P.vertices.push_back(apex);
  std::sort(P.vertices.begin(), P.vertices.end());
  return P;
}

// indices of the terms whose exponent vector lies on the given facet
inline std::vector<size_t> face_terms(const Facet& f, const std::vector<Point>& exps) {
  std::vector<size_t> out;
  for (size_t i = 0; i < exps.size(); ++i)
    if (hull_detail::dot(f.e, exps[i]) == f.c) out.push_back(i);
  return out;
}

}  // namespace dwork
