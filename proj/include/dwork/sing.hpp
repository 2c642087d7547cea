#pragma once

// The obstruction sum as a polynomial in the family coefficients, and a
// search for singular points of the hypersurface it cuts out.

#include <map>

#include "dwork/frobenius.hpp"

namespace dwork {

// multivariate polynomial over F_p, sparse, exponents normalized
struct MPolyFp {
  int p = 0;
  int nvars = 0;
  std::map<std::vector<int>, u8> terms;  // exponent vector -> nonzero coeff

  MPolyFp() = default;
  MPolyFp(int p_, int nvars_) : p(p_), nvars(nvars_) {
    if (p < 2 || nvars < 1) throw std::invalid_argument("MPolyFp: bad shape");
  }

  void add_term(std::vector<int> e, long long c) {
    if ((int)e.size() != nvars) throw std::invalid_argument("MPolyFp: wrong arity");
    for (int x : e)
      if (x < 0) throw std::invalid_argument("MPolyFp: negative exponent");
    long long r = ((c % p) + p) % p;
    if (r == 0) return;
    auto it = terms.find(e);
    if (it == terms.end()) {
      terms.emplace(std::move(e), (u8)r);
    } else {
      int s = (it->second + (int)r) % p;
      if (s == 0)
        terms.erase(it);
      else
        it->second = (u8)s;
    }
  }

  MPolyFp partial(int v) const {
    if (v < 0 || v >= nvars) throw std::invalid_argument("MPolyFp: no such variable");
    MPolyFp out(p, nvars);
    for (const auto& [e, c] : terms) {
      if (e[(size_t)v] == 0) continue;
      std::vector<int> d = e;
      --d[(size_t)v];
      out.add_term(std::move(d), (long long)c * e[(size_t)v]);
    }
    return out;
  }

  MPolyFp times_var(int v) const {
    if (v < 0 || v >= nvars) throw std::invalid_argument("MPolyFp: no such variable");
    MPolyFp out(p, nvars);
    for (const auto& [e, c] : terms) {
      std::vector<int> d = e;
      ++d[(size_t)v];
      out.terms.emplace(std::move(d), c);
    }
    return out;
  }

  MPolyFp scaled(long long c) const {
    MPolyFp out(p, nvars);
    for (const auto& [e, co] : terms) out.add_term(e, (long long)co * c);
    return out;
  }

  friend MPolyFp operator+(const MPolyFp& a, const MPolyFp& b) {
    if (a.p != b.p || a.nvars != b.nvars) throw std::invalid_argument("MPolyFp: shape mismatch");
    MPolyFp out = a;
    for (const auto& [e, c] : b.terms) out.add_term(e, c);
    return out;
  }

  bool operator==(const MPolyFp& o) const {
    return p == o.p && nvars == o.nvars && terms == o.terms;
  }
  bool operator!=(const MPolyFp& o) const { return !(*this == o); }

  // evaluate at a point with coordinates in F (characteristic p required);
  // coordinates may be zero
  u64 eval(const FField& F, const std::vector<u64>& x) const {
    if (F.p != p) throw std::invalid_argument("MPolyFp: field of wrong characteristic");
    if ((int)x.size() != nvars) throw std::invalid_argument("MPolyFp: wrong arity");
    int dmax = 0;
    for (const auto& [e, c] : terms)
      for (int d : e) dmax = std::max(dmax, d);
    // per-variable power tables
    std::vector<std::vector<u64>> pw((size_t)nvars, std::vector<u64>((size_t)dmax + 1, 1));
    for (int v = 0; v < nvars; ++v)
      for (int d = 1; d <= dmax; ++d) pw[(size_t)v][(size_t)d] = F.mul(pw[(size_t)v][(size_t)d - 1], x[(size_t)v]);
    u64 acc = 0;
    for (const auto& [e, c] : terms) {
      u64 t = F.from_int(c);
      for (int v = 0; v < nvars && t != 0; ++v)
        if (e[(size_t)v]) t = F.mul(t, pw[(size_t)v][(size_t)e[(size_t)v]]);
      acc = F.add(acc, t);
    }
    return acc;
  }
};

// The weight<=1 obstruction sum as a polynomial in the n+1 family
// coefficients. Homogeneous of degree p-1 with C(n + (p-1)/2, n) monomials,
// all of whose coefficients are units.
inline MPolyFp hasse_symbolic(int p, int n) {
  if (n < 1) throw std::invalid_argument("hasse_symbolic: need n >= 1");
  MPolyFp h(p, n + 1);
  int half = (p - 1) / 2;
  std::vector<u64> fact((size_t)p);
  fact[0] = 1;
  for (int m = 1; m < p; ++m) fact[(size_t)m] = fact[(size_t)m - 1] * (u64)m % (u64)p;
  auto inv_mod_p = [&](u64 x) { return powmod_u64(x, (u64)(p - 2), (u64)p); };
  std::vector<int> e((size_t)n + 1, 0);
  std::function<void(int, int, u64)> rec = [&](int i, int sv, u64 den) {
    if (i == n) {
      int tail = p - 1 - 2 * sv;
      e[(size_t)n] = tail;
      h.add_term(e, (long long)inv_mod_p(den * fact[(size_t)tail] % (u64)p));
      return;
    }
    for (int v = 0; sv + v <= half; ++v) {
      e[(size_t)i] = 2 * v;
      rec(i + 1, sv + v, den * (fact[(size_t)v] * fact[(size_t)v] % (u64)p) % (u64)p);
    }
  };
  rec(0, 0, 1);
  return h;
}

inline std::vector<MPolyFp> gradient(const MPolyFp& h) {
  std::vector<MPolyFp> g;
  g.reserve((size_t)h.nvars);
  for (int v = 0; v < h.nvars; ++v) g.push_back(h.partial(v));
  return g;
}

// All projective points over F_{p^k} at which h and every partial of h
// vanish, in the first-nonzero-coordinate-is-one normal form, sorted
// lexicographically. For the obstruction polynomial the vanishing of h is
// forced by the Euler relation (the degree p-1 is a unit mod p); it is
// checked anyway since h is arbitrary here.
inline std::vector<std::vector<u64>> singular_search(const MPolyFp& h, int k,
                                                     u64 point_budget = 10000000ULL) {
  if (k < 1 || k > 2) throw std::invalid_argument("singular_search: extension degree must be 1 or 2");
  const FField& F = ffield(h.p, k);
  double cnt = 0, qp = 1;
  for (int i = 0; i < h.nvars; ++i) {
    cnt += qp;
    qp *= (double)F.q;
  }
  if (cnt > (double)point_budget) throw budget_error("singular_search: too many projective points");
  std::vector<MPolyFp> grad = gradient(h);
  std::vector<std::vector<u64>> out;
  std::vector<u64> x((size_t)h.nvars, 0);
  for (int lead = 0; lead < h.nvars; ++lead) {
    std::fill(x.begin(), x.end(), 0);
    x[(size_t)lead] = 1;
    int free = h.nvars - 1 - lead;
    while (true) {
      bool sing = h.eval(F, x) == 0;
      for (int v = 0; v < h.nvars && sing; ++v)
        if (grad[(size_t)v].eval(F, x) != 0) sing = false;
      if (sing) out.push_back(x);
      int pos = 0;
      while (pos < free) {
        if (++x[(size_t)(lead + 1 + pos)] < F.q) break;
        x[(size_t)(lead + 1 + pos)] = 0;
        ++pos;
      }
      if (pos == free) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace dwork
