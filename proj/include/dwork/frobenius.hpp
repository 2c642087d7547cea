#pragma once

// The p-adic side of the family: splitting-series coefficients, entries of
// the Frobenius matrix on the weight-graded monomial basis, the determinant
// of its weight<=1 block, the closed form that determinant reduces to, and
// the nondegeneracy tests that decide whether the theory applies at all.

#include <boost/multiprecision/cpp_int.hpp>

#include <functional>
#include <optional>

#include "dwork/expsum.hpp"
#include "dwork/ff.hpp"
#include "dwork/polytope.hpp"

namespace dwork {

using BigRat = boost::multiprecision::cpp_rational;

// Coefficients lambda_m of the splitting series E(x) = exp(sum_i x^{p^i}/p^i)
// for m = 0..m_max, as exact rationals. Differentiating gives
// E'(x) = E(x) * sum_i x^{p^i - 1}, hence
//   (k+1) lambda_{k+1} = sum_{p^i <= k+1} lambda_{k+1-p^i}.
inline std::vector<BigRat> artin_hasse(int p, int m_max) {
  if (p < 2 || m_max < 0) throw std::invalid_argument("artin_hasse: bad arguments");
  std::vector<BigRat> lam((size_t)m_max + 1);
  lam[0] = 1;
  for (int k = 0; k < m_max; ++k) {
    BigRat s = 0;
    for (u64 pe = 1; (long long)pe <= k + 1; pe *= (u64)p) s += lam[(size_t)(k + 1) - pe];
    lam[(size_t)k + 1] = s / (k + 1);
  }
  return lam;
}

// Residues mod p. Every lambda_m is p-integral, so this is well defined.
inline std::vector<u8> artin_hasse_residues(int p, int m_max) {
  auto lam = artin_hasse(p, m_max);
  std::vector<u8> r(lam.size());
  for (size_t m = 0; m < lam.size(); ++m) {
    Int num = boost::multiprecision::numerator(lam[m]);
    Int den = boost::multiprecision::denominator(lam[m]);
    if (den % p == 0) throw std::logic_error("splitting coefficient is not p-integral");
    u64 nm = (u64)(long long)(((num % p) + p) % p);
    u64 dm = (u64)(long long)(den % p);
    r[m] = (u8)(nm * powmod_u64(dm, (u64)(p - 2), (u64)p) % (u64)p);
  }
  return r;
}

// Entry of the Frobenius matrix between basis monomials indexed by lattice
// points r (row) and s (column):
//
//   sum over u_1..u_T >= 0 with sum_j u_j V_j = p*s - r
//                         and  sum_j u_j     = p*w(s) - w(r)
//   of  prod_j lambda_{u_j} c_j^{u_j}
//
// evaluated in F_q. V_j are the exponent vectors of the terms, c_j their
// coefficients (canonical indices in Fq), lam the residues of lambda.
inline u64 frob_entry(const FField& Fq, const std::vector<Point>& exps,
                      const std::vector<u64>& coeffs, const std::vector<u8>& lam,
                      const Point& r, const Point& s, long long wr, long long ws) {
  size_t dim = r.size();
  size_t T = exps.size();
  if (coeffs.size() != T || s.size() != dim) throw std::invalid_argument("frob_entry: shape mismatch");
  long long budget = (long long)Fq.p * ws - wr;
  if (budget < 0) return 0;
  if (budget >= (long long)lam.size())
    throw std::invalid_argument("frob_entry: splitting coefficients too short for this weight");
  Point rem(dim);
  for (size_t i = 0; i < dim; ++i) rem[i] = (long long)Fq.p * s[i] - r[i];
  // reach[j] = max |coordinate| over terms j..T-1, for pruning
  std::vector<long long> reach(T + 1, 0);
  for (size_t j = T; j-- > 0;) {
    long long mx = 0;
    for (long long e : exps[j]) mx = std::max(mx, e < 0 ? -e : e);
    reach[j] = std::max(reach[j + 1], mx);
  }
  u64 acc = 0;
  std::function<void(size_t, long long, u64)> dfs = [&](size_t j, long long left, u64 prod) {
    if (j == T) {
      if (left != 0) return;
      for (size_t i = 0; i < dim; ++i)
        if (rem[i] != 0) return;
      acc = Fq.add(acc, prod);
      return;
    }
    for (size_t i = 0; i < dim; ++i) {
      long long need = rem[i] < 0 ? -rem[i] : rem[i];
      if (need > left * reach[j]) return;
    }
    u64 apow = 1;
    for (long long u = 0; u <= left; ++u) {
      if (u > 0) {
        apow = Fq.mul(apow, coeffs[j]);
        for (size_t i = 0; i < dim; ++i) rem[i] -= exps[j][i];
      }
      if (lam[(size_t)u] != 0) {
        u64 pr = Fq.mul(prod, Fq.mul(Fq.from_int(lam[(size_t)u]), apow));
        if (pr != 0) dfs(j + 1, left - u, pr);
      }
    }
    for (size_t i = 0; i < dim; ++i) rem[i] += exps[j][i] * left;
  };
  dfs(0, budget, 1);
  return acc;
}

// determinant over F_q by Gaussian elimination; consumes its copy of M
inline u64 det_fq(const FField& F, std::vector<std::vector<u64>> M) {
  size_t m = M.size();
  for (const auto& row : M)
    if (row.size() != m) throw std::invalid_argument("det_fq: matrix not square");
  u64 det = 1;
  for (size_t c = 0; c < m; ++c) {
    size_t piv = c;
    while (piv < m && M[piv][c] == 0) ++piv;
    if (piv == m) return 0;
    if (piv != c) {
      std::swap(M[piv], M[c]);
      det = F.neg(det);
    }
    det = F.mul(det, M[c][c]);
    u64 inv = F.inv(M[c][c]);
    for (size_t r = c + 1; r < m; ++r) {
      if (M[r][c] == 0) continue;
      u64 f = F.mul(M[r][c], inv);
      for (size_t cc = c; cc < m; ++cc) M[r][cc] = F.sub(M[r][cc], F.mul(f, M[c][cc]));
    }
  }
  return det;
}

// Determinant of the weight<=1 block of the Frobenius matrix for the
// restriction of the family to its top facet (the pyramid over the cross
// polytope). Basis points ordered weight first, then lex. Coefficients are
// canonical indices in F_{p^a}.
inline u64 hasse_minor(int p, int a, const std::vector<u64>& coeffs, int n) {
  LaurentPoly f = family_poly(n, coeffs);  // validates sizes and units
  const FField& F = ffield(p, a);
  for (u64 c : coeffs)
    if (c >= F.q) throw std::invalid_argument("coefficient outside the field");
  // top-facet terms are all of f except the final 1/x_{n+1} term
  std::vector<Point> exps(f.exps.begin(), f.exps.end() - 1);
  std::vector<u64> cf(f.coeffs.begin(), f.coeffs.end() - 1);
  auto buckets = family_restricted_polytope(n).points_weight_le(1);
  std::vector<Point> basis;
  std::vector<long long> wt;
  for (long long w = 0; w < (long long)buckets.size(); ++w)
    for (const Point& u : buckets[(size_t)w]) {
      basis.push_back(u);
      wt.push_back(w);
    }
  auto lam = artin_hasse_residues(p, p);
  size_t m = basis.size();
  std::vector<std::vector<u64>> M(m, std::vector<u64>(m));
  for (size_t r = 0; r < m; ++r)
    for (size_t s = 0; s < m; ++s)
      M[r][s] = frob_entry(F, exps, cf, lam, basis[r], basis[s], wt[r], wt[s]);
  return det_fq(F, M);
}

// Closed form that the minor reduces to:
//   sum over v_1..v_n >= 0 with sum v <= (p-1)/2 of
//     abar_1^{2 v_1} ... abar_n^{2 v_n} abar_{n+1}^{p-1-2 sum v}
//       / ((v_1! ... v_n!)^2 (p-1-2 sum v)!)
// evaluated in F_{p^a}. Nonvanishing decides whether the Newton polygon of
// the family member meets its lower bound.
inline u64 hasse_closed_le1(int p, int a, const std::vector<u64>& coeffs, int n) {
  if (n < 1 || (int)coeffs.size() != n + 1)
    throw std::invalid_argument("need n >= 1 and n+1 coefficients");
  const FField& F = ffield(p, a);
  for (u64 c : coeffs)
    if (c == 0 || c >= F.q) throw std::invalid_argument("coefficients must be units");
  int half = (p - 1) / 2;
  std::vector<u64> fact((size_t)p);
  fact[0] = 1;
  for (int m = 1; m < p; ++m) fact[(size_t)m] = fact[(size_t)m - 1] * (u64)m % (u64)p;
  auto inv_mod_p = [&](u64 x) { return powmod_u64(x, (u64)(p - 2), (u64)p); };
  u64 total = 0;
  std::function<void(int, int, u64)> rec = [&](int i, int sv, u64 prod) {
    if (i == n) {
      int e = p - 1 - 2 * sv;
      u64 t = F.mul(prod, F.pow(coeffs[(size_t)n], (u64)e));
      t = F.mul(t, F.from_int((long long)inv_mod_p(fact[(size_t)e])));
      total = F.add(total, t);
      return;
    }
    u64 asq = F.mul(coeffs[(size_t)i], coeffs[(size_t)i]);
    u64 ap = 1;
    for (int v = 0; sv + v <= half; ++v) {
      if (v > 0) ap = F.mul(ap, asq);
      u64 invf = inv_mod_p(fact[(size_t)v] * fact[(size_t)v] % (u64)p);
      rec(i + 1, sv + v, F.mul(prod, F.mul(ap, F.from_int((long long)invf))));
    }
  };
  rec(0, 0, 1);
  return total;
}

// For n = 2 and n = 3 the weight<=1 sum already is the whole obstruction:
// every higher minor is a unit multiple of a power of it.
inline u64 hasse_closed_full(int p, int a, const std::vector<u64>& coeffs, int n) {
  if (n != 2 && n != 3)
    throw std::domain_error("full closed form only available for n = 2 and n = 3");
  return hasse_closed_le1(p, a, coeffs, n);
}

// Sign patterns eps in {+,-}^n with 2 eps_1 a_1 + ... + 2 eps_n a_n + a_{n+1} = 0
// (bit i set means eps_i = -1). Each one is a direction in which the top-facet
// restriction degenerates.
inline std::vector<u32> degenerate_patterns(int p, int a, const std::vector<u64>& coeffs, int n) {
  if (n < 1 || n > 30 || (int)coeffs.size() != n + 1)
    throw std::invalid_argument("need 1 <= n <= 30 and n+1 coefficients");
  const FField& F = ffield(p, a);
  for (u64 c : coeffs)
    if (c == 0 || c >= F.q) throw std::invalid_argument("coefficients must be units");
  std::vector<u32> out;
  for (u32 mask = 0; mask < (1u << n); ++mask) {
    u64 v = coeffs[(size_t)n];
    for (int i = 0; i < n; ++i) {
      u64 t = F.add(coeffs[(size_t)i], coeffs[(size_t)i]);
      v = (mask >> i) & 1 ? F.sub(v, t) : F.add(v, t);
    }
    if (v == 0) out.push_back(mask);
  }
  return out;
}

inline bool nondegenerate(int p, int a, const std::vector<u64>& coeffs, int n) {
  return degenerate_patterns(p, a, coeffs, n).empty();
}

struct DegWitness {
  size_t facet = 0;        // index into family_polytope(n).facets
  int k = 0;               // extension degree over the coefficient field
  std::vector<u64> point;  // canonical indices in F_{q^k}, one per variable
};

// Searches flagged facets for a torus point where every toric partial
// x_v d/dx_v of the facet restriction vanishes. A facet whose restriction has
// a single-monomial partial is skipped outright: a unit monomial has no zero
// on the torus. Extension degrees are tried in increasing order up to kmax;
// a level whose tuple count exceeds the budget is not searched.
inline std::optional<DegWitness> degeneracy_witness(int p, int a, const std::vector<u64>& coeffs,
                                                    int n, int kmax = 3,
                                                    u64 tuple_budget = 10000000ULL) {
  LaurentPoly f = family_poly(n, coeffs);  // validates
  Polytope P = family_polytope(n);
  int m = n + 1;
  for (int k = 1; k <= kmax; ++k) {
    const FField& E = ffield(p, a * k);
    std::vector<u64> ec(f.coeffs.size());
    for (size_t j = 0; j < f.coeffs.size(); ++j) ec[j] = embed_elem(p, a, a * k, f.coeffs[j]);
    double cnt = 1;
    for (int i = 0; i < m; ++i) cnt *= (double)(E.q - 1);
    if (cnt > (double)tuple_budget) break;
    for (size_t fi = 0; fi < P.facets.size(); ++fi) {
      if (!P.facets[fi].flagged()) continue;
      auto idx = face_terms(P.facets[fi], f.exps);
      bool hopeless = false;
      for (int v = 0; v < m && !hopeless; ++v) {
        int live = 0;
        for (size_t t : idx) live += (f.exps[t][(size_t)v] % p) != 0;
        if (live == 1) hopeless = true;
      }
      if (hopeless) continue;
      std::vector<u64> pt((size_t)m, 1);
      while (true) {
        bool allzero = true;
        for (int v = 0; v < m && allzero; ++v) {
          u64 s = 0;
          bool any = false;
          for (size_t t : idx) {
            long long ev = f.exps[t][(size_t)v];
            if (ev % p == 0) continue;
            any = true;
            u64 mon = ec[t];
            for (int w = 0; w < m; ++w) {
              long long e = f.exps[t][(size_t)w];
              if (e == 0) continue;
              u64 b = e > 0 ? pt[(size_t)w] : E.inv(pt[(size_t)w]);
              mon = E.mul(mon, E.pow(b, (u64)(e > 0 ? e : -e)));
            }
            s = E.add(s, E.scale(ev, mon));
          }
          if (any && s != 0) allzero = false;
        }
        if (allzero) return DegWitness{fi, k, pt};
        int pos = 0;
        while (pos < m) {
          if (++pt[(size_t)pos] < E.q) break;
          pt[(size_t)pos] = 1;
          ++pos;
        }
        if (pos == m) break;
      }
    }
  }
  return std::nullopt;
}

}  // namespace dwork
