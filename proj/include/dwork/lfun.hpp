#pragma once

// From torus sums to the L-polynomial and its Newton polygon. Everything up
// to the final polygon is exact: coefficients live in Z[zeta_p], valuations
// are rationals via the (1 - zeta)-adic valuation, and the functional
// equation is applied with exact division.

#include <complex>

#include "dwork/cyclo.hpp"
#include "dwork/polytope.hpp"

namespace dwork {

// coordinate-wise exact division by a rational integer
inline CycInt div_exact_int(const CycInt& u, const Int& n) {
  if (n == 0) throw std::domain_error("division by zero");
  CycInt r(u.p);
  for (int i = 0; i < u.p - 1; ++i) {
    if (u.c[i] % n != 0) throw std::runtime_error("inexact integer division in Z[zeta]");
    r.c[i] = u.c[i] / n;
  }
  return r;
}

// exact division in Z[zeta_p] via the norm; throws when u/v is not integral
inline CycInt cyc_divide_exact(const CycInt& u, const CycInt& v) {
  if (u.p != v.p) throw std::invalid_argument("mixed cyclotomic orders");
  if (v.is_zero()) throw std::domain_error("division by zero");
  CycInt w = u, nrm = v;
  for (int j = 2; j < v.p; ++j) {
    CycInt s = v.galois(j);
    w *= s;
    nrm *= s;
  }
  for (int i = 1; i < v.p - 1; ++i)
    if (nrm.c[i] != 0) throw std::logic_error("norm is not a rational integer");
  return div_exact_int(w, nrm.c[0]);
}

// ord_q of x, i.e. lambda-val / (a (p-1)); nullopt when x = 0
inline std::optional<Rat> ord_q(const CycInt& x, int a) {
  auto v = lambda_val(x);
  if (!v) return std::nullopt;
  return Rat(*v, (long long)a * (x.p - 1));
}

// Newton's identities: sums[k-1] = S_k for k = 1..K over (F*)^nvars gives
// A_0..A_K of P(T) = prod (1 - alpha T) with sum alpha^k = (-1)^nvars S_k.
// Throws when the resulting coefficients are not algebraic integers.
inline std::vector<CycInt> lpoly_from_sums(int p, int nvars,
                                           const std::vector<CycInt>& sums) {
  int K = (int)sums.size();
  int sign = (nvars % 2 == 0) ? 1 : -1;
  std::vector<CycRat> e(K + 1, CycRat(p, 0)), ps(K + 1, CycRat(p, 0));
  e[0] = CycRat(p, 1);
  for (int k = 1; k <= K; ++k) {
    CycInt pk = sums[k - 1];
    if (sign < 0) pk = -pk;
    ps[k] = CycRat(pk);
  }
  for (int k = 1; k <= K; ++k) {
    CycRat acc(p, 0);
    for (int i = 1; i <= k; ++i) {
      CycRat t = e[k - i] * ps[i];
      if (i % 2 == 0) acc = acc - t;
      else acc = acc + t;
    }
    e[k] = acc.div_int(k);
  }
  std::vector<CycInt> A(K + 1, CycInt(p));
  A[0] = CycInt(p, 1);
  for (int k = 1; k <= K; ++k) {
    if (!e[k].is_integral())
      throw std::runtime_error("power sums are inconsistent: non-integral coefficient");
    A[k] = (k % 2 == 0) ? e[k].num : -e[k].num;
  }
  return A;
}

// inverse direction: S_k for k = 1..upto from A (taking A_j = 0 past the end)
inline std::vector<CycInt> power_sums_from_lpoly(const std::vector<CycInt>& A,
                                                 int nvars, int upto) {
  if (A.empty() || !(A[0] == CycInt(A[0].p, 1)))
    throw std::invalid_argument("A_0 must be 1");
  int p = A[0].p;
  int sign = (nvars % 2 == 0) ? 1 : -1;
  std::vector<CycInt> ps(upto + 1, CycInt(p)), S(upto);
  for (int k = 1; k <= upto; ++k) {
    CycInt acc(p);
    if (k < (int)A.size()) acc = Int(k) * A[k];
    for (int i = 1; i < k && i < (int)A.size(); ++i) acc += A[i] * ps[k - i];
    ps[k] = -acc;
    S[k - 1] = (sign < 0) ? -ps[k] : ps[k];
  }
  return S;
}

// ---------------------------------------------------------------------------

// the degree-2^{n+1} L-polynomial attached to one family member over F_{p^a}
struct LSeries {
  int p = 0, a = 1, n = 0, d = 0;
  std::vector<std::optional<CycInt>> A;  // index 0..d

  LSeries(int p_, int a_, int n_)
      : p(p_), a(a_), n(n_), d(1 << (n_ + 1)), A(d + 1) {
    A[0] = CycInt(p, 1);
  }

  Int q() const {
    Int r = 1;
    for (int i = 0; i < a; ++i) r *= p;
    return r;
  }
  bool complete() const {
    for (auto& c : A)
      if (!c) return false;
    return true;
  }
};

// fill A_1..A_K from the sums S_1..S_K, K <= d
inline LSeries lseries_from_sums(int p, int a, int n, const std::vector<CycInt>& sums) {
  LSeries L(p, a, n);
  if ((int)sums.size() > L.d) throw std::invalid_argument("more sums than the degree");
  auto A = lpoly_from_sums(p, n + 1, sums);
  for (int k = 1; k < (int)A.size(); ++k) L.A[k] = A[k];
  return L;
}

// conj(A_j) A_d = q^{(n+1) j} A_{d-j} for all pairs where everything is known
inline bool functional_equation_ok(const LSeries& L) {
  if (!L.A[L.d]) return false;
  Int q = L.q();
  for (int j = 0; j <= L.d; ++j) {
    if (!L.A[j] || !L.A[L.d - j]) continue;
    Int qp = 1;
    for (int i = 0; i < (L.n + 1) * j; ++i) qp *= q;
    if (!(L.A[j]->conj() * *L.A[L.d] == qp * *L.A[L.d - j])) return false;
  }
  return true;
}

// Derive the upper half from the lower half: A_d from the middle coefficient,
// then A_{d-j} for every known A_j. Needs A_{d/2} known and nonzero; returns
// false otherwise. Exactness of the divisions is a consistency check.
inline bool complete_by_functional_equation(LSeries& L) {
  int h = L.d / 2;
  if (!L.A[h] || L.A[h]->is_zero()) return false;
  Int q = L.q();
  if (!L.A[L.d]) {
    Int qp = 1;
    for (int i = 0; i < (L.n + 1) * h; ++i) qp *= q;
    L.A[L.d] = cyc_divide_exact(qp * *L.A[h], L.A[h]->conj());
  }
  for (int j = 0; j < h; ++j) {
    if (!L.A[j] || L.A[L.d - j]) continue;
    Int qp = 1;
    for (int i = 0; i < (L.n + 1) * j; ++i) qp *= q;
    L.A[L.d - j] = div_exact_int(L.A[j]->conj() * *L.A[L.d], qp);
  }
  return true;
}

enum class OrdSource { Direct, Symmetry };

struct OrdPoint {
  int index = 0;
  std::optional<Rat> ord;  // nullopt: coefficient is zero
  OrdSource source = OrdSource::Direct;
};

// q-valuations of the known coefficients
inline std::vector<OrdPoint> valuation_profile(const LSeries& L) {
  std::vector<OrdPoint> prof;
  for (int j = 0; j <= L.d; ++j)
    if (L.A[j]) prof.push_back({j, ord_q(*L.A[j], L.a), OrdSource::Direct});
  return prof;
}

// ord A_{d-j} = ord A_j + (n+1)(d/2 - j), filled for indices without a
// direct value
inline void symmetry_complete(std::vector<OrdPoint>& prof, const LSeries& L) {
  std::vector<bool> have(L.d + 1, false);
  for (auto& e : prof) have[e.index] = true;
  std::vector<OrdPoint> extra;
  for (auto& e : prof) {
    int j = e.index, jj = L.d - j;
    if (have[jj]) continue;
    OrdPoint s;
    s.index = jj;
    s.source = OrdSource::Symmetry;
    if (e.ord) s.ord = *e.ord + Rat((long long)(L.n + 1) * (L.d / 2 - j));
    extra.push_back(s);
    have[jj] = true;
  }
  prof.insert(prof.end(), extra.begin(), extra.end());
  std::sort(prof.begin(), prof.end(),
            [](const OrdPoint& x, const OrdPoint& y) { return x.index < y.index; });
}

struct NpHpVerdict {
  bool equal = false;
  long long failing_index = -1;  // hodge vertex abscissa of the first mismatch
};

// The newton polygon lies on or above the hodge polygon and the two share
// both endpoints, so they coincide exactly when the valuation at every
// interior hodge vertex abscissa equals the hodge ordinate there. This only
// needs the profile at those abscissas, not the full coefficient list.
inline NpHpVerdict np_eq_hp(const std::vector<OrdPoint>& prof, const Polygon& hodge) {
  for (auto& [x, y] : hodge.break_points()) {
    const OrdPoint* at = nullptr;
    for (auto& e : prof)
      if (e.index == x) {
        at = &e;
        break;
      }
    if (!at) throw std::runtime_error("valuation profile misses a hodge vertex");
    if (!at->ord || *at->ord != y) return {false, x};
  }
  return {true, -1};
}

inline Polygon newton_polygon(const std::vector<OrdPoint>& prof, int d) {
  std::vector<std::pair<long long, Rat>> pts;
  bool have0 = false, haved = false;
  for (auto& e : prof) {
    if (!e.ord) continue;
    pts.push_back({e.index, *e.ord});
    have0 |= (e.index == 0);
    haved |= (e.index == d);
  }
  if (!have0 || !haved)
    throw std::runtime_error("newton polygon needs both endpoint valuations");
  return Polygon::lower_hull(std::move(pts));
}

// inverse roots alpha_i of P(T) = prod (1 - alpha_i T), numerically
inline std::vector<std::complex<double>> lpoly_inverse_roots(
    const std::vector<CycInt>& A, int emb = 1) {
  int d = (int)A.size() - 1;
  std::vector<std::complex<double>> c(d + 1);
  for (int j = 0; j <= d; ++j) c[j] = A[j].embed(emb);
  while (d > 0 && std::abs(c[d]) == 0.0) --d;
  if (d == 0) return {};
  for (int j = 0; j < d; ++j) c[j] /= c[d];
  c[d] = 1.0;
  std::vector<std::complex<double>> z(d);
  double radius = 1.0;
  for (int j = 0; j < d; ++j) radius = std::max(radius, std::abs(c[j]));
  radius = 1.0 + radius;
  for (int i = 0; i < d; ++i)
    z[i] = std::polar(radius * (0.5 + 0.5 * i / d), 2.0 * 3.14159265358979323846 * i / d + 0.7);
  for (int it = 0; it < 600; ++it) {
    double moved = 0;
    for (int i = 0; i < d; ++i) {
      std::complex<double> val = c[d];
      for (int j = d - 1; j >= 0; --j) val = val * z[i] + c[j];
      std::complex<double> den = 1.0;
      for (int j = 0; j < d; ++j)
        if (j != i) den *= (z[i] - z[j]);
      std::complex<double> step = val / den;
      z[i] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14) break;
  }
  std::vector<std::complex<double>> alphas(d);
  for (int i = 0; i < d; ++i) alphas[i] = 1.0 / z[i];
  return alphas;
}

}  // namespace dwork
