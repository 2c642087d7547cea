#pragma once

// Exact arithmetic in Z[zeta_p] on the power basis 1, zeta, ..., zeta^{p-2},
// with the (1-zeta)-adic valuation. Coordinates are arbitrary-precision:
// character sums over large extension fields overflow any fixed width.

#include <complex>
#include <optional>

#include "dwork/base.hpp"

namespace dwork {

struct CycInt {
  int p = 3;
  std::vector<Int> c;  // length p-1

  CycInt() : c(2) {}
  explicit CycInt(int p_) : p(p_), c(p_ - 1) {
    if (p < 2 || !is_prime_u64((u64)p)) throw std::invalid_argument("p must be prime");
  }
  CycInt(int p_, long long v) : CycInt(p_) { c[0] = v; }
  CycInt(int p_, const Int& v) : CycInt(p_) { c[0] = v; }

  bool is_zero() const {
    for (const Int& x : c)
      if (x != 0) return false;
    return true;
  }
  friend bool operator==(const CycInt& a, const CycInt& b) { return a.p == b.p && a.c == b.c; }
  friend bool operator!=(const CycInt& a, const CycInt& b) { return !(a == b); }

  CycInt& operator+=(const CycInt& o) {
    check(o);
    for (int i = 0; i < p - 1; ++i) c[i] += o.c[i];
    return *this;
  }
  CycInt& operator-=(const CycInt& o) {
    check(o);
    for (int i = 0; i < p - 1; ++i) c[i] -= o.c[i];
    return *this;
  }
  friend CycInt operator+(CycInt a, const CycInt& b) { return a += b; }
  friend CycInt operator-(CycInt a, const CycInt& b) { return a -= b; }
  friend CycInt operator-(const CycInt& a) {
    CycInt r(a.p);
    for (int i = 0; i < a.p - 1; ++i) r.c[i] = -a.c[i];
    return r;
  }
  friend CycInt operator*(const CycInt& a, const CycInt& b) {
    a.check(b);
    int p = a.p;
    // convolve in Z[x]/(x^p - 1), then fold the top coordinate
    std::vector<Int> w(p);
    for (int i = 0; i < p - 1; ++i) {
      if (a.c[i] == 0) continue;
      for (int j = 0; j < p - 1; ++j) {
        if (b.c[j] == 0) continue;
        w[(i + j) % p] += a.c[i] * b.c[j];
      }
    }
    return from_wrapped(p, w);
  }
  CycInt& operator*=(const CycInt& o) { return *this = *this * o; }

  friend CycInt operator*(const Int& s, const CycInt& a) {
    CycInt r(a.p);
    for (int i = 0; i < a.p - 1; ++i) r.c[i] = s * a.c[i];
    return r;
  }

  // zeta^e * x: pure rotation
  CycInt mul_zeta_pow(long long e) const {
    int m = (int)(((e % p) + p) % p);
    std::vector<Int> w(p);
    for (int i = 0; i < p - 1; ++i) w[(i + m) % p] = c[i];
    return from_wrapped(p, w);
  }

  // zeta -> zeta^j, gcd(j, p) = 1
  CycInt galois(long long j) const {
    long long m = ((j % p) + p) % p;
    if (m == 0) throw std::invalid_argument("galois exponent divisible by p");
    std::vector<Int> w(p);
    for (int i = 0; i < p - 1; ++i) w[(size_t)(i * m % p)] += c[i];
    return from_wrapped(p, w);
  }

  // zeta -> zeta^{-1}
  CycInt conj() const { return galois(p - 1); }

  // coordinates of x on the full 1..zeta^{p-1} list, reduced: helper
  static CycInt from_wrapped(int p, const std::vector<Int>& w) {
    CycInt r(p);
    for (int i = 0; i < p - 1; ++i) r.c[i] = w[i] - w[p - 1];
    return r;
  }

  std::complex<double> embed(int j = 1) const {
    std::complex<double> s = 0;
    for (int i = 0; i < p - 1; ++i) {
      double ang = 2.0 * 3.14159265358979323846 * ((double)((long long)j * i % p)) / p;
      s += (double)c[i] * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return s;
  }

 private:
  void check(const CycInt& o) const {
    if (p != o.p) throw std::invalid_argument("mixed cyclotomic orders");
  }
};

inline CycInt zeta_pow(int p, long long e) { return CycInt(p, 1).mul_zeta_pow(e); }

// (1 - zeta)-divisibility: sum of coordinates is 0 mod p exactly when
// (1-zeta) | x, because Z[zeta]/(1-zeta) = F_p via zeta -> 1.
inline bool lambda_divisible(const CycInt& x) {
  Int s = 0;
  for (const Int& v : x.c) s += v;
  return s % x.p == 0;
}

// x / (1-zeta), exact. Multiply by prod_{i=2}^{p-1}(1 - zeta^i) and divide by
// p, since the full product over i = 1..p-1 is p.
inline CycInt lambda_div(const CycInt& x) {
  int p = x.p;
  CycInt acc = x;
  for (int i = 2; i <= p - 1; ++i) {
    CycInt f(p, 1);
    f -= zeta_pow(p, i);
    acc *= f;
  }
  CycInt r(p);
  for (int i = 0; i < p - 1; ++i) {
    Int q = acc.c[i] / p;
    if (q * p != acc.c[i]) throw std::logic_error("inexact (1-zeta) division");
    r.c[i] = q;
  }
  return r;
}

// (1-zeta)-adic valuation; nullopt encodes +infinity (x = 0).
inline std::optional<long long> lambda_val(CycInt x) {
  if (x.is_zero()) return std::nullopt;
  long long v = 0;
  while (lambda_divisible(x)) {
    x = lambda_div(x);
    ++v;
  }
  return v;
}

struct CycRat {
  CycInt num;
  Int den = 1;  // > 0

  CycRat() = default;
  explicit CycRat(const CycInt& n, Int d = 1) : num(n), den(std::move(d)) { reduce(); }
  CycRat(int p, long long v) : num(p, v) {}

  void reduce() {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    Int g = den;
    for (const Int& v : num.c) g = boost::multiprecision::gcd(g, v);
    if (g > 1) {
      for (Int& v : num.c) v /= g;
      den /= g;
    }
  }
  bool is_integral() const { return den == 1; }
  bool is_zero() const { return num.is_zero(); }

  friend CycRat operator+(const CycRat& a, const CycRat& b) {
    CycRat r;
    r.num = b.den * a.num + a.den * b.num;
    r.den = a.den * b.den;
    r.reduce();
    return r;
  }
  friend CycRat operator-(const CycRat& a, const CycRat& b) {
    CycRat r;
    r.num = b.den * a.num - a.den * b.num;
    r.den = a.den * b.den;
    r.reduce();
    return r;
  }
  friend CycRat operator*(const CycRat& a, const CycRat& b) {
    CycRat r;
    r.num = a.num * b.num;
    r.den = a.den * b.den;
    r.reduce();
    return r;
  }
  CycRat div_int(const Int& k) const {
    CycRat r;
    r.num = num;
    r.den = den * k;
    r.reduce();
    return r;
  }
  friend bool operator==(const CycRat& a, const CycRat& b) {
    return a.num.p == b.num.p && (a - b).is_zero();
  }
};

}  // namespace dwork
