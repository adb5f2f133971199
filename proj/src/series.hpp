#pragma once

#include <algorithm>
#include <complex>
#include <limits>
#include <vector>

#include <boost/multiprecision/complex128.hpp>

#include "superloop/errors.hpp"

namespace superloop::detail {

using Real = boost::multiprecision::float128;
using Number = boost::multiprecision::complex128;

inline Real magnitude(const Number& z) { return boost::multiprecision::abs(z); }

/// Truncated Laurent series in a local coordinate ζ: coefficients for
/// exponents lo..lo+c.size()−1, zero above that up to `hi`, unknown beyond.
struct Series {
  int lo = 0;
  int hi = std::numeric_limits<int>::max() / 4;
  std::vector<Number> c;

  Number at(int e) const {
    if (e > hi) throw ConsistencyError("series coefficient beyond known precision");
    const int i = e - lo;
    return i >= 0 && i < static_cast<int>(c.size()) ? c[i] : Number(0.0);
  }
  bool empty() const { return c.empty(); }
};

inline int cap_hi(int h, int cap) { return std::min(h, cap); }

inline Series trim(Series s) {
  const int top = s.hi - s.lo + 1;
  if (top < static_cast<int>(s.c.size())) s.c.resize(std::max(top, 0));
  return s;
}

inline Series monomial(Number coef, int e, int hi) {
  Series s;
  s.lo = e;
  s.hi = hi;
  s.c = {coef};
  return trim(s);
}

inline Series add(const Series& a, const Series& b, Number scale = 1.0) {
  if (a.empty()) {
    Series s = b;
    for (auto& v : s.c) v *= scale;
    s.hi = std::min(a.hi, b.hi);
    return trim(s);
  }
  if (b.empty()) {
    Series s = a;
    s.hi = std::min(a.hi, b.hi);
    return trim(s);
  }
  Series s;
  s.lo = std::min(a.lo, b.lo);
  s.hi = std::min(a.hi, b.hi);
  const int top = std::min<int>(s.hi, std::max<int>(a.lo + a.c.size(), b.lo + b.c.size()) - 1);
  s.c.assign(std::max(top - s.lo + 1, 0), Number(0.0));
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (a.lo + static_cast<int>(i) <= top) s.c[a.lo - s.lo + i] += a.c[i];
  for (std::size_t i = 0; i < b.c.size(); ++i)
    if (b.lo + static_cast<int>(i) <= top) s.c[b.lo - s.lo + i] += scale * b.c[i];
  return s;
}

/// In-place a += scale·b where b is known at least as far as a.
inline void accumulate(Series& a, const Series& b, Number scale) {
  if (b.empty() || scale == Number(0)) {
    a.hi = std::min(a.hi, b.hi);
    a = trim(a);
    return;
  }
  a = add(a, b, scale);
}

inline Series mul(const Series& a, const Series& b, int cap) {
  Series s;
  if (a.empty() || b.empty()) {
    s.lo = 0;
    s.hi = cap;
    return s;
  }
  s.lo = a.lo + b.lo;
  s.hi = cap_hi(std::min(a.lo + b.hi, b.lo + a.hi), cap);
  const int na = static_cast<int>(a.c.size()), nb = static_cast<int>(b.c.size());
  const int len = std::min(s.hi - s.lo + 1, na + nb - 1);
  if (len <= 0) return s;
  s.c.assign(len, Number(0.0));
  for (int i = 0; i < na && i < len; ++i) {
    const Number ai = a.c[i];
    if (ai == Number(0)) continue;
    const int jmax = std::min(nb, len - i);
    for (int j = 0; j < jmax; ++j) s.c[i + j] += ai * b.c[j];
  }
  return s;
}

/// Drops the leading coefficients below exponent e, which must be negligible.
inline Series drop_below(Series s, int e, double tol_scale) {
  while (s.lo < e && !s.c.empty()) {
    if (magnitude(s.c.front()) > tol_scale) throw ConsistencyError("expected cancellation did not occur");
    s.c.erase(s.c.begin());
    ++s.lo;
  }
  if (s.c.empty()) s.lo = e;
  return s;
}

/// 1/a for a with nonzero leading coefficient; relative precision is kept.
inline Series inverse(const Series& a, int cap) {
  if (a.empty() || a.c[0] == Number(0)) throw ConsistencyError("series inverse of a vanishing leading term");
  Series s;
  s.lo = -a.lo;
  s.hi = cap_hi(s.lo + (a.hi - a.lo), cap);
  const int len = s.hi - s.lo + 1;
  if (len <= 0) return s;
  s.c.assign(len, Number(0.0));
  const Number inv0 = Number(1) / a.c[0];
  s.c[0] = inv0;
  for (int k = 1; k < len; ++k) {
    Number acc = 0;
    for (int j = 1; j <= k && j < static_cast<int>(a.c.size()); ++j) acc += a.c[j] * s.c[k - j];
    s.c[k] = -acc * inv0;
  }
  return s;
}

inline Series power(const Series& a, int k, int cap) {
  if (k == 0) return monomial(1.0, 0, cap);
  if (k < 0) return power(inverse(a, cap), -k, cap);
  Series r = a;
  for (int i = 1; i < k; ++i) r = mul(r, a, cap);
  return r;
}

inline Series derivative(const Series& a) {
  Series s;
  s.lo = a.lo - 1;
  s.hi = a.hi - 1;
  for (std::size_t i = 0; i < a.c.size(); ++i) s.c.push_back(a.c[i] * Real(a.lo + static_cast<int>(i)));
  if (a.lo == 0 && !s.c.empty()) {
    s.c.erase(s.c.begin());
    s.lo = 0;
  }
  return s;
}

/// Primitive with zero constant term; requires no ζ^{-1} term.
inline Series integral(const Series& a) {
  if (a.lo <= -1 && magnitude(a.at(-1)) > 0) throw ConsistencyError("series primitive with a logarithm");
  Series s;
  s.lo = a.lo + 1;
  s.hi = a.hi + 1;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    const int e = a.lo + static_cast<int>(i) + 1;
    s.c.push_back(e == 0 ? Number(0.0) : a.c[i] / Real(e));
  }
  return s;
}

/// Coefficient of ζ^{-1} in a·b.
inline Number residue_of_product(const Series& a, const Series& b) {
  if (a.empty() || b.empty()) return 0.0;
  Number r = 0;
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    const int e = a.lo + static_cast<int>(i);
    const int f = -1 - e;
    if (f < b.lo) break;
    if (f > b.hi || e > a.hi) throw ConsistencyError("series precision exhausted in a residue");
    r += a.c[i] * b.at(f);
  }
  // coefficients of a above its stored length are zero, but b's low terms still need a's known range
  if (a.hi < -1 - b.lo) throw ConsistencyError("series precision exhausted in a residue");
  return r;
}

}  // namespace superloop::detail
