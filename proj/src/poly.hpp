#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace superloop::detail {

using Complex = std::complex<double>;
using Poly = std::vector<Complex>;  // ascending coefficients

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly out(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

inline Poly poly_add(Poly a, const Poly& b, Complex scale = 1.0) {
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
  return a;
}

inline Complex poly_eval(const Poly& p, Complex z) {
  Complex v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * z + *it;
  return v;
}

inline Poly poly_derivative(const Poly& p) {
  Poly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i] * double(i));
  return out;
}

/// Π (z − r) over the given roots, each `power` times.
inline Poly from_roots(const std::vector<Complex>& roots, int power = 1, int skip = -1) {
  Poly out{1.0};
  for (std::size_t k = 0; k < roots.size(); ++k) {
    if (static_cast<int>(k) == skip) continue;
    for (int e = 0; e < power; ++e) out = poly_mul(out, {-roots[k], 1.0});
  }
  return out;
}

inline std::vector<Complex> poly_roots(Poly p) {
  while (!p.empty() && std::abs(p.back()) == 0.0) p.pop_back();
  const int n = static_cast<int>(p.size()) - 1;
  if (n < 1) return {};
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) companion(i, n - 1) = -p[i] / p[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + n);
  const Poly dp = poly_derivative(p);
  for (Complex& r : roots) {
    for (int it = 0; it < 8; ++it) {
      const Complex d = poly_eval(dp, r);
      if (std::abs(d) == 0.0) break;
      const Complex step = poly_eval(p, r) / d;
      r -= step;
      if (std::abs(step) <= 1e-16 * (1 + std::abs(r))) break;
    }
  }
  return roots;
}

}  // namespace superloop::detail
