#include "superloop/supermatrix.hpp"

#include <utility>

namespace superloop {

namespace {

// Gauss–Jordan over commuting (even) Grassmann elements. Pivots are chosen
// with nonzero body, which exists whenever the body matrix is invertible.
struct Elimination {
  GrassmannElement det;
  std::vector<GrassmannElement> inverse;
};

Elimination gauss_jordan(std::vector<GrassmannElement> a, int n, bool want_inverse) {
  if (static_cast<int>(a.size()) != n * n) throw SizeMismatch("block size");
  const int gens = n ? a[0].generator_count() : 0;
  std::vector<GrassmannElement> inv;
  if (want_inverse) {
    inv.assign(static_cast<std::size_t>(n * n), GrassmannElement(gens));
    for (int i = 0; i < n; ++i) inv[i * n + i] = GrassmannElement(gens, 1);
  }
  GrassmannElement det(gens, 1);
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (!a[r * n + col].body().is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw SingularBlock("block body is singular");
    if (pivot != col) {
      for (int k = 0; k < n; ++k) {
        std::swap(a[pivot * n + k], a[col * n + k]);
        if (want_inverse) std::swap(inv[pivot * n + k], inv[col * n + k]);
      }
      det = -det;
    }
    const GrassmannElement pv = a[col * n + col];
    det = det * pv;
    const GrassmannElement pinv = ga_inverse(pv);
    for (int k = 0; k < n; ++k) {
      a[col * n + k] = pinv * a[col * n + k];
      if (want_inverse) inv[col * n + k] = pinv * inv[col * n + k];
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r * n + col].is_zero()) continue;
      const GrassmannElement f = a[r * n + col];
      for (int k = 0; k < n; ++k) {
        a[r * n + k] -= f * a[col * n + k];
        if (want_inverse) inv[r * n + k] -= f * inv[col * n + k];
      }
    }
  }
  return {det, std::move(inv)};
}

}  // namespace

SuperMatrix super_identity(Grading g, int generator_count) {
  return SuperMatrix::identity(g, GrassmannElement(generator_count),
                               GrassmannElement(generator_count, 1));
}

SuperMatrix super_diagonal(Grading g, int generator_count, const std::vector<ComplexRational>& d) {
  if (static_cast<int>(d.size()) != g.size()) throw SizeMismatch("diagonal length");
  SuperMatrix m(g, GrassmannElement(generator_count));
  for (int i = 0; i < g.size(); ++i) m(i, i) = GrassmannElement(generator_count, d[i]);
  return m;
}

SuperMatrix convergence_matrix(Grading g, int generator_count) {
  std::vector<ComplexRational> d;
  for (int i = 0; i < g.size(); ++i) d.push_back(g.sigma(i) > 0 ? ComplexRational(1) : ComplexRational::i());
  return super_diagonal(g, generator_count, d);
}

GrassmannElement even_block_det(const std::vector<GrassmannElement>& block, int n) {
  if (n == 0) return GrassmannElement(0, 1);
  return gauss_jordan(block, n, false).det;
}

std::vector<GrassmannElement> even_block_inverse(const std::vector<GrassmannElement>& block, int n) {
  return gauss_jordan(block, n, true).inverse;
}

GrassmannElement sdet(const SuperMatrix& m) {
  const int p = m.grading().p, q = m.grading().q;
  const int gens = m.zero().generator_count();
  std::vector<GrassmannElement> a, d;
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) a.push_back(m(i, j));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) d.push_back(m(p + i, p + j));

  if (q == 0) return p == 0 ? GrassmannElement(gens, 1) : even_block_det(a, p);
  const Elimination ed = gauss_jordan(d, q, true);
  if (p == 0) return ga_inverse(ed.det);

  // Schur complement A − B D^{-1} C
  std::vector<GrassmannElement> dinv_c(static_cast<std::size_t>(q * p), GrassmannElement(gens));
  for (int k = 0; k < q; ++k)
    for (int j = 0; j < p; ++j)
      for (int l = 0; l < q; ++l) dinv_c[k * p + j] += ed.inverse[k * q + l] * m(p + l, j);
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j)
      for (int k = 0; k < q; ++k) a[i * p + j] -= m(i, p + k) * dinv_c[k * p + j];

  return even_block_det(a, p) * ga_inverse(ed.det);
}

SuperMatrix adjoint(const SuperMatrix& m, const ConjugationPairing& pairing) {
  SuperMatrix out(m.grading(), m.zero());
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) out(i, j) = ga_conjugate(m(j, i), pairing);
  return out;
}

SuperMatrix exp_nilpotent(const SuperMatrix& m) {
  const int gens = m.zero().generator_count();
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j)
      if (!m(i, j).body().is_zero()) throw InvalidArgument("exp_nilpotent needs zero-body entries");
  SuperMatrix result = super_identity(m.grading(), gens);
  SuperMatrix power = result;
  for (int k = 1; k <= gens + 1; ++k) {
    power = power * m;
    power *= ComplexRational(Rational(1, k));
    bool all_zero = true;
    for (int i = 0; i < m.size() && all_zero; ++i)
      for (int j = 0; j < m.size(); ++j)
        if (!power(i, j).is_zero()) {
          all_zero = false;
          break;
        }
    if (all_zero) break;
    result += power;
  }
  return result;
}

}  // namespace superloop
