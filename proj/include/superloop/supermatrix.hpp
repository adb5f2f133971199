#pragma once

#include <vector>

#include "superloop/errors.hpp"
#include "superloop/grassmann.hpp"
#include "superloop/superpoly.hpp"

namespace superloop {

/// (p|q) grading. Indices are 0-based: i < p is even, i >= p is odd.
struct Grading {
  int p = 0;
  int q = 0;

  int size() const { return p + q; }
  int epsilon(int i) const { return i < p ? 0 : 1; }
  int sigma(int i) const { return i < p ? 1 : -1; }
  int supertrace_of_identity() const { return p - q; }
  friend bool operator==(const Grading&, const Grading&) = default;
};

/// Square graded matrix over a supercommutative coefficient ring E.
/// `zero` fixes the ring context (e.g. the Grassmann generator count).
template <class E>
class BasicSuperMatrix {
public:
  BasicSuperMatrix() = default;
  BasicSuperMatrix(Grading g, E zero)
      : grading_(g), zero_(zero), entries_(static_cast<std::size_t>(g.size() * g.size()), zero) {
    if (g.p < 0 || g.q < 0) throw InvalidArgument("negative grading");
  }

  static BasicSuperMatrix identity(Grading g, E zero, E one) {
    BasicSuperMatrix m(g, zero);
    for (int i = 0; i < g.size(); ++i) m(i, i) = one;
    return m;
  }

  const Grading& grading() const { return grading_; }
  int size() const { return grading_.size(); }
  const E& zero() const { return zero_; }

  E& operator()(int i, int j) { return entries_[index(i, j)]; }
  const E& operator()(int i, int j) const { return entries_[index(i, j)]; }

  BasicSuperMatrix& operator+=(const BasicSuperMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] += o.entries_[k];
    return *this;
  }
  BasicSuperMatrix& operator-=(const BasicSuperMatrix& o) {
    check_same(o);
    for (std::size_t k = 0; k < entries_.size(); ++k) entries_[k] -= o.entries_[k];
    return *this;
  }
  BasicSuperMatrix& operator*=(const ComplexRational& c) {
    for (auto& e : entries_) e *= c;
    return *this;
  }
  friend BasicSuperMatrix operator+(BasicSuperMatrix a, const BasicSuperMatrix& b) { return a += b; }
  friend BasicSuperMatrix operator-(BasicSuperMatrix a, const BasicSuperMatrix& b) { return a -= b; }
  friend BasicSuperMatrix operator*(BasicSuperMatrix a, const ComplexRational& c) { return a *= c; }

  friend BasicSuperMatrix operator*(const BasicSuperMatrix& a, const BasicSuperMatrix& b) {
    a.check_same(b);
    BasicSuperMatrix out(a.grading_, a.zero_);
    const int n = a.size();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        if (is_zero_entry(a(i, k))) continue;
        for (int j = 0; j < n; ++j) out(i, j) += a(i, k) * b(k, j);
      }
    return out;
  }

  /// Left multiplication of every entry by a ring element.
  friend BasicSuperMatrix operator*(const E& s, const BasicSuperMatrix& m) {
    BasicSuperMatrix out = m;
    for (auto& e : out.entries_) e = s * e;
    return out;
  }

  friend bool operator==(const BasicSuperMatrix& a, const BasicSuperMatrix& b) {
    return a.grading_ == b.grading_ && a.entries_ == b.entries_;
  }

  /// Entry (i,j) has terms of Grassmann parity ε(i)+ε(j) only.
  bool has_block_parity() const {
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        if (!(*this)(i, j).has_parity(grading_.epsilon(i) + grading_.epsilon(j))) return false;
    return true;
  }

  E supertrace() const {
    E out = zero_;
    for (int i = 0; i < size(); ++i) {
      if (grading_.sigma(i) > 0) out += (*this)(i, i);
      else out -= (*this)(i, i);
    }
    return out;
  }

  void check_same(const BasicSuperMatrix& o) const {
    if (!(grading_ == o.grading_)) throw SizeMismatch("supermatrix gradings differ");
  }

private:
  static bool is_zero_entry(const E& e) { return e.is_zero(); }
  std::size_t index(int i, int j) const {
    if (i < 0 || j < 0 || i >= size() || j >= size()) throw IndexOutOfRange("supermatrix index");
    return static_cast<std::size_t>(i * size() + j);
  }

  Grading grading_;
  E zero_{};
  std::vector<E> entries_;
};

using SuperMatrix = BasicSuperMatrix<GrassmannElement>;
using PolyMatrix = BasicSuperMatrix<SuperPoly>;

template <class E>
E str(const BasicSuperMatrix<E>& m) {
  return m.supertrace();
}

template <class E>
BasicSuperMatrix<E> matrix_power(const BasicSuperMatrix<E>& m, int k, const E& one) {
  auto out = BasicSuperMatrix<E>::identity(m.grading(), m.zero(), one);
  for (int i = 0; i < k; ++i) out = out * m;
  return out;
}

SuperMatrix super_identity(Grading g, int generator_count);
/// Diagonal matrix with the given numeric entries.
SuperMatrix super_diagonal(Grading g, int generator_count, const std::vector<ComplexRational>& d);
/// I = diag(1,…,1, i,…,i).
SuperMatrix convergence_matrix(Grading g, int generator_count);

/// det(A − B D^{-1} C) / det D.
GrassmannElement sdet(const SuperMatrix& m);
/// (X†)_{ij} = (X_{ji})*.
SuperMatrix adjoint(const SuperMatrix& m, const ConjugationPairing& pairing);
/// Terminating exponential of a matrix whose entries all have zero body.
SuperMatrix exp_nilpotent(const SuperMatrix& m);
/// Exact inverse of a square matrix of even elements with invertible body.
std::vector<GrassmannElement> even_block_inverse(const std::vector<GrassmannElement>& block, int n);
GrassmannElement even_block_det(const std::vector<GrassmannElement>& block, int n);

}  // namespace superloop
