#pragma once

#include <vector>

#include "superloop/supermatrix.hpp"

namespace superloop {

/// Exact Gaussian expectations on H(p|q) with weight
/// exp(−str(IM)²/2ħ + str(IM Y)/ħ), Y diagonal.
///
/// The integration variable is N = IM. Its entries are expressed through
/// independent real scalars (boson variables 0..internal_bosons()-1) and
/// fermion pairs (generators 0..internal_fermions()-1):
///   N_ii = x_i (i < p),  N_ii = i·x_i (i >= p),
///   N_ij = I_i(u + iv), N_ji = I_j(u − iv) for i < j in the same block,
///   N_ij = b, N_ji = i·c for i < p <= j.
/// The Y term only shifts the means of the x_i, so expectations are exact in Y.
/// Higher boson variables and generators are free symbols that survive.
class GaussianOracle {
public:
  static constexpr int kMaxSize = 4;

  /// With `allow_negative_hbar` a negative ħ is used formally: every
  /// moment is a polynomial in ħ, so the variances may carry either sign.
  GaussianOracle(Grading g, Rational hbar, std::vector<ComplexRational> y = {},
                 bool allow_negative_hbar = false);

  const Grading& grading() const { return grading_; }
  const Rational& hbar() const { return hbar_; }
  int internal_bosons() const { return bosons_; }
  int internal_fermions() const { return fermions_; }

  /// N as a matrix of polynomials in the internal variables.
  const PolyMatrix& matrix() const { return n_; }
  const SuperPoly& entry(int i, int j) const { return n_(i, j); }

  /// Integrates out the internal variables.
  SuperPoly expectation(const SuperPoly& p) const;
  /// Expectation of a polynomial with no free symbols.
  ComplexRational expectation_value(const SuperPoly& p) const;

  /// ∂/∂M_ij of a polynomial in the internal variables, M = I^{-1} N.
  /// Even off-diagonal entries use Wirtinger derivatives in (u, v); odd
  /// entries use the left Grassmann derivative.
  SuperPoly derivative_m(const SuperPoly& f, int i, int j) const;

  /// str N^k.
  SuperPoly str_power(int k) const;
  /// ⟨Π_k (1/ħ) str N^{n_k}⟩.
  ComplexRational trace_moment(const std::vector<int>& valencies) const;

private:
  ComplexRational boson_moment(int var, int exponent) const;

  Grading grading_;
  Rational hbar_;
  std::vector<ComplexRational> y_;
  int bosons_ = 0;
  int fermions_ = 0;
  std::vector<ComplexRational> mean_;
  std::vector<Rational> variance_;
  PolyMatrix n_;
  std::vector<int> var_a_;  // per entry (i*size+j): boson or generator index
  std::vector<int> var_b_;
};

/// Normalization z_{p,q}(ħ) = 2^{(p+q)/2} i^{pq} π^{(p²+q²)/2} ħ^{(p−q)²/2},
/// kept symbolic: exponents of 2, i, π and ħ.
struct GaussianNormalization {
  Rational two_exponent;
  int i_exponent;
  Rational pi_exponent;
  Rational hbar_exponent;
};
GaussianNormalization gaussian_normalization(Grading g);

}  // namespace superloop
