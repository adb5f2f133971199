#pragma once

#include <vector>

#include "superloop/gaussian.hpp"
#include "superloop/supermatrix.hpp"

namespace superloop {

/// Generic even supermatrix: even entries are independent commuting
/// variables, odd entries are Grassmann generators starting at `first_generator`.
struct SymbolicMatrix {
  PolyMatrix m;
  std::vector<int> var;  // per entry i*size+j: boson var (even) or generator (odd)
  SymbolicMatrix(Grading g, int first_generator);
  /// ∂/∂M_ij (left derivative on odd entries).
  SuperPoly derivative(const SuperPoly& f, int i, int j) const;
};

/// K(M) = Σ_ij σ(i)σ(j) ∂_{M_ij} g(M)_ij.
SuperPoly loop_operator(const PolyMatrix& g, const SymbolicMatrix& m);

/// Coefficients r_k of x^{−k−1}, k = 0..order, of K(g) minus the closed form, for
///   split: g = A (x − BM)^{-1} C,  K = str(A (x−BM)^{-1} B) str((x−BM)^{-1} C)
///   merge: g = A str((x − BM)^{-1} C),  K = str(A (x−BM)^{-1} C (x−BM)^{-1} B)
/// A, B, C have constant entries; their generators must lie below M's.
std::vector<SuperPoly> split_rule_residual(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                                           const SymbolicMatrix& m, int order);
std::vector<SuperPoly> merge_rule_residual(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                                           const SymbolicMatrix& m, int order);

struct SdReport {
  // index n holds the coefficient of x^{−n}
  std::vector<ComplexRational> lhs;        // ⟨K(g)⟩
  std::vector<ComplexRational> quadratic;  // (1/ħ) ⟨str(I g N)⟩
  std::vector<ComplexRational> source;     // −(1/ħ) ⟨str(I g Y)⟩
  std::vector<ComplexRational> residual;   // lhs − quadratic − source
  bool zero() const;
};

/// Integration by parts in the Gaussian ensemble, V'(N) = N − Y, with
/// g = I^{-1} (x − N)^{-1}, optionally times str (x − N)^{-1}. Series through x^{−order−1}.
SdReport sd_residual(Grading g, const Rational& hbar, const std::vector<ComplexRational>& y, int order,
                     bool with_trace = false);

}  // namespace superloop
