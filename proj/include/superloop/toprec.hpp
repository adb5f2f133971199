#pragma once

#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "superloop/curve.hpp"
#include "superloop/rational.hpp"

namespace superloop {

/// The other preimage of x(z) near branch point a. With a single companion
/// root (x of degree two) it is global; otherwise z must lie within half the
/// distance from a to the nearest other branch point or pole of x.
Complex sheet_involution(const RationalFunction& x, Complex z, Complex a);

/// Σ over multi-indices of c · Π_k dz_k/(z_k − a_{b_k})^{m_k}, m_k = 2..max_order.
/// Basis index of one argument: b·(max_order − 1) + (m − 2).
struct CorrelatorForm {
  int g = 0, n = 0;
  int max_order = 2;
  std::vector<Complex> branch;
  std::vector<Complex> coefficients;

  int dim() const { return static_cast<int>(branch.size()) * (max_order - 1); }
  Complex coefficient(const std::vector<int>& index) const;
  /// Coefficient of Π dz_k at the given points (all away from the branch points).
  Complex evaluate(const std::vector<Complex>& z) const;
};

/// Recursion on the curve (x, y) with ω_{0,1} = y dx, ω_{0,2} = dz₁dz₂/(z₁ − z₂)² and
/// K(z₀, z) = ∫_{z̄}^{z} ω_{0,2}(z₀, ·) / (2 (y(z) − y(z̄)) dx(z)).
/// Free energies follow ln Z = Σ_g ħ^{2g−2} F_g; all are defined up to an additive constant.
class TopologicalRecursion {
public:
  static constexpr int kMaxGenus = 3;
  static constexpr int kMaxPoints = 3;

  TopologicalRecursion(RationalFunction x, RationalFunction y);
  explicit TopologicalRecursion(const SpectralCurve& curve);

  const std::vector<BranchPoint>& branch_points() const { return branch_; }
  const RationalFunction& x() const { return x_; }
  const RationalFunction& y() const { return y_; }

  /// ω_{g,n} for 2g − 2 + n > 0, g ≤ 3, n ≤ 3 (internal levels up to 2g + n = 7 are memoized).
  const CorrelatorForm& omega(int g, int n);
  Complex evaluate(int g, const std::vector<Complex>& z);

  /// raw_free_energy(g) + pole_normalization(g).
  Complex free_energy(int g);
  /// F_0, F_1 or F_g = Σ_a Res Φ ω_{g,1} / (2 − 2g), Φ = ∫ y dx.
  Complex raw_free_energy(int g);
  /// Σ over poles of y of the one-point Gaussian free energy at temperature t = Res y dx:
  /// (t²/2) ln t − 3t²/4, −(1/12) ln t, −1/(240 t²), 1/(1008 t⁴).
  Complex pole_normalization(int g) const;
  /// ln τ_B of x: Σ_k of d ln τ/dx(a_k) equals Res_{a_k} ω_{0,2}(z, z̄)/dx(z).
  Complex bergman_tau_log() const;
  /// Res_{a_k} ω_{0,2}(z, z̄)/dx(z).
  Complex tau_variation(int k) const;

private:
  struct Local;
  const CorrelatorForm& level(int g, int n);
  const Local& local(int b) const;
  Complex genus_zero() const;
  Complex genus_one() const;

  struct Precise;  // branch points and ω coefficients in quad precision

  RationalFunction x_, y_;
  std::vector<BranchPoint> branch_;
  std::shared_ptr<Precise> precise_;
  mutable std::vector<std::shared_ptr<Local>> locals_;
  std::map<std::pair<int, int>, CorrelatorForm> memo_;
};

struct DualityRow {
  int g = 0;
  Complex original;
  Complex swapped;
  double delta = 0;      // |ΔF_g|; real part only for g ≤ 1
  double raw_delta = 0;  // same without the pole normalization
  bool pass = true;
};

struct OracleRatio {
  bool available = false;
  int order = 0;
  ComplexRational literal;       // Z(X,Y) / Z_dual(Y,X)
  ComplexRational sign_flipped;  // same with ħ → −ħ on the dual side
  ComplexRational literal_shifted;
  ComplexRational sign_flipped_shifted;  // at a second point (X + 1, Y + 1/2)
  bool literal_constant = false;
  bool sign_flipped_constant = false;
};

struct DualityReport {
  std::vector<DualityRow> rows;
  double swap_mismatch = 0;  // direct solve of the exchanged data against the exchanged curve
  OracleRatio oracle;
  bool pass = true;
};

/// Compares F_g on the curve and on its x ↔ y exchange, solving both
/// orientations. The oracle ratio needs positive multiplicities, rational
/// data and sizes 1 ≤ m, p ≤ 2.
DualityReport duality_report(const CurveSpec& spec, int g_max = 3, double tol = 1e-8, bool with_oracle = true);

}  // namespace superloop
