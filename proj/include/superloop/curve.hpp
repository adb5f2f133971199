#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "superloop/errors.hpp"

namespace superloop {

using Complex = std::complex<double>;

struct SourcePoint {
  Complex x;
  int a = 0;  // signed multiplicity
};

struct FieldPoint {
  Complex y;
  int b = 0;
};

struct CurveSpec {
  double hbar = 0;
  std::vector<SourcePoint> sources;
  std::vector<FieldPoint> fields;

  /// Rejects negative ħ, zero multiplicities and repeated points.
  void validate() const;
  int source_charge() const;  // Σ a_i = m − n
  int field_charge() const;   // Σ b_j = p − q
};

/// slope·z + offset + Σ residues_k / (z − poles_k)
struct RationalFunction {
  Complex slope{1.0, 0.0};
  Complex offset{0.0, 0.0};
  std::vector<Complex> poles;
  std::vector<Complex> residues;

  Complex operator()(Complex z) const;
  Complex derivative(Complex z, int order = 1) const;
};

struct SolveOptions {
  double tol = 1e-12;
  int max_iter = 200;
};

struct SpectralCurve {
  CurveSpec spec;
  std::vector<Complex> xi, eta;      // x(ξ_i) = x_i, y(η_j) = y_j
  std::vector<Complex> alpha, beta;  // α_i = ħa_i/x'(ξ_i), β_j = ħb_j/y'(η_j)
  RationalFunction x, y;
  int iterations = 0;
  double residual = 0;
};

/// x(z) = z + Σ_j β_j/(z − η_j), y(z) = z − Σ_i α_i/(z − ξ_i), solved by damped
/// Newton on (ξ, η, α, β) from the ħ = 0 point.
SpectralCurve solve_rational_curve(const CurveSpec& spec, const SolveOptions& options = {});

/// Res f dg at a finite point, assuming at most simple poles of f and g there.
Complex residue_at(const RationalFunction& f, const RationalFunction& g, Complex z0, double tol = 1e-9);
/// Res_{z=∞} f dg.
Complex residue_at_infinity(const RationalFunction& f, const RationalFunction& g);

struct ResidueCheck {
  std::string name;
  Complex expected;
  Complex actual;
  double error = 0;
};

struct ResidueReport {
  std::vector<ResidueCheck> checks;
  double max_error = 0;
};

/// Computes all four residue families from partial fractions.
ResidueReport residue_report(const SpectralCurve& curve);
/// Throws FailedCheck naming the first residue off by more than tol.
ResidueReport verify_residue_data(const SpectralCurve& curve, double tol = 1e-10);

struct BranchPoint {
  Complex z;
  Complex x;
};

/// Zeros of x'(z); throws NonSimpleBranchPoint when x'' vanishes there.
std::vector<BranchPoint> branch_points(const RationalFunction& x, double tol = 1e-8);
std::vector<BranchPoint> branch_points(const SpectralCurve& curve);

struct BivariatePolynomial {
  int deg_x = 0, deg_y = 0;
  std::vector<Complex> coefficients;  // index k*(deg_y+1) + l for x^k y^l

  Complex coefficient(int k, int l) const;
  Complex operator()(Complex x, Complex y) const;
};

struct ExtendedCurve {
  BivariatePolynomial e;  // normalized so the x^{S+1} y^F coefficient is 1
  /// c_ij fixed by E(x_i, y_j) in the form
  /// Π(x−x_i)Π(y−y_j)(x − y − ħΣ a_i/(x−x_i) − ħΣ b_j/(y−y_j) + ħ² Σ a_i b_j c_ij /((x−x_i)(y−y_j)))
  std::vector<std::vector<Complex>> resolvent_terms;
  double sample_residual = 0;     // max |E(x(z), y(z))| over random samples
  double structure_residual = 0;  // max coefficient gap to the form above, relative to max |coefficient|
  double smallest_singular_value = 0;
  double next_singular_value = 0;
};

/// Eliminates z by fitting the null vector of the monomial sample matrix.
ExtendedCurve assemble_Eext(const SpectralCurve& curve, int samples = 100, std::uint64_t seed = 1);

/// 1..max_points sources and fields at least 1 apart in [−3, 3]², multiplicities ±1, ±2,
/// ħ uniform in [0.02, max_hbar].
CurveSpec random_curve_spec(std::mt19937_64& rng, double max_hbar = 0.2, int max_points = 3);

/// Exchanges the roles of x and y; sources and fields swap with negated multiplicities.
SpectralCurve swap_xy(const SpectralCurve& curve);

/// y − x + ħ(m − n + p − q)/x at the given large z (should be O(1/x²)).
Complex large_z_defect(const SpectralCurve& curve, Complex z);

}  // namespace superloop
