#include <random>

#include "doctest.h"
#include "superloop/curve.hpp"

using namespace superloop;

namespace {

/// Random spec with separated points, 1..3 sources and fields.
CurveSpec random_spec(std::mt19937& rng, double hbar) {
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  std::uniform_int_distribution<int> count(1, 3), mult(1, 2), sign(0, 1);
  std::vector<Complex> used;
  auto fresh = [&]() {
    for (;;) {
      const Complex p(coord(rng), coord(rng));
      bool ok = true;
      for (const Complex& q : used) ok = ok && std::abs(p - q) > 1.0;
      if (ok) {
        used.push_back(p);
        return p;
      }
    }
  };
  CurveSpec s;
  s.hbar = hbar;
  const int ns = count(rng), nf = count(rng);
  for (int i = 0; i < ns; ++i) s.sources.push_back({fresh(), sign(rng) ? mult(rng) : -mult(rng)});
  for (int j = 0; j < nf; ++j) s.fields.push_back({fresh(), sign(rng) ? mult(rng) : -mult(rng)});
  return s;
}

}  // namespace

TEST_CASE("gaussian curve in closed form") {
  CurveSpec s;
  s.hbar = 0.3;
  s.fields.push_back({0.0, 2});  // p − q = 2
  SpectralCurve c = solve_rational_curve(s);
  CHECK(std::abs(c.eta[0]) < 1e-14);
  CHECK(std::abs(c.beta[0] - 0.6) < 1e-14);
  const Complex z(0.7, -1.3);
  CHECK(std::abs(c.y(z) - z) < 1e-14);
  CHECK(std::abs(c.x(z) - (z + 0.6 / z)) < 1e-14);

  auto bp = branch_points(c);
  REQUIRE(bp.size() == 2);
  const double root = std::sqrt(0.6);
  CHECK(std::min(std::abs(bp[0].z - root), std::abs(bp[0].z + root)) < 1e-12);
  CHECK(std::abs(bp[0].z + bp[1].z) < 1e-12);

  ResidueReport rep = verify_residue_data(c);
  CHECK(std::abs(rep.checks[0].actual - 0.6) < 1e-14);  // Res_∞ y dx = t

  // E = xy − y² − t = −(y² − xy + t)
  ExtendedCurve e = assemble_Eext(c);
  CHECK(e.e.deg_x == 1);
  CHECK(e.e.deg_y == 2);
  CHECK(std::abs(e.e.coefficient(1, 1) - 1.0) < 1e-10);
  CHECK(std::abs(e.e.coefficient(0, 2) + 1.0) < 1e-10);
  CHECK(std::abs(e.e.coefficient(0, 0) + 0.6) < 1e-10);
  CHECK(std::abs(e.e.coefficient(1, 0)) < 1e-10);
  CHECK(e.sample_residual < 1e-9);
}

TEST_CASE("zero coupling") {
  CurveSpec s;
  s.hbar = 0;
  s.sources.push_back({{1.0, 0.5}, 1});
  s.fields.push_back({{-2.0, 0.0}, -1});
  SpectralCurve c = solve_rational_curve(s);
  CHECK(c.xi[0] == s.sources[0].x);
  CHECK(c.eta[0] == s.fields[0].y);
  CHECK(branch_points(c).empty());
  CHECK(c.x.poles.empty());
  verify_residue_data(c);
}

TEST_CASE("one source, one field") {
  CurveSpec s;
  s.hbar = 0.1;
  s.sources.push_back({2.0, 1});
  s.fields.push_back({0.0, 1});
  SpectralCurve c = solve_rational_curve(s);
  CHECK(std::abs(c.x(c.xi[0]) - 2.0) < 1e-12);
  CHECK(std::abs(c.y(c.eta[0])) < 1e-12);
  ResidueReport rep = verify_residue_data(c);
  CHECK(rep.max_error < 1e-12);
  CHECK(branch_points(c).size() == 2);
  ExtendedCurve e = assemble_Eext(c);
  CHECK(e.sample_residual < 1e-9);
  CHECK(e.structure_residual < 1e-8);
}

TEST_CASE("ħ to zero recovers the bare points") {
  CurveSpec s;
  s.sources.push_back({{1.0, 1.0}, 2});
  s.fields.push_back({{-1.0, 0.5}, -1});
  double prev = 1;
  for (double h : {1e-2, 1e-4, 1e-6}) {
    s.hbar = h;
    SpectralCurve c = solve_rational_curve(s);
    const double gap = std::abs(c.xi[0] - s.sources[0].x) + std::abs(c.eta[0] - s.fields[0].y);
    CHECK(gap < prev);
    CHECK(gap < 10 * h);
    prev = gap;
  }
}

TEST_CASE("randomized curves") {
  std::mt19937 rng(4242);
  std::uniform_real_distribution<double> hb(0.01, 0.2);
  for (int t = 0; t < 30; ++t) {
    const CurveSpec s = random_spec(rng, hb(rng));
    SpectralCurve c = solve_rational_curve(s);
    CHECK(verify_residue_data(c).max_error < 1e-10);
    auto bp = branch_points(c);
    CHECK(bp.size() == 2 * s.fields.size());
    for (const auto& b : bp) CHECK(std::abs(c.x.derivative(b.z)) < 1e-8);
    ExtendedCurve e = assemble_Eext(c, 100, t + 1);
    CHECK(e.e.deg_x == static_cast<int>(s.sources.size()) + 1);
    CHECK(e.e.deg_y == static_cast<int>(s.fields.size()) + 1);
    CHECK(e.sample_residual < 1e-9);
    CHECK(e.structure_residual < 1e-7);
    // y ~ x − ħ(m−n+p−q)/x
    const Complex z1(1e3, 7.0), z2(2e3, 14.0);
    const double d1 = std::abs(large_z_defect(c, z1)), d2 = std::abs(large_z_defect(c, z2));
    CHECK(d2 < d1 / 3);
  }
}

TEST_CASE("swap exchanges the residue families") {
  std::mt19937 rng(99);
  const CurveSpec s = random_spec(rng, 0.1);
  SpectralCurve c = solve_rational_curve(s);
  SpectralCurve sw = swap_xy(c);
  CHECK(verify_residue_data(sw).max_error < 1e-10);
  SpectralCurve direct = solve_rational_curve(sw.spec);
  for (std::size_t i = 0; i < sw.xi.size(); ++i) CHECK(std::abs(direct.xi[i] - sw.xi[i]) < 1e-9);
  for (std::size_t j = 0; j < sw.eta.size(); ++j) CHECK(std::abs(direct.eta[j] - sw.eta[j]) < 1e-9);
}

TEST_CASE("curve errors") {
  CurveSpec bad;
  bad.hbar = 0.1;
  bad.sources.push_back({1.0, 0});
  CHECK_THROWS_AS(solve_rational_curve(bad), InvalidArgument);
  bad.sources = {{1.0, 1}, {1.0, 2}};
  CHECK_THROWS_AS(solve_rational_curve(bad), InvalidArgument);
  bad.sources = {{1.0, 1}};
  bad.hbar = -1;
  CHECK_THROWS_AS(solve_rational_curve(bad), InvalidArgument);

  CurveSpec clash;
  clash.hbar = 0.1;
  clash.sources.push_back({0.5, 1});
  clash.fields.push_back({0.5, 1});
  CHECK_THROWS_AS(solve_rational_curve(clash), DegenerateCurve);

  // strong coupling on a tight configuration leaves the perturbative branch
  CurveSpec strong;
  strong.hbar = 50;
  strong.sources = {{0.0, 3}, {0.01, -3}};
  strong.fields = {{0.02, 2}};
  SolveOptions opt;
  opt.max_iter = 20;
  CHECK_THROWS_AS(solve_rational_curve(strong, opt), Error);

  RationalFunction cube;  // x = z + 1/z
  cube.poles = {0.0};
  cube.residues = {1.0};
  CHECK(branch_points(cube).size() == 2);
  RationalFunction doubled;  // x = z + 1/(z−1) + 1/(z+1): generic
  doubled.poles = {1.0, -1.0};
  doubled.residues = {1.0, 1.0};
  CHECK(branch_points(doubled).size() == 4);
  RationalFunction cusp = doubled;  // x' ∝ z²(z² − 3)
  cusp.residues = {0.5, 0.5};
  CHECK_THROWS_AS(branch_points(cusp), NonSimpleBranchPoint);
}
