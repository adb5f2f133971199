#include <cmath>
#include <random>

#include "doctest.h"
#include "superloop/toprec.hpp"

using namespace superloop;

namespace {

/// x = z + t/z, y = z.
TopologicalRecursion gaussian(double t) {
  RationalFunction x;
  x.poles = {0.0};
  x.residues = {t};
  return TopologicalRecursion(x, RationalFunction{});
}

}  // namespace

TEST_CASE("gaussian free energies") {
  TopologicalRecursion one = gaussian(1.0);
  CHECK(std::abs(one.free_energy(2) + 1.0 / 240.0) < 1e-12);
  CHECK(std::abs(one.free_energy(3) - 1.0 / 1008.0) < 1e-12);
  CHECK(std::abs(one.free_energy(0) + 0.75) < 1e-12);
  // y has no poles here
  CHECK(std::abs(one.pole_normalization(2)) == 0.0);
  CHECK(std::abs(one.raw_free_energy(2) - one.free_energy(2)) < 1e-15);

  for (double t : {0.5, 2.0, 3.0}) {
    TopologicalRecursion tr = gaussian(t);
    CHECK(std::abs(tr.free_energy(2) - std::pow(t, -2) * one.free_energy(2)) < 1e-10);
    CHECK(std::abs(tr.free_energy(3) - std::pow(t, -4) * one.free_energy(3)) < 1e-10);
    CHECK(std::abs(tr.free_energy(0) - (t * t / 2 * std::log(t) - 0.75 * t * t)) < 1e-10);
    CHECK(std::abs(tr.free_energy(1) - one.free_energy(1) + std::log(t) / 12.0) < 1e-10);
  }
}

TEST_CASE("gaussian correlators") {
  const double t = 2.0;
  TopologicalRecursion tr = gaussian(t);
  REQUIRE(tr.branch_points().size() == 2);

  // ω_{1,1}/dx ~ −t/x⁵
  const Complex z(400.0, 0.3);
  const Complex x = tr.x()(z);
  CHECK(std::abs(tr.evaluate(1, {z}) / tr.x().derivative(z) * std::pow(x, 5) + t) < 1e-3);

  const Complex z1(1.3, 0.2), z2(-0.7, 1.1), z3(2.1, -0.5);
  Complex closed = 0;
  for (const auto& b : tr.branch_points())
    closed -= 1.0 / (tr.x().derivative(b.z, 2) * tr.y().derivative(b.z)) / std::pow(z1 - b.z, 2) /
              std::pow(z2 - b.z, 2) / std::pow(z3 - b.z, 2);
  CHECK(std::abs(tr.evaluate(0, {z1, z2, z3}) - closed) < 1e-12);

  const Complex a = tr.evaluate(1, {z1, z2, z3});
  CHECK(std::abs(a - tr.evaluate(1, {z3, z1, z2})) < 1e-10 * std::abs(a));
  CHECK(std::abs(a - tr.evaluate(1, {z2, z1, z3})) < 1e-10 * std::abs(a));
  const Complex b = tr.evaluate(2, {z1, z2});
  CHECK(std::abs(b - tr.evaluate(2, {z2, z1})) < 1e-10 * std::abs(b));

  const CorrelatorForm& w = tr.omega(0, 3);
  CHECK(w.dim() == 2 * (w.max_order - 1));
  CHECK(std::abs(w.evaluate({z1, z2, z3}) - closed) < 1e-12);
}

TEST_CASE("sheet involution") {
  RationalFunction x;
  x.poles = {0.0};
  x.residues = {2.0};
  const Complex a = std::sqrt(2.0);
  const Complex z(1.9, 0.3);
  CHECK(std::abs(sheet_involution(x, z, a) - 2.0 / z) < 1e-12);

  x.poles = {0.0, 5.0};
  x.residues = {1.0, 0.5};
  const auto bp = branch_points(x);
  const Complex w = bp[0].z + Complex(0.05, 0.02);
  const Complex s = sheet_involution(x, w, bp[0].z);
  CHECK(std::abs(x(s) - x(w)) < 1e-10);
  CHECK(std::abs(s - w) > 1e-3);
  CHECK_THROWS_AS(sheet_involution(x, bp[0].z + 100.0, bp[0].z), InvalidArgument);
}

TEST_CASE("tau variation matches a finite difference") {
  RationalFunction x;
  x.poles = {Complex(0.3, 0.1), Complex(-1.2, 0.7)};
  x.residues = {Complex(0.8, 0.1), Complex(0.5, -0.2)};
  const double h = 1e-5;
  for (int which = 0; which < 2; ++which) {
    RationalFunction xp = x, xm = x;
    xp.residues[which] += h;
    xm.residues[which] -= h;
    const TopologicalRecursion tp(xp, RationalFunction{}), tm(xm, RationalFunction{}), t0(x, RationalFunction{});
    const Complex fd = (tp.bergman_tau_log() - tm.bergman_tau_log()) / (2 * h);
    Complex predicted = 0;
    for (std::size_t k = 0; k < t0.branch_points().size(); ++k) {
      const Complex a = t0.branch_points()[k].z;
      predicted += t0.tau_variation(static_cast<int>(k)) / (a - x.poles[which]);  // ∂x(a)/∂r at fixed a
    }
    CHECK(std::abs(fd - predicted) < 1e-6);
  }
}

TEST_CASE("exchange invariance on random curves") {
  std::mt19937_64 rng(7);
  int done = 0;
  for (int trial = 0; trial < 4; ++trial) {
    const CurveSpec s = random_curve_spec(rng);
    DualityReport rep;
    try {
      rep = duality_report(s, 3, 1e-8, false);
    } catch (const DegenerateCurve&) {
      continue;
    }
    ++done;
    CHECK(rep.swap_mismatch < 1e-9);
    CHECK(rep.pass);
    REQUIRE(rep.rows.size() == 4);
    CHECK(std::abs((rep.rows[0].original - rep.rows[0].swapped).real()) < 1e-8);  // up to log branches
    CHECK(std::abs((rep.rows[1].original - rep.rows[1].swapped).real()) < 1e-8);
  }
  CHECK(done >= 2);
}

TEST_CASE("duality oracle ratio") {
  CurveSpec s;
  s.hbar = 0.25;
  s.sources.push_back({3.0, 1});
  s.fields.push_back({1.0, 1});
  DualityReport one = duality_report(s, 0);
  REQUIRE(one.oracle.available);
  CHECK(one.oracle.order == 1);
  CHECK(one.oracle.sign_flipped_constant);
  CHECK(one.oracle.literal == ComplexRational(-1));

  s.fields.push_back({-1.0, 1});
  DualityReport two = duality_report(s, 0);
  REQUIRE(two.oracle.available);
  CHECK(two.oracle.order == 2);
  CHECK_FALSE(two.oracle.literal_constant);
  CHECK(two.oracle.sign_flipped_constant);
  CHECK(two.oracle.sign_flipped == ComplexRational(1));

  s.fields[0].b = -1;
  CHECK_FALSE(duality_report(s, 0).oracle.available);
}

TEST_CASE("recursion caps and errors") {
  TopologicalRecursion tr = gaussian(1.0);
  CHECK_THROWS_AS(tr.omega(0, 2), InvalidArgument);
  CHECK_THROWS_AS(tr.omega(4, 1), CapExceeded);
  CHECK_THROWS_AS(tr.omega(1, 4), CapExceeded);
  CHECK_THROWS_AS(tr.free_energy(4), CapExceeded);
  CHECK_THROWS_AS(tr.omega(1, 1).evaluate({1.0, 2.0}), SizeMismatch);
  CHECK_THROWS_AS(tr.tau_variation(5), IndexOutOfRange);

  RationalFunction x;
  x.poles = {0.0};
  x.residues = {1.0};
  RationalFunction y;
  y.poles = {1.0};
  y.residues = {0.5};
  CHECK_THROWS_AS(TopologicalRecursion(x, y), DegenerateCurve);
}
