#include "doctest.h"
#include "superloop/gaussian.hpp"

using namespace superloop;

namespace {

/// Truncated exponential Σ_{k<=order} a^k / k!.
SuperPoly exp_truncated(const SuperPoly& a, int order) {
  SuperPoly result(1), power(1);
  for (int k = 1; k <= order; ++k) {
    power = power * a * ComplexRational(Rational(1, k));
    result += power;
  }
  return result;
}

/// Keeps terms of total boson degree <= order.
SuperPoly truncate(const SuperPoly& p, int order) {
  SuperPoly out;
  for (const auto& [key, c] : p.terms()) {
    int d = 0;
    for (int v = 0; v < kMaxBosons; ++v) d += boson_exponent(key.bosons, v);
    if (d <= order) out.add_term(key, c);
  }
  return out;
}

}  // namespace

TEST_CASE("second moments on H(1|1)") {
  GaussianOracle o({1, 1}, Rational(1));
  CHECK(o.expectation_value(o.entry(0, 0) * o.entry(0, 0)) == ComplexRational(1));
  CHECK(o.expectation_value(o.entry(0, 1) * o.entry(1, 0)) == ComplexRational(-1));
  CHECK(o.expectation_value(o.entry(1, 0) * o.entry(0, 1)) == ComplexRational(1));
  CHECK(o.expectation_value(o.entry(0, 0)).is_zero());
  CHECK(o.expectation_value(o.entry(0, 1)).is_zero());
}

TEST_CASE("covariance matches ħσ(j)δ_il δ_jk") {
  for (Grading g : {Grading{1, 1}, Grading{2, 1}, Grading{1, 2}, Grading{2, 2}}) {
    const Rational hbar(3, 7);
    GaussianOracle o(g, hbar);
    const int n = g.size();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) {
            ComplexRational expected;
            if (i == l && j == k) expected = ComplexRational(hbar * g.sigma(j));
            CHECK(o.expectation_value(o.entry(i, j) * o.entry(k, l)) == expected);
          }
  }
}

TEST_CASE("external field shifts the diagonal mean") {
  GaussianOracle o({1, 1}, Rational(2), {ComplexRational(Rational(1, 3)), ComplexRational(5)});
  CHECK(o.expectation_value(o.entry(0, 0)) == ComplexRational(Rational(1, 3)));
  CHECK(o.expectation_value(o.entry(1, 1)) == ComplexRational(5));
  CHECK(o.expectation_value(o.str_power(1)) == ComplexRational(Rational(1, 3) - 5));
}

TEST_CASE("⟨exp(str MY)⟩ = exp((ħ/2) str Y²) through order 6") {
  for (Grading g : {Grading{1, 1}, Grading{2, 1}}) {
    const Rational hbar(2, 5);
    GaussianOracle o(g, hbar);
    const int base = o.internal_bosons();
    SuperPoly str_my, str_y2;
    for (int i = 0; i < g.size(); ++i) {
      SuperPoly yi = SuperPoly::boson(base + i);
      str_my += o.entry(i, i) * yi * ComplexRational(g.sigma(i));
      str_y2 += yi * yi * ComplexRational(g.sigma(i));
    }
    SuperPoly lhs = truncate(o.expectation(exp_truncated(str_my, 6)), 6);
    SuperPoly rhs = truncate(exp_truncated(str_y2 * ComplexRational(hbar / 2), 3), 6);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("odd fermion count gives exact zero") {
  GaussianOracle o({2, 1}, Rational(1));
  CHECK(o.expectation_value(o.entry(0, 2) * o.entry(0, 0)).is_zero());
  CHECK(o.expectation_value(o.entry(0, 2) * o.entry(1, 2) * o.entry(2, 1)).is_zero());
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(GaussianOracle({3, 2}, Rational(1)), CapExceeded);
}
