#include "doctest.h"
#include "superloop/partition.hpp"

using namespace superloop;

namespace {

ComplexRational cr(long a, long b = 1) { return ComplexRational(Rational(a, b)); }

}  // namespace

TEST_CASE("single source, single eigenvalue") {
  const Rational hbar(1, 3);
  FormalSeries z = partition_oracle({1, 0}, {1, 0}, {cr(5)}, hbar, 4);
  CHECK(z.exact);
  CHECK(z.prefactor == std::vector<int>{1});
  CHECK(z.coefficient({0}) == cr(1));
  CHECK(z.coefficient({1}) == cr(-5));
  CHECK(z.coefficients.size() == 2);
  CHECK(z.evaluate({cr(7)}) == cr(2));

  FormalSeries z0 = partition_oracle({1, 0}, {1, 0}, {cr(0)}, hbar, 3);
  CHECK(z0.evaluate({cr(7)}) == cr(7));
}

TEST_CASE("no sources gives 1") {
  for (Grading g : {Grading{1, 1}, Grading{2, 1}, Grading{0, 2}}) {
    std::vector<ComplexRational> y;
    for (int i = 0; i < g.size(); ++i) y.push_back(cr(i + 1, 2));
    FormalSeries z = partition_oracle({0, 0}, g, y, Rational(2), 3);
    CHECK(z.coefficients.size() == 1);
    CHECK(z.coefficient({}) == cr(1));
  }
}

TEST_CASE("two-eigenvalue source gives a Hermite-like polynomial") {
  const Rational hbar(1, 2);
  FormalSeries z = partition_oracle({1, 0}, {2, 0}, {cr(1), cr(3)}, hbar, 4);
  CHECK(z.exact);
  // (x − y1)(x − y2) − ħ
  CHECK(z.evaluate({cr(10)}) == cr(9 * 7) - ComplexRational(hbar));
}

TEST_CASE("the series agrees with a direct sdet expansion") {
  // Denominator source on H(1|0): ⟨1/(x − N)⟩ = Σ_k ⟨N^k⟩ x^{−k−1}
  const Rational hbar(1, 4);
  FormalSeries z = partition_oracle({0, 1}, {1, 0}, {cr(2)}, hbar, 5);
  GaussianOracle o({1, 0}, hbar, {cr(2)});
  CHECK(z.prefactor == std::vector<int>{-1});
  for (int k = 0; k <= 5; ++k) {
    SuperPoly nk(1);
    for (int j = 0; j < k; ++j) nk = nk * o.entry(0, 0);
    CHECK(z.coefficient({k}) == o.expectation_value(nk));
  }
  CHECK_FALSE(z.exact);
}

TEST_CASE("times to sources") {
  auto t = times_to_sources({1, 0}, {cr(2)}, cr(1), {1, 1}, 4);
  CHECK(t.times[0] == cr(1, 2));
  CHECK(t.times[2] == cr(1, 8));

  auto zero = times_to_sources({1, 0}, {cr(2)}, cr(0), {1, 1}, 3);
  for (const auto& tk : zero.times) CHECK(tk.is_zero());
  FormalSeries trivial = times_partition_series({1, 0}, cr(0), {1, 1}, {cr(1), cr(2)}, Rational(1), 3);
  CHECK(trivial.coefficients.size() == 1);
  CHECK(trivial.coefficient({0}) == cr(1));

  auto cancel = times_to_sources({1, 1}, {cr(3), cr(3)}, ComplexRational(Rational(2), Rational(1)), {1, 0}, 5);
  for (const auto& tk : cancel.times) CHECK(tk.is_zero());

  CHECK_THROWS_AS(times_to_sources({1, 0}, {cr(0)}, cr(1), {1, 0}, 3), InvalidArgument);
}

TEST_CASE("times round trip against the source oracle") {
  const Rational hbar(2, 3);
  for (Grading model : {Grading{1, 1}, Grading{2, 1}}) {
    std::vector<ComplexRational> y;
    for (int i = 0; i < model.size(); ++i) y.push_back(cr(2 * i - 1, 3));
    for (int gamma : {1, -1}) {
      Grading sg{1, 1};
      FormalSeries lhs = times_partition_series(sg, cr(gamma), model, y, hbar, 4);
      FormalSeries rhs = partition_oracle({1, 1}, model, y, hbar, 4);
      if (gamma < 0) {
        // γ = −1 swaps which source sits in the numerator
        FormalSeries swapped = rhs;
        swapped.coefficients.clear();
        for (const auto& [e, c] : rhs.coefficients) swapped.coefficients[{e[1], e[0]}] = c;
        rhs = swapped;
      }
      // (sdet S)^{γ(q−p)} cancels the x^{σ(p−q)} prefactors exactly
      CHECK(lhs.coefficients == rhs.coefficients);
    }
  }
}
