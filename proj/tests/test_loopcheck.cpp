#include "doctest.h"
#include "superloop/loopcheck.hpp"
#include "support.hpp"

using namespace superloop;
using superloop::testing::random_supermatrix;

namespace {

constexpr int kPool = 3;  // generators reserved for A, B, C

PolyMatrix lift(const SuperMatrix& s) {
  PolyMatrix out(s.grading(), SuperPoly());
  for (int i = 0; i < s.grading().size(); ++i)
    for (int j = 0; j < s.grading().size(); ++j) out(i, j) = SuperPoly::from_grassmann(s(i, j));
  return out;
}

bool all_zero(const std::vector<SuperPoly>& r) {
  for (const auto& x : r)
    if (!x.is_zero()) return false;
  return true;
}

}  // namespace

// the full 50-triple sweep lives in the acceptance binary
TEST_CASE("split and merge rules on random triples") {
  std::mt19937 rng(20261016);
  int checked = 0;
  for (Grading g : {Grading{1, 1}, Grading{2, 1}}) {
    const SymbolicMatrix m(g, kPool);
    const int order = 6;
    for (int t = 0; t < 4; ++t) {
      const PolyMatrix a = lift(random_supermatrix(rng, g, kPool, true));
      const PolyMatrix b = lift(random_supermatrix(rng, g, kPool, true));
      const PolyMatrix c = lift(random_supermatrix(rng, g, kPool, true));
      CHECK(all_zero(split_rule_residual(a, b, c, m, order)));
      CHECK(all_zero(merge_rule_residual(a, b, c, m, order)));
      ++checked;
    }
  }
  CHECK(checked == 8);
}

TEST_CASE("loop operator trivial cases") {
  Grading g{2, 1};
  const SymbolicMatrix m(g, kPool);
  std::mt19937 rng(7);
  const PolyMatrix a = lift(random_supermatrix(rng, g, kPool, true));
  const PolyMatrix b = lift(random_supermatrix(rng, g, kPool, true));
  const PolyMatrix c = lift(random_supermatrix(rng, g, kPool, true));
  const PolyMatrix zero(g, SuperPoly());
  CHECK(loop_operator(zero, m).is_zero());
  CHECK(loop_operator(a, m).is_zero());

  // order-1 terms: K_1 = str A str C for split, str(A C B) for merge
  auto split = split_rule_residual(a, b, c, m, 1);
  CHECK(loop_operator(a * b * m.m * c, m) == str(a * b) * str(c));
  CHECK(split[1].is_zero());
  CHECK(loop_operator(str(b * m.m * c) * a, m) == str(a * c * b));

  CHECK(all_zero(split_rule_residual(a, b, zero, m, 4)));
  CHECK(all_zero(merge_rule_residual(a, zero, c, m, 4)));
  CHECK(loop_operator(a * zero * m.m * c, m).is_zero());
}

TEST_CASE("loop operator on M itself") {
  // K(M) = Σ σ(i)σ(j) = (p − q)²
  for (Grading g : {Grading{1, 1}, Grading{2, 1}, Grading{1, 2}, Grading{3, 1}}) {
    const SymbolicMatrix m(g, 0);
    CHECK(loop_operator(m.m, m) == SuperPoly((g.p - g.q) * (g.p - g.q)));
  }
}

TEST_CASE("integration by parts in the Gaussian ensemble") {
  const Rational hbar(3, 4);
  for (Grading g : {Grading{1, 1}, Grading{2, 1}}) {
    std::vector<ComplexRational> y;
    for (int i = 0; i < g.size(); ++i) y.emplace_back(Rational(i + 1, 3), Rational(i % 2));
    SdReport plain = sd_residual(g, hbar, y, 4);
    CHECK(plain.zero());
    CHECK(plain.lhs.size() == 6);
    SdReport traced = sd_residual(g, hbar, y, 4, true);
    CHECK(traced.zero());
  }
  // leading coefficient: ⟨K(I^{-1})⟩ = 0 and the x^{-2} term gives (p − q)² = (1/ħ)⟨str N²⟩ − ...
  SdReport r = sd_residual({2, 1}, Rational(1), {}, 2);
  CHECK(r.lhs[1].is_zero());
  CHECK(r.lhs[2] == ComplexRational(1));
}

TEST_CASE("loopcheck caps") {
  const SymbolicMatrix m({1, 1}, 0);
  const PolyMatrix z({1, 1}, SuperPoly());
  CHECK_THROWS_AS(split_rule_residual(z, z, z, m, 9), CapExceeded);
  CHECK_THROWS_AS(merge_rule_residual(z, z, PolyMatrix({2, 1}, SuperPoly()), m, 2), SizeMismatch);
  CHECK_THROWS_AS(sd_residual({1, 1}, Rational(1), {}, -1), InvalidArgument);
}
