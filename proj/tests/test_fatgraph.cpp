#include "doctest.h"
#include "superloop/fatgraph.hpp"
#include "superloop/gaussian.hpp"

using namespace superloop;

namespace {

using Key = MomentPolynomial::Key;

MomentPolynomial poly(std::initializer_list<std::pair<Key, Rational>> terms) {
  MomentPolynomial p;
  for (const auto& [k, c] : terms) p.add(k, c);
  return p;
}

std::vector<int> zero_based(std::vector<int> v) {
  for (int& x : v) --x;
  return v;
}

}  // namespace

TEST_CASE("star enumeration counts") {
  CHECK(all_stars({2}, false).size() == 1);
  CHECK(all_stars({2}, true).size() == 2);
  CHECK(all_stars({4}, false).size() == 3);
  CHECK(all_stars({6}, false).size() == 15);
  CHECK(all_stars({2, 2}, true).size() == 10);  // telephone numbers
  CHECK(all_stars({6}, true).size() == 76);
  CHECK_THROWS_AS(all_stars({7, 6}, true), CapExceeded);
}

TEST_CASE("euler characteristic and genus") {
  auto sphere = euler_genus(make_star({2}, {{0, 1}}));
  CHECK(sphere.vertices == 1);
  CHECK(sphere.edges == 1);
  CHECK(sphere.faces == 2);
  CHECK(sphere.genus == 0);

  auto crossing = euler_genus(make_star({4}, {{0, 2}, {1, 3}}));
  CHECK(crossing.vertices == 1);
  CHECK(crossing.edges == 2);
  CHECK(crossing.faces == 1);
  CHECK(crossing.genus == 1);

  // edges (1,5), (2,7), (3,6) on str M^8; slots 4 and 8 unpaired
  auto torus = euler_genus(make_star({8}, {{0, 4}, {1, 6}, {2, 5}}));
  CHECK(torus.vertices == 3);
  CHECK(torus.edges == 5);
  CHECK(torus.faces == 2);
  CHECK(torus.genus == 1);
  std::vector<int> m = torus.face_unpaired;
  std::sort(m.begin(), m.end());
  CHECK(m == std::vector<int>{0, 2});

  // two disconnected tori have genus 2
  auto two = euler_genus(make_star({4, 4}, {{0, 2}, {1, 3}, {4, 6}, {5, 7}}));
  CHECK(two.components == 2);
  CHECK(two.genus == 2);
}

TEST_CASE("moment polynomials") {
  CHECK(moment_polynomial({1}) == poly({{{-2, {1}}, 1}}));
  CHECK(moment_polynomial({2}) == poly({{{-2, {2}}, 1}, {{-2, {0, 0}}, 1}}));
  CHECK(moment_polynomial_perfect({4}) == poly({{{-2, {0, 0, 0}}, 2}, {{0, {0}}, 1}}));
  CHECK(moment_polynomial({3}).terms().size() > 0);
  CHECK(moment_polynomial({4, 2}, 4) == moment_polynomial({4, 2}, 1));
}

TEST_CASE("single-trace moments carry only hbar^(2g-2)") {
  for (int n = 1; n <= 8; ++n) {
    const MomentPolynomial m = moment_polynomial({n});
    for (const auto& [key, c] : m.terms()) {
      CHECK(key.hbar_exponent % 2 == 0);
      CHECK(key.hbar_exponent >= -2);
    }
  }
}

TEST_CASE("specialization") {
  Grading g{2, 1};
  std::vector<ComplexRational> y{ComplexRational(1), ComplexRational(2), ComplexRational(3)};
  const Rational hbar(1);  // p − q = 1
  CHECK(specialize(poly({{{0, {0}}, 1}}), g, y, hbar) == ComplexRational(1));

  std::vector<ComplexRational> matched{ComplexRational(5), ComplexRational(5)};
  CHECK(specialize(poly({{{0, {1, 2, 3}}, 1}}), {1, 1}, matched, Rational(3, 2)).is_zero());

  const Rational h(2, 3);
  auto m = moment_polynomial({2, 2});
  std::vector<ComplexRational> y21{ComplexRational(Rational(1, 2)), ComplexRational(-1), ComplexRational(2)};
  std::vector<ComplexRational> y32{ComplexRational(Rational(1, 2)), ComplexRational(-1), ComplexRational(7),
                                   ComplexRational(2), ComplexRational(7)};
  CHECK(specialize(m, {2, 1}, y21, h) == specialize(m, {3, 2}, y32, h));
}

TEST_CASE("labelled ribbon graph sign and weight") {
  Grading g{2, 2};
  // edges (1,3), (2,5); half-edges 4 and 6
  std::vector<int> partner{2, 4, 0, -1, 1, -1};
  auto printed = zero_based({1, 3, 2, 4, 3, 1, 4, 4, 1, 3, 2, 3});
  CHECK(pairing_sign(printed, partner, g) == -1);
  RibbonWeight literal = ribbon_weight(printed, partner, g);
  CHECK(literal.sign == -1);
  CHECK_FALSE(literal.deltas_hold);  // δ_{i2 j5} = δ_{2,3}

  auto corrected = zero_based({1, 3, 2, 4, 3, 1, 4, 4, 4, 2, 2, 3});
  RibbonWeight w = ribbon_weight(corrected, partner, g);
  CHECK(w.deltas_hold);
  CHECK(w.sign == -1);
  CHECK(w.hbar_power == 4);
  CHECK(w.y_factors == std::vector<std::pair<int, int>>{{3, 3}, {1, 2}});
}

TEST_CASE("exchanging odd ribbons flips the sign") {
  Grading g{1, 1};
  // two unpaired odd half-edges (1,2) and (2,1) then a bosonic edge
  std::vector<int> labels = zero_based({1, 2, 1, 1, 2, 1, 1, 1});
  std::vector<int> partner{-1, 3, -1, 1};
  std::vector<int> swapped_partner{1, 0, -1, -1};
  std::vector<int> swapped = zero_based({1, 1, 1, 1, 1, 2, 2, 1});
  CHECK(pairing_sign(labels, partner, g) == 1);
  CHECK(pairing_sign(zero_based({1, 2, 2, 1}), {1, 0}, g) == 1);
  // moving an odd half-edge past another odd one
  CHECK(pairing_sign(zero_based({1, 2, 2, 1, 1, 2}), {2, -1, 0}, g) == -1);
  CHECK(pairing_sign(swapped, swapped_partner, g) == 1);
}

TEST_CASE("three-edge trace graph weight") {
  const Rational hbar(3, 5);
  for (Grading g : {Grading{2, 1}, Grading{1, 2}, Grading{3, 1}, Grading{2, 2}}) {
    std::vector<ComplexRational> y;
    for (int i = 0; i < g.size(); ++i) y.emplace_back(Rational(2 * i + 1, 3), Rational(i));
    auto star = make_star({8}, {{0, 4}, {1, 6}, {2, 5}});
    ComplexRational expected = ComplexRational(hbar * hbar * hbar * (g.p - g.q)) *
                               str_power_of_field(g, y, hbar, 2);
    CHECK(star_indexsum(star, g, y, hbar, WeightConvention::raw) == expected);
  }
}

TEST_CASE("one-edge trace graphs") {
  const Rational hbar(2, 7);
  Grading g{2, 1};
  std::vector<ComplexRational> y{ComplexRational(1, 2), ComplexRational(-3), ComplexRational(Rational(1, 2))};
  for (int n = 2; n <= 6; ++n)
    for (int k = 0; k < n; ++k)
      for (int l = k + 1; l < n; ++l) {
        auto star = make_star({n}, {{k, l}});
        ComplexRational expected = ComplexRational(hbar) * str_power_of_field(g, y, hbar, n + k - l - 1) *
                                   str_power_of_field(g, y, hbar, l - k - 1);
        CHECK(star_indexsum(star, g, y, hbar, WeightConvention::raw) == expected);
      }
}

TEST_CASE("str M^2 with Y = 0") {
  Grading g{3, 1};
  const Rational hbar(5, 4);
  std::vector<ComplexRational> y(4);
  auto star = make_star({2}, {{0, 1}});
  CHECK(star_indexsum(star, g, y, hbar, WeightConvention::raw) == ComplexRational(hbar * 4));
}

TEST_CASE("three moment computations agree") {
  const Rational hbar(3, 2);
  const std::vector<std::vector<int>> lists{{1}, {2}, {3}, {1, 1}, {4}, {2, 1}, {2, 2}, {3, 1}, {1, 1, 1}};
  for (Grading g : {Grading{1, 1}, Grading{2, 1}}) {
    std::vector<ComplexRational> y;
    for (int i = 0; i < g.size(); ++i) y.emplace_back(Rational(i + 1, 2), Rational(1 - i));
    GaussianOracle oracle(g, hbar, y);
    for (const auto& v : lists) {
      ComplexRational a = specialize(moment_polynomial(v), g, y, hbar);
      CHECK(a == moment_indexsum(v, g, y, hbar));
      CHECK(a == oracle.trace_moment(v));
    }
  }
}

TEST_CASE("genus expansion at hbar = 1/(p-q)") {
  Grading g{3, 1};
  GaussianOracle oracle(g, Rational(1, 2));
  CHECK(oracle.trace_moment({4}) == ComplexRational(2 * 4 + 1));
  CHECK(specialize(moment_polynomial_perfect({4}), g, std::vector<ComplexRational>(4), Rational(1, 2)) ==
        ComplexRational(9));
}
