#include "doctest.h"
#include "superloop/supermatrix.hpp"
#include "support.hpp"

using namespace superloop;
using superloop::testing::random_supermatrix;

namespace {

GrassmannElement scalar(int gens, ComplexRational c) { return GrassmannElement(gens, c); }

bool body_invertible(const SuperMatrix& m) {
  try {
    sdet(m);
    return true;
  } catch (const SingularBlock&) {
    return false;
  }
}

}  // namespace

TEST_CASE("supertrace") {
  CHECK(str(super_identity({2, 1}, 0)) == scalar(0, 1));
  SuperMatrix d = super_diagonal({1, 1}, 0, {ComplexRational(5), ComplexRational(3)});
  CHECK(str(d) == scalar(0, 2));

  std::mt19937 rng(3);
  for (Grading g : {Grading{1, 1}, Grading{2, 1}, Grading{1, 2}}) {
    for (int t = 0; t < 20; ++t) {
      SuperMatrix x = random_supermatrix(rng, g, 4, true);
      SuperMatrix y = random_supermatrix(rng, g, 4, true);
      CHECK(str(x * y) == str(y * x));
      CHECK(str(x + y) == str(x) + str(y));
    }
  }
}

TEST_CASE("superdeterminant") {
  SuperMatrix d = super_diagonal({1, 1}, 0, {ComplexRational(6), ComplexRational(4)});
  CHECK(sdet(d) == scalar(0, ComplexRational(Rational(3, 2))));
  CHECK_THROWS_AS(sdet(super_diagonal({1, 1}, 0, {ComplexRational(1), ComplexRational(0)})),
                  SingularBlock);
  CHECK(sdet(super_diagonal({0, 2}, 0, {ComplexRational(2), ComplexRational(3)})) ==
        scalar(0, ComplexRational(Rational(1, 6))));

  std::mt19937 rng(5);
  int checked = 0;
  for (Grading g : {Grading{1, 1}, Grading{2, 1}, Grading{1, 2}}) {
    for (int t = 0; t < 40; ++t) {
      SuperMatrix x = random_supermatrix(rng, g, 4, true);
      SuperMatrix y = random_supermatrix(rng, g, 4, true);
      if (!body_invertible(x) || !body_invertible(y) || !body_invertible(x * y)) continue;
      CHECK(sdet(x * y) == sdet(x) * sdet(y));
      ++checked;
    }
  }
  CHECK(checked >= 100);

  for (Grading g : {Grading{1, 1}, Grading{2, 1}, Grading{1, 2}}) {
    for (int t = 0; t < 20; ++t) {
      SuperMatrix n = random_supermatrix(rng, g, 4, false);
      CHECK(sdet(exp_nilpotent(n)) == ga_exp_nilpotent(str(n)));
    }
  }
}

TEST_CASE("adjoint") {
  std::mt19937 rng(9);
  auto pairing = ConjugationPairing::adjacent(2);
  for (Grading g : {Grading{1, 1}, Grading{2, 1}}) {
    for (int t = 0; t < 20; ++t) {
      SuperMatrix x = random_supermatrix(rng, g, 4, true);
      SuperMatrix y = random_supermatrix(rng, g, 4, true);
      CHECK(adjoint(adjoint(x, pairing), pairing) == x);
      CHECK(adjoint(x * y, pairing) == adjoint(y, pairing) * adjoint(x, pairing));
      if (body_invertible(x)) CHECK(sdet(adjoint(x, pairing)) == ga_conjugate(sdet(x), pairing));
    }
  }
}

TEST_CASE("convergence matrix is diagonal and unitary") {
  Grading g{2, 1};
  SuperMatrix i = convergence_matrix(g, 2);
  auto pairing = ConjugationPairing::adjacent(1);
  CHECK(i * adjoint(i, pairing) == super_identity(g, 2));
  CHECK(str(i) == scalar(2, ComplexRational(Rational(2), Rational(-1))));
}
