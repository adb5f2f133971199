#pragma once

#include <random>

#include "superloop/supermatrix.hpp"

namespace superloop::testing {

inline ComplexRational random_complex(std::mt19937& rng, int bound = 3) {
  std::uniform_int_distribution<int> d(-bound, bound);
  return {Rational(d(rng)), Rational(d(rng))};
}

/// Random element whose monomials all have the given parity; `with_body`
/// adds a nonzero constant term (only meaningful for even parity).
inline GrassmannElement random_element(std::mt19937& rng, int gens, int parity, bool with_body,
                                       int terms = 3) {
  GrassmannElement out(gens);
  std::uniform_int_distribution<unsigned> mask(1, (1u << gens) - 1);
  for (int t = 0; t < terms; ++t) {
    const GeneratorMask m = mask(rng);
    if ((std::popcount(m) & 1) == parity) out.add_term(m, random_complex(rng));
  }
  if (with_body) {
    ComplexRational b;
    while (b.is_zero()) b = random_complex(rng);
    out.add_term(0, b);
  }
  return out;
}

/// Random block-parity-respecting matrix. Even blocks get a body when
/// `with_body` so that sdet is defined (almost surely).
inline SuperMatrix random_supermatrix(std::mt19937& rng, Grading g, int gens, bool with_body) {
  SuperMatrix m(g, GrassmannElement(gens));
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) {
      const int parity = (g.epsilon(i) + g.epsilon(j)) % 2;
      m(i, j) = random_element(rng, gens, parity, with_body && parity == 0);
    }
  return m;
}

}  // namespace superloop::testing
