#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "superloop/rational.hpp"

namespace superloop {

using GeneratorMask = std::uint64_t;
inline constexpr int kMaxGenerators = 64;

/// Sign of the permutation that sorts the concatenation of two ascending
/// generator lists into ascending order. Assumes the masks are disjoint.
int merge_sign(GeneratorMask left, GeneratorMask right);

/// Element of the Grassmann algebra on `generator_count` anticommuting
/// generators. Monomials are subsets in ascending generator order; zero
/// coefficients are never stored.
class GrassmannElement {
public:
  using Terms = std::map<GeneratorMask, ComplexRational>;

  GrassmannElement() = default;
  explicit GrassmannElement(int generator_count);
  GrassmannElement(int generator_count, ComplexRational scalar);

  static GrassmannElement generator(int generator_count, int index,
                                    ComplexRational coefficient = ComplexRational(1));
  static GrassmannElement monomial(int generator_count, std::span<const int> ordered_indices,
                                   ComplexRational coefficient = ComplexRational(1));

  int generator_count() const { return n_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  ComplexRational body() const;
  ComplexRational coefficient(GeneratorMask mask) const;
  void add_term(GeneratorMask mask, const ComplexRational& c);

  bool is_even() const;
  bool is_odd() const;
  /// Every monomial has degree congruent to `parity` mod 2.
  bool has_parity(int parity) const;

  GrassmannElement& operator+=(const GrassmannElement& o);
  GrassmannElement& operator-=(const GrassmannElement& o);
  GrassmannElement& operator*=(const ComplexRational& c);
  GrassmannElement operator-() const;

  friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
  friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
  friend GrassmannElement operator*(GrassmannElement a, const ComplexRational& c) { return a *= c; }
  friend GrassmannElement operator*(const ComplexRational& c, GrassmannElement a) { return a *= c; }
  friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b);

  friend bool operator==(const GrassmannElement& a, const GrassmannElement& b);
  friend bool operator!=(const GrassmannElement& a, const GrassmannElement& b) { return !(a == b); }

private:
  void check_compatible(const GrassmannElement& o) const;

  int n_ = 0;
  Terms terms_;
};

/// Declares which generator is the conjugate partner of which.
/// partner[i] == j and partner[j] == i; partner[i] == -1 means undeclared.
struct ConjugationPairing {
  std::vector<int> partner;

  /// Pairs generators (2k, 2k+1) for k < pairs.
  static ConjugationPairing adjacent(int pairs);
  void declare(int a, int b);
};

GrassmannElement ga_mul(const GrassmannElement& a, const GrassmannElement& b);
GrassmannElement ga_left_derivative(const GrassmannElement& a, int index);
/// Iterated Berezin integral: the last index in `indices` is integrated first.
GrassmannElement berezin_integral(const GrassmannElement& a, std::span<const int> indices);
GrassmannElement ga_conjugate(const GrassmannElement& a, const ConjugationPairing& pairing);
/// exp of an even element with zero body; the series terminates.
GrassmannElement ga_exp_nilpotent(const GrassmannElement& a);
/// Inverse of an element with nonzero body: b^{-1} Σ (−n/b)^k, terminating.
GrassmannElement ga_inverse(const GrassmannElement& a);

std::ostream& operator<<(std::ostream& os, const GrassmannElement& a);

}  // namespace superloop
