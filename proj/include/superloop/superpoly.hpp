#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "superloop/grassmann.hpp"
#include "superloop/rational.hpp"

namespace superloop {

/// Packed exponent vector for up to 16 commuting variables, 4 bits each.
using BosonKey = std::uint64_t;
inline constexpr int kMaxBosons = 16;
inline constexpr int kMaxBosonExponent = 15;

int boson_exponent(BosonKey key, int var);
BosonKey boson_with_exponent(BosonKey key, int var, int exponent);

/// Supercommutative polynomial: commuting variables times Grassmann monomials,
/// with exact complex-rational coefficients. Grassmann generators are indexed
/// 0..63 and ordered ascending inside each term.
class SuperPoly {
public:
  struct Key {
    BosonKey bosons = 0;
    GeneratorMask fermions = 0;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  using Terms = std::map<Key, ComplexRational>;

  SuperPoly() = default;
  SuperPoly(ComplexRational scalar);
  SuperPoly(int scalar) : SuperPoly(ComplexRational(scalar)) {}

  static SuperPoly boson(int var, ComplexRational coefficient = ComplexRational(1));
  static SuperPoly fermion(int generator, ComplexRational coefficient = ComplexRational(1));
  static SuperPoly from_grassmann(const GrassmannElement& g);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  ComplexRational constant() const;
  void add_term(const Key& key, const ComplexRational& c);

  /// Every term's Grassmann degree has the given parity.
  bool has_parity(int parity) const;
  int max_total_degree() const;

  SuperPoly& operator+=(const SuperPoly& o);
  SuperPoly& operator-=(const SuperPoly& o);
  SuperPoly& operator*=(const ComplexRational& c);
  SuperPoly operator-() const;

  friend SuperPoly operator+(SuperPoly a, const SuperPoly& b) { return a += b; }
  friend SuperPoly operator-(SuperPoly a, const SuperPoly& b) { return a -= b; }
  friend SuperPoly operator*(SuperPoly a, const ComplexRational& c) { return a *= c; }
  friend SuperPoly operator*(const ComplexRational& c, SuperPoly a) { return a *= c; }
  friend SuperPoly operator*(const SuperPoly& a, const SuperPoly& b);
  friend bool operator==(const SuperPoly& a, const SuperPoly& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const SuperPoly& a, const SuperPoly& b) { return !(a == b); }

private:
  Terms terms_;
};

/// d/d(boson var).
SuperPoly boson_derivative(const SuperPoly& p, int var);
/// Left derivative with respect to a Grassmann generator.
SuperPoly fermion_left_derivative(const SuperPoly& p, int generator);

}  // namespace superloop
