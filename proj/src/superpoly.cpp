#include "superloop/superpoly.hpp"

#include <bit>

#include "superloop/errors.hpp"

namespace superloop {

namespace {

BosonKey add_exponents(BosonKey a, BosonKey b) {
  for (int v = 0; v < kMaxBosons; ++v) {
    if (((a >> (4 * v)) & 0xF) + ((b >> (4 * v)) & 0xF) > kMaxBosonExponent) {
      throw CapExceeded("boson exponent exceeds 15");
    }
  }
  return a + b;
}

}  // namespace

int boson_exponent(BosonKey key, int var) { return static_cast<int>((key >> (4 * var)) & 0xF); }

BosonKey boson_with_exponent(BosonKey key, int var, int exponent) {
  if (var < 0 || var >= kMaxBosons) throw IndexOutOfRange("boson variable out of range");
  if (exponent < 0 || exponent > kMaxBosonExponent) throw CapExceeded("boson exponent exceeds 15");
  key &= ~(BosonKey{0xF} << (4 * var));
  return key | (BosonKey(exponent) << (4 * var));
}

SuperPoly::SuperPoly(ComplexRational scalar) {
  if (!scalar.is_zero()) terms_.emplace(Key{}, std::move(scalar));
}

SuperPoly SuperPoly::boson(int var, ComplexRational coefficient) {
  SuperPoly p;
  p.add_term(Key{boson_with_exponent(0, var, 1), 0}, coefficient);
  return p;
}

SuperPoly SuperPoly::fermion(int generator, ComplexRational coefficient) {
  if (generator < 0 || generator >= kMaxGenerators) throw IndexOutOfRange("generator out of range");
  SuperPoly p;
  p.add_term(Key{0, GeneratorMask{1} << generator}, coefficient);
  return p;
}

SuperPoly SuperPoly::from_grassmann(const GrassmannElement& g) {
  SuperPoly p;
  for (const auto& [mask, c] : g.terms()) p.add_term(Key{0, mask}, c);
  return p;
}

ComplexRational SuperPoly::constant() const {
  auto it = terms_.find(Key{});
  return it == terms_.end() ? ComplexRational() : it->second;
}

void SuperPoly::add_term(const Key& key, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool SuperPoly::has_parity(int parity) const {
  for (const auto& [k, c] : terms_) {
    if ((std::popcount(k.fermions) & 1) != (parity & 1)) return false;
  }
  return true;
}

int SuperPoly::max_total_degree() const {
  int best = 0;
  for (const auto& [k, c] : terms_) {
    int d = std::popcount(k.fermions);
    for (int v = 0; v < kMaxBosons; ++v) d += boson_exponent(k.bosons, v);
    best = std::max(best, d);
  }
  return best;
}

SuperPoly& SuperPoly::operator+=(const SuperPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, c);
  return *this;
}

SuperPoly& SuperPoly::operator-=(const SuperPoly& o) {
  for (const auto& [k, c] : o.terms_) add_term(k, -c);
  return *this;
}

SuperPoly& SuperPoly::operator*=(const ComplexRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

SuperPoly SuperPoly::operator-() const {
  SuperPoly out = *this;
  for (auto& [k, v] : out.terms_) v = -v;
  return out;
}

SuperPoly operator*(const SuperPoly& a, const SuperPoly& b) {
  SuperPoly out;
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      if (ka.fermions & kb.fermions) continue;
      ComplexRational c = ca * cb;
      if (merge_sign(ka.fermions, kb.fermions) < 0) c = -c;
      out.add_term({add_exponents(ka.bosons, kb.bosons), ka.fermions | kb.fermions}, c);
    }
  }
  return out;
}

SuperPoly boson_derivative(const SuperPoly& p, int var) {
  SuperPoly out;
  for (const auto& [k, c] : p.terms()) {
    const int e = boson_exponent(k.bosons, var);
    if (e == 0) continue;
    out.add_term({boson_with_exponent(k.bosons, var, e - 1), k.fermions}, c * ComplexRational(e));
  }
  return out;
}

SuperPoly fermion_left_derivative(const SuperPoly& p, int generator) {
  SuperPoly out;
  const GeneratorMask b = GeneratorMask{1} << generator;
  for (const auto& [k, c] : p.terms()) {
    if (!(k.fermions & b)) continue;
    const int preceding = std::popcount(k.fermions & (b - 1));
    out.add_term({k.bosons, k.fermions & ~b}, (preceding & 1) ? -c : c);
  }
  return out;
}

}  // namespace superloop
