#include "superloop/grassmann.hpp"

#include <bit>
#include <ostream>
#include <set>

#include "superloop/errors.hpp"

namespace superloop {

namespace {

GeneratorMask bit(int i) { return GeneratorMask{1} << i; }

GeneratorMask bits_above(int i) {
  return i >= 63 ? GeneratorMask{0} : ~((GeneratorMask{1} << (i + 1)) - 1);
}

void check_count(int n) {
  if (n < 0 || n > kMaxGenerators) {
    throw InvalidArgument("generator count must lie in [0, 64], got " + std::to_string(n));
  }
}

}  // namespace

int merge_sign(GeneratorMask left, GeneratorMask right) {
  int inversions = 0;
  while (right) {
    const int j = std::countr_zero(right);
    right &= right - 1;
    inversions += std::popcount(left & bits_above(j));
  }
  return (inversions & 1) ? -1 : 1;
}

GrassmannElement::GrassmannElement(int generator_count) : n_(generator_count) {
  check_count(n_);
}

GrassmannElement::GrassmannElement(int generator_count, ComplexRational scalar)
    : n_(generator_count) {
  check_count(n_);
  if (!scalar.is_zero()) terms_.emplace(0, std::move(scalar));
}

GrassmannElement GrassmannElement::generator(int generator_count, int index,
                                             ComplexRational coefficient) {
  const int idx[1] = {index};
  return monomial(generator_count, idx, std::move(coefficient));
}

GrassmannElement GrassmannElement::monomial(int generator_count,
                                            std::span<const int> ordered_indices,
                                            ComplexRational coefficient) {
  GrassmannElement out(generator_count);
  GeneratorMask mask = 0;
  int sign = 1;
  for (int i : ordered_indices) {
    if (i < 0 || i >= generator_count) {
      throw IndexOutOfRange("generator index " + std::to_string(i) + " out of range");
    }
    if (mask & bit(i)) return out;  // repeated generator: nilpotent
    sign *= merge_sign(mask, bit(i));
    mask |= bit(i);
  }
  if (sign < 0) coefficient = -coefficient;
  out.add_term(mask, coefficient);
  return out;
}

ComplexRational GrassmannElement::body() const { return coefficient(0); }

ComplexRational GrassmannElement::coefficient(GeneratorMask mask) const {
  auto it = terms_.find(mask);
  return it == terms_.end() ? ComplexRational() : it->second;
}

void GrassmannElement::add_term(GeneratorMask mask, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(mask, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

bool GrassmannElement::has_parity(int parity) const {
  for (const auto& [mask, c] : terms_) {
    if ((std::popcount(mask) & 1) != (parity & 1)) return false;
  }
  return true;
}

bool GrassmannElement::is_even() const { return has_parity(0); }
bool GrassmannElement::is_odd() const { return has_parity(1); }

void GrassmannElement::check_compatible(const GrassmannElement& o) const {
  if (n_ != o.n_) {
    throw SizeMismatch("generator_count mismatch: " + std::to_string(n_) + " vs " +
                       std::to_string(o.n_));
  }
}

GrassmannElement& GrassmannElement::operator+=(const GrassmannElement& o) {
  check_compatible(o);
  for (const auto& [mask, c] : o.terms_) add_term(mask, c);
  return *this;
}

GrassmannElement& GrassmannElement::operator-=(const GrassmannElement& o) {
  check_compatible(o);
  for (const auto& [mask, c] : o.terms_) add_term(mask, -c);
  return *this;
}

GrassmannElement& GrassmannElement::operator*=(const ComplexRational& c) {
  if (c.is_zero()) {
    terms_.clear();
    return *this;
  }
  for (auto& [mask, v] : terms_) v *= c;
  return *this;
}

GrassmannElement GrassmannElement::operator-() const {
  GrassmannElement out = *this;
  for (auto& [mask, v] : out.terms_) v = -v;
  return out;
}

GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
  a.check_compatible(b);
  GrassmannElement out(a.n_);
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      if (ma & mb) continue;
      ComplexRational c = ca * cb;
      if (merge_sign(ma, mb) < 0) c = -c;
      out.add_term(ma | mb, c);
    }
  }
  return out;
}

bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
  return a.n_ == b.n_ && a.terms_ == b.terms_;
}

ConjugationPairing ConjugationPairing::adjacent(int pairs) {
  ConjugationPairing p;
  p.partner.assign(2 * pairs, -1);
  for (int k = 0; k < pairs; ++k) p.declare(2 * k, 2 * k + 1);
  return p;
}

void ConjugationPairing::declare(int a, int b) {
  const int need = std::max(a, b) + 1;
  if (static_cast<int>(partner.size()) < need) partner.resize(need, -1);
  partner[a] = b;
  partner[b] = a;
}

GrassmannElement ga_mul(const GrassmannElement& a, const GrassmannElement& b) { return a * b; }

GrassmannElement ga_left_derivative(const GrassmannElement& a, int index) {
  if (index < 0 || index >= a.generator_count()) {
    throw IndexOutOfRange("derivative index " + std::to_string(index) + " out of range");
  }
  GrassmannElement out(a.generator_count());
  const GeneratorMask b = bit(index);
  for (const auto& [mask, c] : a.terms()) {
    if (!(mask & b)) continue;
    const int preceding = std::popcount(mask & (b - 1));
    out.add_term(mask & ~b, (preceding & 1) ? -c : c);
  }
  return out;
}

GrassmannElement berezin_integral(const GrassmannElement& a, std::span<const int> indices) {
  std::set<int> seen;
  for (int i : indices) {
    if (!seen.insert(i).second) {
      throw InvalidArgument("repeated index " + std::to_string(i) + " in Berezin integral");
    }
  }
  GrassmannElement out = a;
  for (auto it = indices.rbegin(); it != indices.rend(); ++it) out = ga_left_derivative(out, *it);
  return out;
}

GrassmannElement ga_conjugate(const GrassmannElement& a, const ConjugationPairing& pairing) {
  GrassmannElement out(a.generator_count());
  for (const auto& [mask, c] : a.terms()) {
    // (θ_{i1}...θ_{ik})* = θ*_{ik}...θ*_{i1}
    std::vector<int> reversed;
    for (GeneratorMask m = mask; m; m &= m - 1) {
      const int i = std::countr_zero(m);
      const int p = i < static_cast<int>(pairing.partner.size()) ? pairing.partner[i] : -1;
      if (p < 0) {
        throw InvalidArgument("generator " + std::to_string(i) + " has no conjugate partner");
      }
      reversed.insert(reversed.begin(), p);
    }
    out += GrassmannElement::monomial(a.generator_count(), reversed, c.conj());
  }
  return out;
}

GrassmannElement ga_exp_nilpotent(const GrassmannElement& a) {
  if (!a.body().is_zero()) throw InvalidArgument("exp of a Grassmann element with nonzero body");
  if (!a.is_even()) throw InvalidArgument("exp of a Grassmann element with odd-degree terms");
  const int n = a.generator_count();
  GrassmannElement result(n, ComplexRational(1));
  GrassmannElement power(n, ComplexRational(1));
  for (int k = 1; k <= n / 2 + 1; ++k) {
    power = power * a;
    if (power.is_zero()) break;
    power *= ComplexRational(Rational(1, k));
    result += power;
  }
  return result;
}

GrassmannElement ga_inverse(const GrassmannElement& a) {
  const ComplexRational b = a.body();
  if (b.is_zero()) throw InvalidArgument("inverse of a Grassmann element with zero body");
  const ComplexRational binv = b.inverse();
  const int n = a.generator_count();
  GrassmannElement ratio = a * binv;
  ratio -= GrassmannElement(n, 1);  // nilpotent part over the body
  GrassmannElement result(n, 1);
  GrassmannElement power(n, 1);
  for (int k = 1; k <= n; ++k) {
    power = power * ratio;
    if (power.is_zero()) break;
    if (k % 2) result -= power; else result += power;
  }
  return result * binv;
}

std::ostream& operator<<(std::ostream& os, const GrassmannElement& a) {
  if (a.is_zero()) return os << "0";
  bool first = true;
  for (const auto& [mask, c] : a.terms()) {
    if (!first) os << " + ";
    first = false;
    os << c;
    for (GeneratorMask m = mask; m; m &= m - 1) os << "*t" << std::countr_zero(m);
  }
  return os;
}

}  // namespace superloop
