#include "superloop/gaussian.hpp"

#include <bit>

namespace superloop {

namespace {

Rational binomial(int n, int k) {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return Rational(r);
}

Rational double_factorial_odd(int j) {  // (2j−1)!!
  Rational r(1);
  for (int k = 1; k <= 2 * j - 1; k += 2) r *= k;
  return r;
}

}  // namespace

GaussianOracle::GaussianOracle(Grading g, Rational hbar, std::vector<ComplexRational> y,
                               bool allow_negative_hbar)
    : grading_(g), hbar_(std::move(hbar)), y_(std::move(y)) {
  if (g.p < 0 || g.q < 0 || g.size() > kMaxSize) throw CapExceeded("oracle supports p+q <= 4");
  hbar_.canonicalize();
  if (sgn(hbar_) == 0 || (sgn(hbar_) < 0 && !allow_negative_hbar)) {
    throw InvalidArgument("hbar must be positive");
  }
  if (y_.empty()) y_.assign(g.size(), ComplexRational());
  if (static_cast<int>(y_.size()) != g.size()) throw SizeMismatch("Y diagonal length");

  const int n = g.size();
  const ComplexRational I = ComplexRational::i();
  n_ = PolyMatrix(g, SuperPoly());
  auto conv = [&](int i) { return g.sigma(i) > 0 ? ComplexRational(1) : I; };
  var_a_.assign(n * n, -1);
  var_b_.assign(n * n, -1);

  for (int i = 0; i < n; ++i) {
    const int v = bosons_++;
    var_a_[i * n + i] = v;
    n_(i, i) = SuperPoly::boson(v, conv(i));
    mean_.push_back(g.sigma(i) > 0 ? y_[i] : -I * y_[i]);
    variance_.push_back(hbar_);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (g.epsilon(i) == g.epsilon(j)) {
        const int u = bosons_++, v = bosons_++;
        if (bosons_ > kMaxBosons) throw CapExceeded("too many boson variables");
        var_a_[i * n + j] = var_a_[j * n + i] = u;
        var_b_[i * n + j] = var_b_[j * n + i] = v;
        for (int t = 0; t < 2; ++t) {
          mean_.push_back(ComplexRational());
          variance_.push_back(hbar_ / 2);
        }
        n_(i, j) = (SuperPoly::boson(u) + SuperPoly::boson(v, I)) * conv(i);
        n_(j, i) = (SuperPoly::boson(u) - SuperPoly::boson(v, I)) * conv(j);
      } else {
        const int b = fermions_++, c = fermions_++;
        var_a_[i * n + j] = b;
        var_a_[j * n + i] = c;
        n_(i, j) = SuperPoly::fermion(b);
        n_(j, i) = SuperPoly::fermion(c, I);
      }
    }
  }
}

ComplexRational GaussianOracle::boson_moment(int var, int exponent) const {
  // E[(μ + z)^k] with z centred of variance s.
  const int k = exponent;
  ComplexRational sum;
  Rational s(1);
  for (int j = 0; 2 * j <= k; ++j) {
    if (j) s *= variance_[var];
    sum += pow(mean_[var], k - 2 * j) * ComplexRational(binomial(k, 2 * j) * double_factorial_odd(j) * s);
  }
  return sum;
}

SuperPoly GaussianOracle::expectation(const SuperPoly& p) const {
  const BosonKey internal_bosons_mask =
      bosons_ >= kMaxBosons ? ~BosonKey{0} : (BosonKey{1} << (4 * bosons_)) - 1;
  const GeneratorMask internal_fermions_mask = (GeneratorMask{1} << fermions_) - 1;
  const ComplexRational pair_value = ComplexRational::i() * ComplexRational(hbar_);  // ⟨b c⟩

  SuperPoly out;
  for (const auto& [key, c] : p.terms()) {
    const GeneratorMask f = key.fermions & internal_fermions_mask;
    // every pair (2k, 2k+1) must be fully present or absent
    const GeneratorMask evens = f & 0x5555555555555555ULL;
    const GeneratorMask odds = (f >> 1) & 0x5555555555555555ULL;
    if (evens != odds) continue;
    ComplexRational value = c * pow(pair_value, std::popcount(evens));
    for (int v = 0; v < bosons_ && !value.is_zero(); ++v) {
      const int e = boson_exponent(key.bosons, v);
      if (e) value *= boson_moment(v, e);
    }
    out.add_term({key.bosons & ~internal_bosons_mask, key.fermions & ~internal_fermions_mask}, value);
  }
  return out;
}

ComplexRational GaussianOracle::expectation_value(const SuperPoly& p) const {
  SuperPoly e = expectation(p);
  for (const auto& [key, c] : e.terms()) {
    if (key.bosons || key.fermions) throw InvalidArgument("expectation has free symbols left");
  }
  return e.constant();
}

SuperPoly GaussianOracle::derivative_m(const SuperPoly& f, int i, int j) const {
  const int n = grading_.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw IndexOutOfRange("matrix entry out of range");
  const int a = var_a_[i * n + j];
  if (i == j) return boson_derivative(f, a);
  if (grading_.epsilon(i) != grading_.epsilon(j)) {
    // M_ij = b for i < j; M_ji = c (N_ji = i·c and I_j = i)
    return fermion_left_derivative(f, a);
  }
  // M_ij = u + iv for i < j, M_ji = u − iv
  const ComplexRational half(Rational(1, 2));
  const ComplexRational iv = i < j ? -ComplexRational::i() : ComplexRational::i();
  return (boson_derivative(f, a) + boson_derivative(f, var_b_[i * n + j]) * iv) * half;
}

SuperPoly GaussianOracle::str_power(int k) const {
  PolyMatrix power = matrix_power(n_, k, SuperPoly(1));
  return str(power);
}

ComplexRational GaussianOracle::trace_moment(const std::vector<int>& valencies) const {
  SuperPoly product(1);
  const ComplexRational inv_hbar(Rational(1) / hbar_);
  for (int n : valencies) product = product * (str_power(n) * inv_hbar);
  return expectation_value(product);
}

GaussianNormalization gaussian_normalization(Grading g) {
  return {Rational(g.p + g.q, 2), (g.p * g.q) % 4, Rational(g.p * g.p + g.q * g.q, 2),
          Rational((g.p - g.q) * (g.p - g.q), 2)};
}

}  // namespace superloop
