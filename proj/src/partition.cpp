#include "superloop/partition.hpp"

namespace superloop {

namespace {

constexpr int kMaxModelSize = 3;
constexpr int kMaxSources = 3;

int degree_in(const BosonKey key, int lo, int hi) {
  int d = 0;
  for (int v = lo; v < hi; ++v) d += boson_exponent(key, v);
  return d;
}

SuperPoly truncate_in(const SuperPoly& p, int lo, int hi, int order) {
  SuperPoly out;
  for (const auto& [key, c] : p.terms())
    if (degree_in(key.bosons, lo, hi) <= order) out.add_term(key, c);
  return out;
}

/// exp(a) for a with no u-free part, truncated at u-degree `order`.
SuperPoly exp_truncated(const SuperPoly& a, int lo, int hi, int order) {
  SuperPoly result(1), term(1);
  for (int j = 1; j <= order; ++j) {
    term = truncate_in(term * a, lo, hi, order) * ComplexRational(Rational(1, j));
    if (term.is_zero()) break;
    result += term;
  }
  return result;
}

/// −Σ_{k=1}^{order} str N^k u^k / k for the external variable u.
SuperPoly log_sdet_series(const std::vector<SuperPoly>& str_powers, int u_var, int order) {
  SuperPoly out;
  SuperPoly u_power(1);
  const SuperPoly u = SuperPoly::boson(u_var);
  for (int k = 1; k <= order; ++k) {
    u_power = u_power * u;
    out -= str_powers[k] * u_power * ComplexRational(Rational(1, k));
  }
  return out;
}

std::vector<SuperPoly> supertrace_powers(const GaussianOracle& oracle, int order) {
  std::vector<SuperPoly> out{SuperPoly(oracle.grading().p - oracle.grading().q)};
  PolyMatrix power = PolyMatrix::identity(oracle.grading(), SuperPoly(), SuperPoly(1));
  for (int k = 1; k <= order; ++k) {
    power = power * oracle.matrix();
    out.push_back(str(power));
  }
  return out;
}

FormalSeries collect(const SuperPoly& expectation, int base, int count, int order) {
  FormalSeries s;
  s.order = order;
  for (const auto& [key, c] : expectation.terms()) {
    if (key.fermions) throw ConsistencyError("fermions survived the expectation");
    std::vector<int> e(count);
    for (int i = 0; i < count; ++i) e[i] = boson_exponent(key.bosons, base + i);
    s.coefficients[e] += c;
  }
  for (auto it = s.coefficients.begin(); it != s.coefficients.end();)
    it = it->second.is_zero() ? s.coefficients.erase(it) : std::next(it);
  return s;
}

void check_order(int order) {
  if (order < 1) throw InvalidArgument("truncation order must be at least 1");
  if (order > kMaxBosonExponent) throw CapExceeded("truncation order above 15");
}

}  // namespace

ComplexRational FormalSeries::coefficient(const std::vector<int>& exponents) const {
  auto it = coefficients.find(exponents);
  return it == coefficients.end() ? ComplexRational() : it->second;
}

ComplexRational FormalSeries::evaluate(const std::vector<ComplexRational>& v) const {
  if (v.size() != prefactor.size()) throw SizeMismatch("series variable count");
  ComplexRational total;
  for (const auto& [e, c] : coefficients) {
    ComplexRational term = c;
    for (std::size_t i = 0; i < v.size(); ++i) {
      const long power = prefactor[i] - e[i];
      term *= power >= 0 ? pow(v[i], power) : pow(v[i].inverse(), -power);
    }
    total += term;
  }
  return total;
}

FormalSeries partition_oracle(const SourceSpec& sources, Grading g, const std::vector<ComplexRational>& y,
                              const Rational& hbar, int order) {
  check_order(order);
  if (g.size() > kMaxModelSize) throw CapExceeded("partition oracle supports p+q <= 3");
  if (sources.m < 0 || sources.n < 0 || sources.m + sources.n > kMaxSources) {
    throw CapExceeded("partition oracle supports m+n <= 3");
  }

  GaussianOracle oracle(g, hbar, y, /*allow_negative_hbar=*/true);
  const int count = sources.m + sources.n;
  const int base = oracle.internal_bosons();
  if (base + count > kMaxBosons) throw CapExceeded("too many variables for the oracle");

  const std::vector<SuperPoly> powers = supertrace_powers(oracle, order);
  SuperPoly exponent;
  for (int i = 0; i < count; ++i) {
    SuperPoly log_i = log_sdet_series(powers, base + i, order);
    if (i >= sources.m) log_i = -log_i;
    exponent += log_i;
  }
  const SuperPoly integrand = exp_truncated(exponent, base, base + count, order);
  FormalSeries s = collect(oracle.expectation(integrand), base, count, order);
  for (int i = 0; i < count; ++i) {
    s.variables.push_back("x" + std::to_string(i + 1));
    s.prefactor.push_back((i < sources.m ? 1 : -1) * (g.p - g.q));
  }
  // With q = 0 and only numerator sources, each sdet is a polynomial of degree p.
  s.exact = sources.n == 0 && g.q == 0 && order >= sources.m * g.p;
  return s;
}

TimesToSources times_to_sources(Grading s_grading, const std::vector<ComplexRational>& s,
                                const ComplexRational& gamma, Grading model, int order) {
  check_order(order);
  if (static_cast<int>(s.size()) != s_grading.size()) throw SizeMismatch("S diagonal length");
  TimesToSources out;
  out.gamma = gamma;
  out.sdet_s = ComplexRational(1);
  for (int j = 0; j < s_grading.size(); ++j) {
    if (s[j].is_zero()) throw InvalidArgument("S has a zero eigenvalue");
    out.sdet_s = s_grading.sigma(j) > 0 ? out.sdet_s * s[j] : out.sdet_s / s[j];
  }
  for (int k = 1; k <= order; ++k) {
    ComplexRational t;
    for (int j = 0; j < s_grading.size(); ++j) {
      const ComplexRational term = pow(s[j].inverse(), k);
      t = s_grading.sigma(j) > 0 ? t + term : t - term;
    }
    out.times.push_back(gamma * t);
  }
  out.prefactor_exponent_factor = Rational(model.q - model.p);
  return out;
}

FormalSeries times_partition_series(Grading s_grading, const ComplexRational& gamma, Grading model,
                                    const std::vector<ComplexRational>& y, const Rational& hbar,
                                    int order) {
  check_order(order);
  if (!gamma.is_real() || gamma.re().get_den() != 1) throw InvalidArgument("γ must be an integer");
  if (model.size() > kMaxModelSize || s_grading.size() > kMaxSources) {
    throw CapExceeded("times series supports p+q <= 3 and p'+q' <= 3");
  }
  GaussianOracle oracle(model, hbar, y, /*allow_negative_hbar=*/true);
  const int count = s_grading.size();
  const int base = oracle.internal_bosons();
  if (base + count > kMaxBosons) throw CapExceeded("too many variables for the oracle");
  const std::vector<SuperPoly> powers = supertrace_powers(oracle, order);

  // −Σ_k (t_k / k) str N^k with t_k = γ Σ_j σ'(j) u_j^k
  SuperPoly exponent;
  for (int k = 1; k <= order; ++k) {
    SuperPoly t_k;
    for (int j = 0; j < count; ++j) {
      SuperPoly u_power(1);
      for (int e = 0; e < k; ++e) u_power = u_power * SuperPoly::boson(base + j);
      t_k += u_power * ComplexRational(s_grading.sigma(j));
    }
    exponent -= t_k * powers[k] * (gamma * ComplexRational(Rational(1, k)));
  }
  const SuperPoly integrand = exp_truncated(exponent, base, base + count, order);
  FormalSeries s = collect(oracle.expectation(integrand), base, count, order);
  for (int j = 0; j < count; ++j) {
    s.variables.push_back("s" + std::to_string(j + 1));
    s.prefactor.push_back(0);
  }
  s.exact = gamma.is_zero();
  return s;
}

}  // namespace superloop
