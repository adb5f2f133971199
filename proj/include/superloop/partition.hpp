#pragma once

#include <map>
#include <string>
#include <vector>

#include "superloop/gaussian.hpp"

namespace superloop {

/// Truncated multivariate series Π_i v_i^{prefactor_i} · Σ_e c_e Π_i u_i^{e_i},
/// where u_i = 1/v_i and every stored Σ e_i is at most `order`.
struct FormalSeries {
  std::vector<std::string> variables;  // names of the v_i
  int order = 0;
  std::vector<int> prefactor;
  std::map<std::vector<int>, ComplexRational> coefficients;
  /// True when the truncation dropped nothing (the series is a finite Laurent polynomial).
  bool exact = false;

  ComplexRational coefficient(const std::vector<int>& exponents) const;
  /// Π v_i^{prefactor_i − e_i} summed; meaningful when `exact`.
  ComplexRational evaluate(const std::vector<ComplexRational>& v) const;
  friend bool operator==(const FormalSeries&, const FormalSeries&) = default;
};

struct SourceSpec {
  int m = 0;  // numerator sources sdet(x_i − M)
  int n = 0;  // denominator sources sdet(x_i − M)^{-1}
};

/// Z_{(m|n),(p|q)}(X, Y) = e^{−str Y²/2ħ} ⟨e^{str MY/ħ} Π sdet(x_i − M)^{σ(i)}⟩,
/// normalized by z_{p,q}(ħ), as a series in 1/x_i through total order T.
/// Uses sdet(x − N)^σ = x^{σ(p−q)} exp(−σ Σ_k str N^k /(k x^k)).
/// The Y dependence is exact (mean shift); a nonzero negative ħ is accepted
/// formally, since every coefficient is polynomial in ħ.
FormalSeries partition_oracle(const SourceSpec& sources, Grading g, const std::vector<ComplexRational>& y,
                              const Rational& hbar, int order);

struct TimesToSources {
  std::vector<ComplexRational> times;  // t_1..t_T
  ComplexRational sdet_s;              // sdet S
  ComplexRational gamma;
  Rational prefactor_exponent_factor;  // prefactor is (sdet S)^{γ·(q − p)}; stores q − p
};

/// t_k = γ str S^{−k} for k = 1..order.
TimesToSources times_to_sources(Grading s_grading, const std::vector<ComplexRational>& s,
                                const ComplexRational& gamma, Grading model, int order);

/// ⟨exp(−Σ_k t_k str M^k / k)⟩ with t_k = γ Σ_j σ'(j) u_j^k, u_j = 1/s_j,
/// as a series in the u_j. γ must be an integer.
FormalSeries times_partition_series(Grading s_grading, const ComplexRational& gamma, Grading model,
                                    const std::vector<ComplexRational>& y, const Rational& hbar,
                                    int order);

}  // namespace superloop
