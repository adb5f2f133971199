#pragma once

#include <json.hpp>

#include "superloop/curve.hpp"
#include "superloop/fatgraph.hpp"
#include "superloop/partition.hpp"
#include "superloop/toprec.hpp"

namespace superloop::cli {

using Json = nlohmann::json;

/// Rationals are "num/den" strings; complex numbers are [re, im].
Json to_json(const Rational& r);
Json to_json(const ComplexRational& z);
Json to_json(Complex z);
Json to_json(const CurveSpec& s);
Json to_json(const RationalFunction& f);
Json to_json(const SpectralCurve& c);
Json to_json(const ResidueReport& r);
Json to_json(const ExtendedCurve& e);
Json to_json(const MomentPolynomial& p);
Json to_json(const FormalSeries& s);
Json to_json(const DualityReport& r);

Rational rational_from_json(const Json& j);
ComplexRational complex_rational_from_json(const Json& j);
Complex complex_from_json(const Json& j);
CurveSpec curve_spec_from_json(const Json& j);
MomentPolynomial moment_polynomial_from_json(const Json& j);
FormalSeries formal_series_from_json(const Json& j);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical(const Json& j);

}  // namespace superloop::cli
