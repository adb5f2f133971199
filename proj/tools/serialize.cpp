#include "serialize.hpp"

namespace superloop::cli {

Json to_json(const Rational& r) { return to_string(r); }

Json to_json(const ComplexRational& z) { return Json::array({to_string(z.re()), to_string(z.im())}); }

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

namespace {

Json complex_list(const std::vector<Complex>& v) {
  Json out = Json::array();
  for (const Complex& z : v) out.push_back(to_json(z));
  return out;
}

}  // namespace

Json to_json(const CurveSpec& s) {
  Json j;
  j["hbar"] = s.hbar;
  j["sources"] = Json::array();
  for (const auto& p : s.sources) j["sources"].push_back({{"x", to_json(p.x)}, {"a", p.a}});
  j["fields"] = Json::array();
  for (const auto& f : s.fields) j["fields"].push_back({{"y", to_json(f.y)}, {"b", f.b}});
  return j;
}

Json to_json(const RationalFunction& f) {
  return {{"slope", to_json(f.slope)},
          {"offset", to_json(f.offset)},
          {"poles", complex_list(f.poles)},
          {"residues", complex_list(f.residues)}};
}

Json to_json(const SpectralCurve& c) {
  Json j;
  j["spec"] = to_json(c.spec);
  j["xi"] = complex_list(c.xi);
  j["eta"] = complex_list(c.eta);
  j["alpha"] = complex_list(c.alpha);
  j["beta"] = complex_list(c.beta);
  j["x"] = to_json(c.x);
  j["y"] = to_json(c.y);
  j["iterations"] = c.iterations;
  j["residual"] = c.residual;
  return j;
}

Json to_json(const ResidueReport& r) {
  Json checks = Json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"expected", to_json(c.expected)}, {"actual", to_json(c.actual)}, {"error", c.error}});
  return {{"checks", checks}, {"max_error", r.max_error}};
}

Json to_json(const ExtendedCurve& e) {
  Json coeffs = Json::array();
  for (int k = 0; k <= e.e.deg_x; ++k)
    for (int l = 0; l <= e.e.deg_y; ++l) {
      const Complex c = e.e.coefficient(k, l);
      if (std::abs(c) > 0) coeffs.push_back({{"x", k}, {"y", l}, {"c", to_json(c)}});
    }
  return {{"deg_x", e.e.deg_x},
          {"deg_y", e.e.deg_y},
          {"coefficients", coeffs},
          {"sample_residual", e.sample_residual},
          {"structure_residual", e.structure_residual},
          {"smallest_singular_value", e.smallest_singular_value},
          {"next_singular_value", e.next_singular_value}};
}

Json to_json(const MomentPolynomial& p) {
  Json terms = Json::array();
  for (const auto& [key, c] : p.terms()) terms.push_back({{"hbar", key.hbar_exponent}, {"p", key.p}, {"c", to_json(c)}});
  return {{"terms", terms}, {"text", p.str()}};
}

Json to_json(const FormalSeries& s) {
  Json coeffs = Json::array();
  for (const auto& [e, c] : s.coefficients) coeffs.push_back({{"u", e}, {"c", to_json(c)}});
  return {{"variables", s.variables},
          {"order", s.order},
          {"prefactor", s.prefactor},
          {"exact", s.exact},
          {"coefficients", coeffs}};
}

Json to_json(const DualityReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"g", row.g},
                    {"original", to_json(row.original)},
                    {"swapped", to_json(row.swapped)},
                    {"delta", row.delta},
                    {"raw_delta", row.raw_delta},
                    {"pass", row.pass}});
  Json j{{"rows", rows}, {"swap_mismatch", r.swap_mismatch}, {"pass", r.pass}};
  if (r.oracle.available) {
    j["oracle"] = {{"order", r.oracle.order},
                   {"literal", to_json(r.oracle.literal)},
                   {"literal_shifted", to_json(r.oracle.literal_shifted)},
                   {"literal_constant", r.oracle.literal_constant},
                   {"sign_flipped", to_json(r.oracle.sign_flipped)},
                   {"sign_flipped_shifted", to_json(r.oracle.sign_flipped_shifted)},
                   {"sign_flipped_constant", r.oracle.sign_flipped_constant}};
  } else {
    j["oracle"] = nullptr;
  }
  return j;
}

Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  throw InvalidArgument("expected a rational string \"num/den\"");
}

ComplexRational complex_rational_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw InvalidArgument("expected [re, im]");
  return {rational_from_json(j[0]), rational_from_json(j[1])};
}

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidArgument("expected [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

CurveSpec curve_spec_from_json(const Json& j) {
  if (!j.is_object()) throw InvalidArgument("curve spec must be an object");
  CurveSpec s;
  if (!j.contains("hbar") || !j["hbar"].is_number()) throw InvalidArgument("curve spec needs a numeric hbar");
  s.hbar = j["hbar"].get<double>();
  for (const auto& p : j.value("sources", Json::array())) {
    if (!p.contains("x") || !p.contains("a") || !p["a"].is_number_integer()) throw InvalidArgument("source needs x and integer a");
    s.sources.push_back({complex_from_json(p["x"]), p["a"].get<int>()});
  }
  for (const auto& f : j.value("fields", Json::array())) {
    if (!f.contains("y") || !f.contains("b") || !f["b"].is_number_integer()) throw InvalidArgument("field needs y and integer b");
    s.fields.push_back({complex_from_json(f["y"]), f["b"].get<int>()});
  }
  s.validate();
  return s;
}

MomentPolynomial moment_polynomial_from_json(const Json& j) {
  MomentPolynomial p;
  for (const auto& t : j.at("terms")) {
    MomentPolynomial::Key key;
    key.hbar_exponent = t.at("hbar").get<int>();
    key.p = t.at("p").get<std::vector<int>>();
    p.add(key, rational_from_json(t.at("c")));
  }
  return p;
}

FormalSeries formal_series_from_json(const Json& j) {
  FormalSeries s;
  s.variables = j.at("variables").get<std::vector<std::string>>();
  s.order = j.at("order").get<int>();
  s.prefactor = j.at("prefactor").get<std::vector<int>>();
  s.exact = j.at("exact").get<bool>();
  for (const auto& c : j.at("coefficients"))
    s.coefficients[c.at("u").get<std::vector<int>>()] = complex_rational_from_json(c.at("c"));
  return s;
}

std::string canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace superloop::cli
