#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <random>
#include <sstream>

#include "serialize.hpp"
#include "superloop/gaussian.hpp"

namespace superloop::cli {

namespace {

/// SUPERLOOP_LOG: quiet, warn (default), info, debug, or 0..3.
int log_level() {
  const char* v = std::getenv("SUPERLOOP_LOG");
  if (!v) return 1;
  const std::string s(v);
  if (s == "quiet" || s == "0") return 0;
  if (s == "info" || s == "2") return 2;
  if (s == "debug" || s == "3") return 3;
  return 1;
}

class Log {
public:
  Log(std::ostream& err) : err_(err), level_(log_level()) {}
  void operator()(int level, const std::string& msg) const {
    static const char* names[] = {"", "warn", "info", "debug"};
    if (level <= level_) err_ << "[" << names[level] << "] " << msg << "\n";
  }

private:
  std::ostream& err_;
  int level_;
};

/// Usage and spec problems; reported with exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Grading parse_grading(const std::string& text) {
  int p = 0, q = 0;
  char sep = 0;
  std::istringstream in(text);
  if (!(in >> p >> sep >> q) || (sep != ',' && sep != '|') || p < 0 || q < 0 || !in.eof())
    throw UsageError("grading must look like p,q");
  return {p, q};
}

/// "a" or "a:b" with rational a, b.
ComplexRational parse_complex_rational(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) return {parse_rational(text)};
    return {parse_rational(text.substr(0, colon)), parse_rational(text.substr(colon + 1))};
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

std::vector<ComplexRational> parse_values(const std::vector<std::string>& items) {
  std::vector<ComplexRational> out;
  for (const auto& s : items) out.push_back(parse_complex_rational(s));
  return out;
}

Rational parse_hbar(const std::string& text) {
  try {
    return parse_rational(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

/// Inline JSON when the argument starts with '{', a file path otherwise.
CurveSpec load_spec(const std::string& arg) {
  std::string text = arg;
  if (arg.empty() || arg.front() != '{') {
    std::ifstream in(arg);
    if (!in) throw UsageError("cannot read spec file '" + arg + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw UsageError(std::string("malformed JSON: ") + e.what());
  }
  return curve_spec_from_json(j);
}

Json branch_json(const std::vector<BranchPoint>& bp) {
  Json out = Json::array();
  for (const auto& b : bp) out.push_back({{"z", to_json(b.z)}, {"x", to_json(b.x)}});
  return out;
}

struct Options {
  std::string out_path;
  int jobs = 1;
  std::uint64_t seed = 1;

  std::vector<int> valencies;
  std::string grading;
  std::string hbar = "1";
  std::vector<std::string> y;
  std::vector<std::string> x;
  std::string sources = "1,0";
  int order = 4;

  std::string spec;
  bool eext = false;
  double tol = 1e-8;
  double residue_tol = 1e-10;
  int g_max = 3;
  int random = 0;
  bool no_oracle = false;
};

/// Returns the exit code; `result` receives the JSON document.
int moments(const Options& o, Json& result, const Log& log) {
  if (o.valencies.empty()) throw UsageError("--valencies is required");
  int total = 0;
  for (int n : o.valencies) {
    if (n < 1) throw UsageError("valencies must be positive");
    total += n;
  }
  log(2, "enumerating stars for " + std::to_string(o.valencies.size()) + " traces, " + std::to_string(total) + " slots");
  const MomentPolynomial poly = moment_polynomial(o.valencies, o.jobs);
  result["valencies"] = o.valencies;
  result["polynomial"] = to_json(poly);
  if (o.grading.empty()) return 0;

  const Grading g = parse_grading(o.grading);
  const Rational hbar = parse_hbar(o.hbar);
  std::vector<ComplexRational> y = parse_values(o.y);
  if (y.empty()) y.assign(g.size(), ComplexRational(0));
  if (static_cast<int>(y.size()) != g.size()) throw UsageError("--y needs p+q values");
  const ComplexRational value = specialize(poly, g, y, hbar);
  const ComplexRational direct = moment_indexsum(o.valencies, g, y, hbar);
  const ComplexRational oracle = GaussianOracle(g, hbar, y).trace_moment(o.valencies);
  result["grading"] = {g.p, g.q};
  result["hbar"] = to_json(hbar);
  result["y"] = Json::array();
  for (const auto& v : y) result["y"].push_back(to_json(v));
  result["specialized"] = to_json(value);
  result["indexsum"] = to_json(direct);
  result["oracle"] = to_json(oracle);
  result["agree"] = value == direct && direct == oracle;
  return result["agree"].get<bool>() ? 0 : 1;
}

int oracle(const Options& o, Json& result, const Log& log) {
  if (o.grading.empty()) throw UsageError("--grading is required");
  const Grading g = parse_grading(o.grading);
  const Grading s = parse_grading(o.sources);
  const Rational hbar = parse_hbar(o.hbar);
  std::vector<ComplexRational> y = parse_values(o.y);
  if (y.empty()) y.assign(g.size(), ComplexRational(0));
  if (static_cast<int>(y.size()) != g.size()) throw UsageError("--y needs p+q values");
  log(2, "partition oracle at order " + std::to_string(o.order));
  const FormalSeries series = partition_oracle({s.p, s.q}, g, y, hbar, o.order);
  result["sources"] = {s.p, s.q};
  result["grading"] = {g.p, g.q};
  result["hbar"] = to_json(hbar);
  result["series"] = to_json(series);
  if (!o.x.empty()) {
    const std::vector<ComplexRational> x = parse_values(o.x);
    if (static_cast<int>(x.size()) != s.size()) throw UsageError("--x needs m+n values");
    result["value"] = to_json(series.evaluate(x));
  }
  return 0;
}

int curve(const Options& o, Json& result, const Log& log) {
  if (o.spec.empty()) throw UsageError("--spec is required");
  const CurveSpec spec = load_spec(o.spec);
  const SpectralCurve c = solve_rational_curve(spec);
  log(2, "Newton converged in " + std::to_string(c.iterations) + " iterations");
  const ResidueReport residues = residue_report(c);
  result["curve"] = to_json(c);
  result["branch_points"] = branch_json(branch_points(c));
  result["residues"] = to_json(residues);
  bool pass = residues.max_error <= o.residue_tol;
  if (o.eext) {
    const ExtendedCurve e = assemble_Eext(c, 100, o.seed);
    result["eext"] = to_json(e);
    pass = pass && e.sample_residual < 1e-9;
  }
  result["pass"] = pass;
  return pass ? 0 : 1;
}

int invariants(const Options& o, Json& result, const Log& log) {
  if (o.spec.empty()) throw UsageError("--spec is required");
  if (o.g_max < 0 || o.g_max > TopologicalRecursion::kMaxGenus) throw UsageError("--g-max must be 0..3");
  const CurveSpec spec = load_spec(o.spec);
  TopologicalRecursion tr(solve_rational_curve(spec));
  result["spec"] = to_json(spec);
  result["branch_points"] = branch_json(tr.branch_points());
  result["bergman_tau_log"] = to_json(tr.bergman_tau_log());
  Json rows = Json::array();
  for (int g = 0; g <= o.g_max; ++g) {
    log(2, "F_" + std::to_string(g));
    rows.push_back({{"g", g},
                    {"value", to_json(tr.free_energy(g))},
                    {"raw", to_json(tr.raw_free_energy(g))},
                    {"pole_normalization", to_json(tr.pole_normalization(g))}});
  }
  result["free_energies"] = rows;
  return 0;
}

int duality(const Options& o, Json& result, const Log& log) {
  if (o.g_max < 0 || o.g_max > TopologicalRecursion::kMaxGenus) throw UsageError("--g-max must be 0..3");
  std::vector<CurveSpec> specs;
  if (!o.spec.empty()) {
    specs.push_back(load_spec(o.spec));
  } else {
    if (o.random < 1) throw UsageError("give --spec or --random N");
    std::mt19937_64 rng(o.seed);
    for (int i = 0; i < o.random; ++i) specs.push_back(random_curve_spec(rng));
  }
  auto one = [&](const CurveSpec& s) { return duality_report(s, o.g_max, o.tol, !o.no_oracle); };
  std::vector<DualityReport> reports(specs.size());
  const int jobs = std::max(1, o.jobs);
  for (std::size_t start = 0; start < specs.size(); start += jobs) {
    std::vector<std::future<DualityReport>> batch;
    for (std::size_t i = start; i < std::min(specs.size(), start + jobs); ++i)
      batch.push_back(std::async(std::launch::async, one, std::cref(specs[i])));
    for (std::size_t i = 0; i < batch.size(); ++i) reports[start + i] = batch[i].get();
    log(2, "finished " + std::to_string(std::min(specs.size(), start + jobs)) + " of " + std::to_string(specs.size()));
  }
  bool pass = true;
  Json list = Json::array();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    list.push_back({{"spec", to_json(specs[i])}, {"report", to_json(reports[i])}});
    pass = pass && reports[i].pass;
    if (!reports[i].pass) log(1, "spec " + std::to_string(i) + " exceeds the tolerance");
  }
  result["tol"] = o.tol;
  result["g_max"] = o.g_max;
  result["reports"] = list;
  result["pass"] = pass;
  return pass ? 0 : 1;
}

void emit(const Json& doc, const Options& o, std::ostream& out) {
  const std::string text = canonical(doc);
  if (o.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out_path);
  if (!f) throw UsageError("cannot write '" + o.out_path + "'");
  f << text;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian supermatrix model with sources and external field"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--out", o.out_path, "write JSON here instead of stdout");
  app.add_option("--jobs", o.jobs, "worker threads")->check(CLI::Range(1, 256));
  app.add_option("--seed", o.seed, "seed for randomized runs");

  auto* mom = app.add_subcommand("moments", "moment polynomial, optionally checked against index sum and oracle");
  mom->add_option("--valencies", o.valencies, "trace lengths, e.g. 2,2")->delimiter(',');
  mom->add_option("--grading", o.grading, "p,q for a numerical check");
  mom->add_option("--hbar", o.hbar, "rational ħ");
  mom->add_option("--y", o.y, "diagonal of Y, rationals or re:im")->delimiter(',');

  auto* orc = app.add_subcommand("oracle", "exact partition function as a series in 1/x");
  orc->add_option("--grading", o.grading, "model grading p,q");
  orc->add_option("--sources", o.sources, "m,n");
  orc->add_option("--hbar", o.hbar, "rational ħ");
  orc->add_option("--y", o.y, "diagonal of Y")->delimiter(',');
  orc->add_option("--x", o.x, "source values to evaluate at")->delimiter(',');
  orc->add_option("--order", o.order, "truncation order")->check(CLI::Range(0, 15));

  auto* cur = app.add_subcommand("curve", "rational spectral curve and residue report");
  cur->add_option("--spec", o.spec, "curve spec: JSON file or inline JSON");
  cur->add_flag("--eext", o.eext, "also eliminate z to a polynomial curve");
  cur->add_option("--tol", o.residue_tol, "residue tolerance");

  auto* inv = app.add_subcommand("invariants", "free energies F_0..F_g");
  inv->add_option("--spec", o.spec, "curve spec: JSON file or inline JSON");
  inv->add_option("--g-max", o.g_max, "highest genus");

  auto* dua = app.add_subcommand("duality", "compare F_g on a curve and its x-y exchange");
  dua->add_option("--spec", o.spec, "curve spec: JSON file or inline JSON");
  dua->add_option("--random", o.random, "number of random specs when no --spec is given");
  dua->add_option("--tol", o.tol, "tolerance on |ΔF_g|");
  dua->add_option("--g-max", o.g_max, "highest genus");
  dua->add_flag("--no-oracle", o.no_oracle, "skip the exact partition-function ratio");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << app.help();
    return 2;
  }

  const Log log(err);
  Json result;
  auto fail = [&](int code, const std::string& kind, const std::string& message) {
    err << "error: " << message << "\n";
    const Json doc{{"error", {{"kind", kind}, {"message", message}}}};
    try {
      emit(doc, o, out);
    } catch (const UsageError&) {
      out << canonical(doc);
    }
    return code;
  };
  try {
    int code = 0;
    if (*mom) code = moments(o, result, log);
    if (*orc) code = oracle(o, result, log);
    if (*cur) code = curve(o, result, log);
    if (*inv) code = invariants(o, result, log);
    if (*dua) code = duality(o, result, log);
    emit(result, o, out);
    return code;
  } catch (const UsageError& e) {
    return fail(2, "usage", e.what());
  } catch (const Error& e) {
    const bool usage = e.kind() == "invalid_argument" || e.kind() == "cap_exceeded" || e.kind() == "size_mismatch";
    return fail(usage ? 2 : 1, e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail(1, "internal", e.what());
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace superloop::cli
