#include "superloop/curve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "poly.hpp"
#include "series.hpp"

namespace superloop {

namespace {

constexpr double kCollision = 1e-8;
constexpr int kMaxBackoff = 40;

using VectorC = Eigen::VectorXcd;
using MatrixC = Eigen::MatrixXcd;
using namespace detail;

double scale_of(const CurveSpec& spec) {
  double s = 1;
  for (const auto& src : spec.sources) s = std::max(s, std::abs(src.x));
  for (const auto& f : spec.fields) s = std::max(s, std::abs(f.y));
  return s;
}

struct NewtonSystem {
  const CurveSpec& spec;
  int ns, nf;

  // layout: ξ (ns), η (nf), α (ns), β (nf)
  VectorC residual(const VectorC& v) const {
    VectorC f(2 * (ns + nf));
    for (int i = 0; i < ns; ++i) {
      const Complex xi = v(i);
      Complex x = xi, xp = 1.0;
      for (int j = 0; j < nf; ++j) {
        const Complex d = xi - v(ns + j);
        x += v(2 * ns + nf + j) / d;
        xp -= v(2 * ns + nf + j) / (d * d);
      }
      f(i) = x - spec.sources[i].x;
      f(ns + nf + i) = v(ns + nf + i) * xp - spec.hbar * spec.sources[i].a;
    }
    for (int j = 0; j < nf; ++j) {
      const Complex eta = v(ns + j);
      Complex y = eta, yp = 1.0;
      for (int i = 0; i < ns; ++i) {
        const Complex d = eta - v(i);
        y -= v(ns + nf + i) / d;
        yp += v(ns + nf + i) / (d * d);
      }
      f(ns + j) = y - spec.fields[j].y;
      f(2 * ns + nf + j) = v(2 * ns + nf + j) * yp - spec.hbar * spec.fields[j].b;
    }
    return f;
  }

  MatrixC jacobian(const VectorC& v) const {
    const int n = 2 * (ns + nf);
    MatrixC jac = MatrixC::Zero(n, n);
    const int ia = ns + nf, ib = 2 * ns + nf;
    for (int i = 0; i < ns; ++i) {
      Complex xp = 1.0, xpp = 0.0;
      const Complex alpha = v(ia + i);
      for (int j = 0; j < nf; ++j) {
        const Complex d = v(i) - v(ns + j), beta = v(ib + j);
        xp -= beta / (d * d);
        xpp += 2.0 * beta / (d * d * d);
        jac(i, ns + j) = beta / (d * d);
        jac(i, ib + j) = 1.0 / d;
        jac(ia + i, ns + j) = -2.0 * alpha * beta / (d * d * d);
        jac(ia + i, ib + j) = -alpha / (d * d);
      }
      jac(i, i) = xp;
      jac(ia + i, i) = alpha * xpp;
      jac(ia + i, ia + i) = xp;
    }
    for (int j = 0; j < nf; ++j) {
      Complex yp = 1.0, ypp = 0.0;
      const Complex beta = v(ib + j);
      for (int i = 0; i < ns; ++i) {
        const Complex d = v(ns + j) - v(i), alpha = v(ia + i);
        yp += alpha / (d * d);
        ypp -= 2.0 * alpha / (d * d * d);
        jac(ns + j, i) = -alpha / (d * d);
        jac(ns + j, ia + i) = -1.0 / d;
        jac(ib + j, i) = 2.0 * beta * alpha / (d * d * d);
        jac(ib + j, ia + i) = beta / (d * d);
      }
      jac(ns + j, ns + j) = yp;
      jac(ib + j, ns + j) = beta * ypp;
      jac(ib + j, ib + j) = yp;
    }
    return jac;
  }
};

double max_abs(const VectorC& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

void check_collisions(const std::vector<Complex>& pts, const char* what) {
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = a + 1; b < pts.size(); ++b)
      if (std::abs(pts[a] - pts[b]) < kCollision) throw DegenerateCurve(std::string(what) + " points collide");
}

RationalFunction pole_function(const std::vector<Complex>& poles, const std::vector<Complex>& residues,
                               double sign) {
  RationalFunction f;
  for (std::size_t k = 0; k < poles.size(); ++k) {
    if (residues[k] == 0.0) continue;  // ħ = 0 leaves no pole
    f.poles.push_back(poles[k]);
    f.residues.push_back(sign * residues[k]);
  }
  return f;
}

}  // namespace

void CurveSpec::validate() const {
  if (!(hbar >= 0) || !std::isfinite(hbar)) throw InvalidArgument("ħ must be a non-negative real");
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (sources[i].a == 0) throw InvalidArgument("source multiplicity must be nonzero");
    for (std::size_t k = 0; k < i; ++k)
      if (sources[k].x == sources[i].x) throw InvalidArgument("source points must be distinct");
  }
  for (std::size_t j = 0; j < fields.size(); ++j) {
    if (fields[j].b == 0) throw InvalidArgument("field multiplicity must be nonzero");
    for (std::size_t k = 0; k < j; ++k)
      if (fields[k].y == fields[j].y) throw InvalidArgument("field points must be distinct");
  }
}

int CurveSpec::source_charge() const {
  int s = 0;
  for (const auto& src : sources) s += src.a;
  return s;
}

int CurveSpec::field_charge() const {
  int s = 0;
  for (const auto& f : fields) s += f.b;
  return s;
}

Complex RationalFunction::operator()(Complex z) const {
  Complex v = slope * z + offset;
  for (std::size_t k = 0; k < poles.size(); ++k) v += residues[k] / (z - poles[k]);
  return v;
}

Complex RationalFunction::derivative(Complex z, int order) const {
  if (order < 1) return (*this)(z);
  Complex v = order == 1 ? slope : Complex(0.0);
  // d^n/dz^n r/(z−p) = (−1)^n n! r/(z−p)^{n+1}
  double fact = 1;
  for (int k = 2; k <= order; ++k) fact *= k;
  const double sign = order % 2 ? -1.0 : 1.0;
  for (std::size_t k = 0; k < poles.size(); ++k)
    v += sign * fact * residues[k] / std::pow(z - poles[k], order + 1);
  return v;
}

SpectralCurve solve_rational_curve(const CurveSpec& spec, const SolveOptions& options) {
  spec.validate();
  for (const auto& s : spec.sources)
    for (const auto& f : spec.fields)
      if (std::abs(s.x - f.y) < kCollision) throw DegenerateCurve("a source point coincides with a field point");

  const int ns = static_cast<int>(spec.sources.size());
  const int nf = static_cast<int>(spec.fields.size());
  NewtonSystem sys{spec, ns, nf};
  VectorC v(2 * (ns + nf));
  for (int i = 0; i < ns; ++i) {
    v(i) = spec.sources[i].x;
    v(ns + nf + i) = spec.hbar * spec.sources[i].a;
  }
  for (int j = 0; j < nf; ++j) {
    v(ns + j) = spec.fields[j].y;
    v(2 * ns + nf + j) = spec.hbar * spec.fields[j].b;
  }

  const double target = options.tol * scale_of(spec);
  VectorC f = sys.residual(v);
  double norm = max_abs(f);
  int it = 0;
  while (norm > target) {
    if (++it > options.max_iter) throw NoPerturbativeSolution("Newton did not converge");
    Eigen::FullPivLU<MatrixC> lu(sys.jacobian(v));
    if (!lu.isInvertible()) throw NoPerturbativeSolution("singular Newton Jacobian");
    const VectorC step = lu.solve(f);
    double lambda = 1;
    int backoff = 0;
    for (;; lambda *= 0.5) {
      const VectorC trial = v - lambda * step;
      const VectorC ft = sys.residual(trial);
      const double nt = max_abs(ft);
      if (std::isfinite(nt) && nt < norm) {
        v = trial;
        f = ft;
        norm = nt;
        break;
      }
      if (++backoff > kMaxBackoff) throw NoPerturbativeSolution("Newton step failed to reduce the residual");
    }
  }

  SpectralCurve curve;
  curve.spec = spec;
  curve.iterations = it;
  curve.residual = norm;
  for (int i = 0; i < ns; ++i) {
    curve.xi.push_back(v(i));
    curve.alpha.push_back(v(ns + nf + i));
  }
  for (int j = 0; j < nf; ++j) {
    curve.eta.push_back(v(ns + j));
    curve.beta.push_back(v(2 * ns + nf + j));
  }
  std::vector<Complex> all = curve.xi;
  all.insert(all.end(), curve.eta.begin(), curve.eta.end());
  check_collisions(all, "ξ/η");
  curve.x = pole_function(curve.eta, curve.beta, 1.0);
  curve.y = pole_function(curve.xi, curve.alpha, -1.0);
  return curve;
}

Complex residue_at(const RationalFunction& f, const RationalFunction& g, Complex z0, double tol) {
  auto find = [&](const RationalFunction& h) -> int {
    for (std::size_t k = 0; k < h.poles.size(); ++k)
      if (std::abs(h.poles[k] - z0) < tol) return static_cast<int>(k);
    return -1;
  };
  const int pf = find(f), pg = find(g);
  if (pf >= 0 && pg >= 0) throw InvalidArgument("f and g share a pole");
  if (pf >= 0) return f.residues[pf] * g.derivative(z0);  // r/(z−p) · g'(p)
  if (pg >= 0) return -g.residues[pg] * f.derivative(z0);  // f · (−r/(z−p)²)
  return 0.0;
}

Complex residue_at_infinity(const RationalFunction& f, const RationalFunction& g) {
  Complex rf = 0, rg = 0;
  for (const Complex& r : f.residues) rf += r;
  for (const Complex& r : g.residues) rg += r;
  // coefficient of 1/z in f g' is s_g Σr_f − s_f Σr_g
  return f.slope * rg - g.slope * rf;
}

ResidueReport residue_report(const SpectralCurve& curve) {
  const CurveSpec& s = curve.spec;
  const double total = s.hbar * (s.source_charge() + s.field_charge());
  ResidueReport rep;
  auto add = [&](std::string name, Complex expected, Complex actual) {
    const double err = std::abs(expected - actual);
    rep.max_error = std::max(rep.max_error, err);
    rep.checks.push_back({std::move(name), expected, actual, err});
  };
  add("res_inf_ydx", total, residue_at_infinity(curve.y, curve.x));
  add("res_inf_xdy", -total, residue_at_infinity(curve.x, curve.y));
  for (std::size_t i = 0; i < curve.xi.size(); ++i) {
    // α_i = 0 only at ħ = 0, where both sides vanish
    const Complex r = curve.alpha[i] == 0.0 ? Complex(0.0) : residue_at(curve.y, curve.x, curve.xi[i]);
    add("res_xi" + std::to_string(i + 1) + "_ydx", -s.hbar * s.sources[i].a, r);
  }
  for (std::size_t j = 0; j < curve.eta.size(); ++j) {
    const Complex r = curve.beta[j] == 0.0 ? Complex(0.0) : residue_at(curve.x, curve.y, curve.eta[j]);
    add("res_eta" + std::to_string(j + 1) + "_xdy", s.hbar * s.fields[j].b, r);
  }
  for (std::size_t i = 0; i < curve.xi.size(); ++i)
    add("x_at_xi" + std::to_string(i + 1), s.sources[i].x, curve.x(curve.xi[i]));
  for (std::size_t j = 0; j < curve.eta.size(); ++j)
    add("y_at_eta" + std::to_string(j + 1), s.fields[j].y, curve.y(curve.eta[j]));
  return rep;
}

ResidueReport verify_residue_data(const SpectralCurve& curve, double tol) {
  ResidueReport rep = residue_report(curve);
  for (const auto& c : rep.checks)
    if (!(c.error <= tol)) throw FailedCheck("residue check " + c.name + " off by " + std::to_string(c.error));
  return rep;
}

std::vector<BranchPoint> branch_points(const RationalFunction& x, double tol) {
  // numerator of x' = s Π(z−p)² − Σ_j r_j Π_{k≠j}(z−p_k)²
  Poly num = from_roots(x.poles, 2);
  for (Complex& c : num) c *= x.slope;
  for (std::size_t j = 0; j < x.poles.size(); ++j)
    num = poly_add(num, from_roots(x.poles, 2, static_cast<int>(j)), -x.residues[j]);
  std::vector<BranchPoint> out;
  for (Complex z : poly_roots(num)) {
    for (int it = 0; it < 4; ++it) {
      const Complex d2 = x.derivative(z, 2);
      if (std::abs(d2) == 0.0) break;
      const Complex step = x.derivative(z) / d2;
      z -= step;
      if (std::abs(step) <= 1e-16 * (1 + std::abs(z))) break;
    }
    double scale = 1;
    for (const Complex& p : x.poles) scale = std::max(scale, 1.0 / std::abs(z - p));
    if (std::abs(x.derivative(z, 2)) < tol * scale * scale * scale)
      throw NonSimpleBranchPoint("x'' vanishes at a zero of x'");
    for (const auto& b : out)
      if (std::abs(b.z - z) < tol) throw NonSimpleBranchPoint("repeated zero of x'");
    out.push_back({z, x(z)});
  }
  return out;
}

std::vector<BranchPoint> branch_points(const SpectralCurve& curve) { return branch_points(curve.x); }

Complex BivariatePolynomial::coefficient(int k, int l) const {
  if (k < 0 || l < 0 || k > deg_x || l > deg_y) return 0.0;
  return coefficients[k * (deg_y + 1) + l];
}

Complex BivariatePolynomial::operator()(Complex x, Complex y) const {
  Complex total = 0;
  for (int k = deg_x; k >= 0; --k) {
    Complex row = 0;
    for (int l = deg_y; l >= 0; --l) row = row * y + coefficient(k, l);
    total = total * x + row;
  }
  return total;
}

ExtendedCurve assemble_Eext(const SpectralCurve& curve, int samples, std::uint64_t seed) {
  const CurveSpec& s = curve.spec;
  const int ns = static_cast<int>(s.sources.size());
  const int nf = static_cast<int>(s.fields.size());
  const int dx = ns + 1, dy = nf + 1;
  const int unknowns = (dx + 1) * (dy + 1);

  std::vector<Complex> poles = curve.xi;
  poles.insert(poles.end(), curve.eta.begin(), curve.eta.end());
  double radius = 1;
  for (const Complex& p : poles) radius = std::max(radius, 1 + std::abs(p));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_point = [&]() {
    for (;;) {
      const Complex z(radius * unit(rng), radius * unit(rng));
      bool ok = std::abs(z) <= radius;
      for (const Complex& p : poles) ok = ok && std::abs(z - p) > 0.1;
      if (ok) return z;
    }
  };

  const int rows = std::max(3 * unknowns, 60);
  MatrixC a(rows, unknowns);
  std::vector<Complex> zs(rows);
  for (int r = 0; r < rows; ++r) {
    const Complex z = zs[r] = random_point();
    const Complex xv = curve.x(z), yv = curve.y(z);
    Complex xk = 1;
    for (int k = 0; k <= dx; ++k, xk *= xv) {
      Complex yl = 1;
      for (int l = 0; l <= dy; ++l, yl *= yv) a(r, k * (dy + 1) + l) = xk * yl;
    }
  }
  Eigen::VectorXd col_scale(unknowns);
  for (int c = 0; c < unknowns; ++c) {
    col_scale(c) = a.col(c).norm();
    if (col_scale(c) == 0) col_scale(c) = 1;
    a.col(c) /= col_scale(c);
  }
  Eigen::JacobiSVD<MatrixC> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  ExtendedCurve out;
  out.smallest_singular_value = sv(unknowns - 1) / sv(0);
  out.next_singular_value = unknowns > 1 ? sv(unknowns - 2) / sv(0) : 1.0;
  if (out.next_singular_value < 1e-9) throw FailedCheck("elimination rank failure: null space is not one-dimensional");

  VectorC v = svd.matrixV().col(unknowns - 1);
  for (int c = 0; c < unknowns; ++c) v(c) /= col_scale(c);
  const int lead_index = dx * (dy + 1) + nf;  // x^{S+1} y^F
  const Complex lead = v(lead_index);
  if (std::abs(lead) < 1e-300) throw FailedCheck("elimination rank failure: leading coefficient vanishes");

  // iterative refinement: residuals of the sampled equations in quad precision,
  // corrections from the double system with the leading coefficient held at 1
  auto wide_eval = [](const RationalFunction& f, const Number& z) {
    Number w = Number(f.slope.real(), f.slope.imag()) * z + Number(f.offset.real(), f.offset.imag());
    for (std::size_t k = 0; k < f.poles.size(); ++k)
      w += Number(f.residues[k].real(), f.residues[k].imag()) / (z - Number(f.poles[k].real(), f.poles[k].imag()));
    return w;
  };
  std::vector<std::vector<Number>> monomials(rows, std::vector<Number>(unknowns));
  for (int r = 0; r < rows; ++r) {
    const Number z(zs[r].real(), zs[r].imag());
    const Number xv = wide_eval(curve.x, z), yv = wide_eval(curve.y, z);
    Number xk = 1;
    for (int k = 0; k <= dx; ++k, xk *= xv) {
      Number yl = 1;
      for (int l = 0; l <= dy; ++l, yl *= yv) monomials[r][k * (dy + 1) + l] = xk * yl;
    }
  }
  std::vector<Number> coeff(unknowns);
  for (int c = 0; c < unknowns; ++c) {
    const Complex q = v(c) / lead;
    coeff[c] = Number(q.real(), q.imag());
  }
  coeff[lead_index] = 1;
  MatrixC rest(rows, unknowns - 1);
  for (int c = 0, k = 0; c < unknowns; ++c)
    if (c != lead_index) rest.col(k++) = a.col(c);
  const Eigen::ColPivHouseholderQR<MatrixC> qr(rest);
  for (int pass = 0; pass < 4; ++pass) {
    VectorC residual(rows);
    for (int r = 0; r < rows; ++r) {
      Number sum = 0;
      for (int c = 0; c < unknowns; ++c) sum += coeff[c] * monomials[r][c];
      residual(r) = Complex(static_cast<double>(sum.real()), static_cast<double>(sum.imag()));
    }
    const VectorC delta = qr.solve(-residual);
    for (int c = 0, k = 0; c < unknowns; ++c)
      if (c != lead_index) {
        const Complex d = delta(k++) / col_scale(c);
        coeff[c] += Number(d.real(), d.imag());
      }
  }
  out.e.deg_x = dx;
  out.e.deg_y = dy;
  for (const Number& c : coeff) out.e.coefficients.emplace_back(static_cast<double>(c.real()), static_cast<double>(c.imag()));

  for (int t = 0; t < samples; ++t) {
    const Complex z = random_point();
    out.sample_residual = std::max(out.sample_residual, std::abs(out.e(curve.x(z), curve.y(z))));
  }

  // structure: resolvent terms from E(x_i, y_j), then compare every coefficient
  std::vector<Complex> xs, ys;
  for (const auto& src : s.sources) xs.push_back(src.x);
  for (const auto& f : s.fields) ys.push_back(f.y);
  out.resolvent_terms.assign(ns, std::vector<Complex>(nf));
  const double h = s.hbar;
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nf; ++j) {
      const Complex denom = h * h * double(s.sources[i].a) * double(s.fields[j].b) *
                            poly_eval(from_roots(xs, 1, i), xs[i]) * poly_eval(from_roots(ys, 1, j), ys[j]);
      out.resolvent_terms[i][j] = denom == 0.0 ? Complex(0.0) : out.e(xs[i], ys[j]) / denom;
    }

  std::vector<Complex> model((dx + 1) * (dy + 1));
  auto accumulate = [&](const Poly& px, const Poly& py, Complex c) {
    for (std::size_t k = 0; k < px.size(); ++k)
      for (std::size_t l = 0; l < py.size(); ++l) model[k * (dy + 1) + l] += c * px[k] * py[l];
  };
  const Poly px = from_roots(xs), py = from_roots(ys);
  accumulate(poly_mul(px, {0.0, 1.0}), py, 1.0);
  accumulate(px, poly_mul(py, {0.0, 1.0}), -1.0);
  for (int i = 0; i < ns; ++i) accumulate(from_roots(xs, 1, i), py, -h * double(s.sources[i].a));
  for (int j = 0; j < nf; ++j) accumulate(px, from_roots(ys, 1, j), -h * double(s.fields[j].b));
  for (int i = 0; i < ns; ++i)
    for (int j = 0; j < nf; ++j)
      accumulate(from_roots(xs, 1, i), from_roots(ys, 1, j),
                 h * h * double(s.sources[i].a) * double(s.fields[j].b) * out.resolvent_terms[i][j]);
  double biggest = 0;
  for (const Complex& c : out.e.coefficients) biggest = std::max(biggest, std::abs(c));
  for (std::size_t c = 0; c < model.size(); ++c)
    out.structure_residual = std::max(out.structure_residual, std::abs(model[c] - out.e.coefficients[c]) / biggest);
  return out;
}

CurveSpec random_curve_spec(std::mt19937_64& rng, double max_hbar, int max_points) {
  std::uniform_real_distribution<double> coord(-3.0, 3.0), hbar(0.02, max_hbar);
  std::uniform_int_distribution<int> count(1, max_points), mult(1, 2), sign(0, 1);
  std::vector<Complex> used;
  auto fresh = [&]() {
    for (;;) {
      const Complex p(coord(rng), coord(rng));
      bool ok = true;
      for (const Complex& q : used) ok = ok && std::abs(p - q) > 1.0;
      if (ok) {
        used.push_back(p);
        return p;
      }
    }
  };
  CurveSpec s;
  s.hbar = hbar(rng);
  const int ns = count(rng), nf = count(rng);
  for (int i = 0; i < ns; ++i) s.sources.push_back({fresh(), sign(rng) ? mult(rng) : -mult(rng)});
  for (int j = 0; j < nf; ++j) s.fields.push_back({fresh(), sign(rng) ? mult(rng) : -mult(rng)});
  return s;
}

SpectralCurve swap_xy(const SpectralCurve& curve) {
  SpectralCurve out;
  out.spec.hbar = curve.spec.hbar;
  for (const auto& f : curve.spec.fields) out.spec.sources.push_back({f.y, -f.b});
  for (const auto& src : curve.spec.sources) out.spec.fields.push_back({src.x, -src.a});
  out.xi = curve.eta;
  out.eta = curve.xi;
  for (const Complex& b : curve.beta) out.alpha.push_back(-b);
  for (const Complex& a : curve.alpha) out.beta.push_back(-a);
  out.x = curve.y;
  out.y = curve.x;
  out.iterations = curve.iterations;
  out.residual = curve.residual;
  return out;
}

Complex large_z_defect(const SpectralCurve& curve, Complex z) {
  const CurveSpec& s = curve.spec;
  const Complex x = curve.x(z);
  return curve.y(z) - x + s.hbar * double(s.source_charge() + s.field_charge()) / x;
}

}  // namespace superloop
