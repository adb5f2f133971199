#include <cmath>

#include "series.hpp"
#include "superloop/partition.hpp"
#include "superloop/toprec.hpp"

namespace superloop {

namespace {

using detail::Number;
using detail::Series;

Number wide(Complex z) { return {detail::Real(z.real()), detail::Real(z.imag())}; }
Complex narrow(Number z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

constexpr int kLocal = 12;

/// Laurent series of f at a finite point in w = z − p.
Series laurent(const RationalFunction& f, Complex p) {
  Series s;
  s.lo = 0;
  s.hi = kLocal;
  s.c.assign(kLocal + 1, Number(0));
  s.c[0] = wide(f.slope * p + f.offset);
  s.c[1] = wide(f.slope);
  Number polar = 0;
  bool has_pole = false;
  for (std::size_t j = 0; j < f.poles.size(); ++j) {
    if (std::abs(f.poles[j] - p) < 1e-12) {
      polar += wide(f.residues[j]);
      has_pole = true;
      continue;
    }
    const Number inv = Number(1) / (wide(p) - wide(f.poles[j]));
    Number q = wide(f.residues[j]) * inv;
    for (int k = 0; k <= kLocal; ++k) {
      s.c[k] += q;
      q *= -inv;
    }
  }
  if (has_pole) s = detail::add(detail::monomial(polar, -1, kLocal), s);
  return s;
}

/// f(1/w) = s/w + o + Σ_k r P^{k−1} w^k.
Series at_infinity(const RationalFunction& f) {
  Series s;
  s.lo = -1;
  s.hi = kLocal;
  s.c.assign(kLocal + 2, Number(0));
  s.c[0] = wide(f.slope);
  s.c[1] = wide(f.offset);
  for (std::size_t j = 0; j < f.poles.size(); ++j) {
    Number q = wide(f.residues[j]);
    for (int k = 1; k <= kLocal; ++k) {
      s.c[k + 1] += q;
      q *= wide(f.poles[j]);
    }
  }
  return s;
}

/// f'(1/w) = s − Σ_k r (k−1) P^{k−2} w^k.
Series derivative_at_infinity(const RationalFunction& f) {
  Series s;
  s.lo = 0;
  s.hi = kLocal;
  s.c.assign(kLocal + 1, Number(0));
  s.c[0] = wide(f.slope);
  for (std::size_t j = 0; j < f.poles.size(); ++j) {
    Number q = wide(f.residues[j]);
    for (int k = 2; k <= kLocal; ++k) {
      s.c[k] -= detail::Real(k - 1) * q;
      q *= wide(f.poles[j]);
    }
  }
  return s;
}

ComplexRational exact(Complex z) { return {Rational(z.real()), Rational(z.imag())}; }

}  // namespace

Complex TopologicalRecursion::bergman_tau_log() const {
  const double f = static_cast<double>(x_.poles.size());
  Complex v = f / 4.0 * std::log(x_.slope);
  for (std::size_t k = 0; k < branch_.size(); ++k) {
    for (const Complex& eta : x_.poles) v += std::log(branch_[k].z - eta) / 12.0;
    for (std::size_t l = k + 1; l < branch_.size(); ++l) v += std::log(branch_[k].z - branch_[l].z) / 12.0;
  }
  for (std::size_t j = 0; j < x_.poles.size(); ++j)
    for (std::size_t l = j + 1; l < x_.poles.size(); ++l) v -= 2.0 / 3.0 * std::log(x_.poles[j] - x_.poles[l]);
  return v;
}

Complex TopologicalRecursion::genus_one() const {
  Complex total = -0.5 * bergman_tau_log();
  for (const auto& b : branch_)
    total -= (std::log(y_.derivative(b.z)) - 0.5 * std::log(x_.derivative(b.z, 2))) / 24.0;
  return total;
}

Complex TopologicalRecursion::genus_zero() const {
  const RationalFunction& x = x_;
  const RationalFunction& y = y_;
  for (const Complex& e : x.poles)
    for (const Complex& p : y.poles)
      if (std::abs(e - p) < 1e-12) throw DegenerateCurve("x and y share a pole");

  // Φ = ∫ y dx = s_x s_y z²/2 + s_x o_y z + Σ λ_P ln(z − P) + Σ μ_P/(z − P)
  struct Pole {
    Complex z, lambda, mu;
  };
  std::vector<Pole> poles;
  for (std::size_t j = 0; j < x.poles.size(); ++j)
    poles.push_back({x.poles[j], -x.residues[j] * y.derivative(x.poles[j]), x.residues[j] * y(x.poles[j])});
  for (std::size_t i = 0; i < y.poles.size(); ++i)
    poles.push_back({y.poles[i], y.residues[i] * x.derivative(y.poles[i]), 0.0});
  auto phi_regular = [&](std::size_t self) {
    const Complex z = poles[self].z;
    Complex v = x.slope * y.slope * z * z / 2.0 + x.slope * y.offset * z;
    for (std::size_t k = 0; k < poles.size(); ++k)
      if (k != self) v += poles[k].lambda * std::log(z - poles[k].z) + poles[k].mu / (z - poles[k].z);
    return v;
  };

  Complex residues = 0, temperatures = 0;
  // ∞: ζ = 1/x, V = (s_y/2s_x) x² + y₀ x
  {
    const Series xi = at_infinity(x);
    const Series ydx = detail::mul(at_infinity(y), derivative_at_infinity(x), kLocal);
    const Complex t = -narrow(ydx.at(1));
    const Complex ratio = y.slope / x.slope;
    const Complex y0 = y.offset - ratio * x.offset;
    Series v = detail::mul(xi, xi, kLocal);
    for (auto& c : v.c) c *= wide(ratio / 2.0);
    v = detail::add(v, xi, wide(y0));
    residues += -narrow(detail::mul(v, ydx, kLocal).at(1));
    Complex x1 = 0;
    for (const Complex& q : x.residues) x1 += q;
    const Complex cv = ratio / 2.0 * x.offset * x.offset + y.slope * x1 + y0 * x.offset;
    temperatures += t * (-cv + t * std::log(x.slope));
  }
  // poles of x: ζ = 1/x, V = y(e) x
  for (std::size_t j = 0; j < x.poles.size(); ++j) {
    const Complex e = x.poles[j], q = x.residues[j], ye = y(e);
    const Series lx = laurent(x, e);
    const Series prod = detail::mul(detail::mul(lx, laurent(y, e), kLocal), detail::derivative(lx), kLocal);
    residues += ye * narrow(prod.at(-1));
    Complex xreg = x.slope * e + x.offset;
    for (std::size_t k = 0; k < x.poles.size(); ++k)
      if (k != j) xreg += x.residues[k] / (e - x.poles[k]);
    const Complex t = poles[j].lambda;
    temperatures += t * (phi_regular(j) - ye * xreg + t * std::log(q));
  }
  // poles of y: ζ = x − x(p), V = 0
  for (std::size_t i = 0; i < y.poles.size(); ++i) {
    const std::size_t self = x.poles.size() + i;
    const Complex t = poles[self].lambda;
    temperatures += t * (phi_regular(self) - t * std::log(x.derivative(y.poles[i])));
  }
  return -0.5 * residues + 0.5 * temperatures;
}

DualityReport duality_report(const CurveSpec& spec, int g_max, double tol, bool with_oracle) {
  if (g_max < 0 || g_max > TopologicalRecursion::kMaxGenus) throw CapExceeded("duality report is capped at g ≤ 3");
  const SpectralCurve e = solve_rational_curve(spec);
  const SpectralCurve swapped = swap_xy(e);
  const SpectralCurve direct = solve_rational_curve(swapped.spec);
  DualityReport rep;
  for (const Complex z : {Complex(1.7, 0.9), Complex(-2.3, 0.4), Complex(0.3, -3.1)}) {
    rep.swap_mismatch = std::max(rep.swap_mismatch, std::abs(direct.x(z) - swapped.x(z)));
    rep.swap_mismatch = std::max(rep.swap_mismatch, std::abs(direct.y(z) - swapped.y(z)));
  }
  TopologicalRecursion original(e), dual(direct);
  for (int g = 0; g <= g_max; ++g) {
    DualityRow row;
    row.g = g;
    row.original = original.free_energy(g);
    row.swapped = dual.free_energy(g);
    const Complex raw = original.raw_free_energy(g) - dual.raw_free_energy(g);
    // F_0 and F_1 carry logarithms, so only their real parts are branch-free
    row.delta = g >= 2 ? std::abs(row.original - row.swapped) : std::abs((row.original - row.swapped).real());
    row.raw_delta = g >= 2 ? std::abs(raw) : std::abs(raw.real());
    row.pass = row.delta < tol;
    rep.pass = rep.pass && row.pass;
    rep.rows.push_back(row);
  }

  if (!with_oracle) return rep;
  int m = 0, p = 0;
  bool eligible = spec.hbar > 0;
  for (const auto& s : spec.sources) {
    eligible = eligible && s.a > 0;
    m += s.a;
  }
  for (const auto& f : spec.fields) {
    eligible = eligible && f.b > 0;
    p += f.b;
  }
  if (!eligible || m < 1 || p < 1 || m > 2 || p > 2) return rep;
  std::vector<ComplexRational> xs, ys;
  for (const auto& s : spec.sources) xs.insert(xs.end(), s.a, exact(s.x));
  for (const auto& f : spec.fields) ys.insert(ys.end(), f.b, exact(f.y));
  const Rational hbar(spec.hbar);
  const int order = m * p;
  auto ratio = [&](const std::vector<ComplexRational>& xv, const std::vector<ComplexRational>& yv,
                   const Rational& dual_hbar) -> std::optional<ComplexRational> {
    const ComplexRational z = partition_oracle({m, 0}, {p, 0}, yv, hbar, order).evaluate(xv);
    const ComplexRational zd = partition_oracle({p, 0}, {m, 0}, xv, dual_hbar, order).evaluate(yv);
    if (zd.is_zero()) return std::nullopt;
    return z / zd;
  };
  std::vector<ComplexRational> xs2 = xs, ys2 = ys;
  for (auto& v : xs2) v += ComplexRational(1);
  for (auto& v : ys2) v += ComplexRational(Rational(1, 2));
  const auto l1 = ratio(xs, ys, hbar), l2 = ratio(xs2, ys2, hbar);
  const auto f1 = ratio(xs, ys, -hbar), f2 = ratio(xs2, ys2, -hbar);
  if (!l1 || !l2 || !f1 || !f2) return rep;
  rep.oracle.available = true;
  rep.oracle.order = order;
  rep.oracle.literal = *l1;
  rep.oracle.literal_shifted = *l2;
  rep.oracle.sign_flipped = *f1;
  rep.oracle.sign_flipped_shifted = *f2;
  rep.oracle.literal_constant = *l1 == *l2;
  rep.oracle.sign_flipped_constant = *f1 == *f2;
  return rep;
}

}  // namespace superloop
