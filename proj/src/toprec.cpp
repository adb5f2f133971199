#include "superloop/toprec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <tuple>

#include "poly.hpp"
#include "series.hpp"

namespace superloop {

namespace {

using detail::Number;
using detail::Real;
using detail::magnitude;
using detail::Series;

constexpr int kMaxOrder = 6 * TopologicalRecursion::kMaxGenus - 2;  // pole order of ω_{3,1}
constexpr int kWidth = kMaxOrder - 1;
constexpr int kPrec = 34;  // smallest length the residues need

int max_order(int g, int n) { return 6 * g - 4 + 2 * n; }

Number wide(Complex z) { return {Real(z.real()), Real(z.imag())}; }
Complex narrow(Number z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

/// Taylor coefficients of f at a through order h.
std::vector<Number> taylor(const RationalFunction& f, Number a, int h) {
  std::vector<Number> c(h + 1, Number(0));
  c[0] = wide(f.slope) * a + wide(f.offset);
  if (h >= 1) c[1] = wide(f.slope);
  for (std::size_t j = 0; j < f.poles.size(); ++j) {
    const Number inv = Number(1) / (a - wide(f.poles[j]));
    const Number r = wide(f.residues[j]);
    Number p = inv;
    c[0] += r * p;
    for (int k = 1; k <= h; ++k) {
      p *= -inv;
      c[k] += r * p;
    }
  }
  return c;
}

Series from_coefficients(const std::vector<Number>& c, int lo, int hi) {
  Series s;
  s.lo = lo;
  s.hi = hi;
  s.c = c;
  return detail::trim(s);
}

/// Σ c_k s^k for s without constant term.
Series compose(const std::vector<Number>& c, const Series& s, int hi) {
  Series out = detail::monomial(c[0], 0, hi);
  Series p = detail::monomial(Number(1), 0, hi);
  for (std::size_t k = 1; k < c.size(); ++k) {
    p = detail::mul(p, s, hi);
    if (c[k] != Number(0)) out = detail::add(out, p, c[k]);
  }
  return out;
}

Series zeta_power(int k, int hi) { return detail::monomial(Number(1), k, hi); }

Series scaled(Series s, Real f) {
  for (auto& c : s.c) c *= f;
  return s;
}

/// Newton on x' in extended precision.
Number refine(const RationalFunction& x, Complex z0) {
  Number z = wide(z0);
  for (int it = 0; it < 6; ++it) {
    Number d1 = wide(x.slope), d2 = 0;
    for (std::size_t j = 0; j < x.poles.size(); ++j) {
      const Number inv = Number(1) / (z - wide(x.poles[j]));
      const Number r = wide(x.residues[j]);
      d1 -= r * inv * inv;
      d2 += 2.0L * r * inv * inv * inv;
    }
    if (d2 == Number(0)) break;
    const Number step = d1 / d2;
    z -= step;
    if (magnitude(step) <= Real(1e-32) * (1 + magnitude(z))) break;
  }
  return z;
}

/// Gaussian free energies of a single log pole of temperature t.
Complex gaussian_term(int g, Complex t) {
  switch (g) {
    case 0: return t * t / 2.0 * std::log(t) - 0.75 * t * t;
    case 1: return -std::log(t) / 12.0;
    case 2: return -1.0 / (240.0 * t * t);
    default: return 1.0 / (1008.0 * std::pow(t, 4));
  }
}

}  // namespace

/// Series live in w = ζ/ρ, with ρ half the distance to the nearest singularity,
/// so their coefficients stay of order one; the stored residues are in ζ.
struct TopologicalRecursion::Precise {
  std::vector<Number> branch;
  std::map<std::pair<int, int>, std::vector<Number>> fine;
};

struct TopologicalRecursion::Local {
  Real rho = 1;
  int nu = 0;
  std::vector<Number> r;     // Res kf_k u_i v_j
  std::vector<Number> bare;  // Res kf_k ω_{0,2}(z, z̄)
  std::vector<Number> dil;   // Res Φ u_i
  Number tau = 0;            // Res ω_{0,2}(z, z̄)/dx

  Number res(int k, int i, int j) const { return r[((k - 1) * nu + i) * nu + j]; }
};

namespace {

int local_index(int b, int m) { return b * kWidth + (m - 2); }

}  // namespace

Complex sheet_involution(const RationalFunction& x, Complex z, Complex a) {
  // numerator of x(w) − x(z): (s w + o − x(z)) Π(w − p) + Σ r_j Π_{k≠j}(w − p_k)
  using namespace detail;
  Poly num = poly_mul(from_roots(x.poles), {x.offset - x(z), x.slope});
  for (std::size_t j = 0; j < x.poles.size(); ++j)
    num = poly_add(num, from_roots(x.poles, 1, static_cast<int>(j)), x.residues[j]);
  std::vector<Complex> roots = poly_roots(num);
  if (roots.size() < 2) throw InvalidArgument("x has no second sheet");
  auto nearest = [&](Complex target) {
    return std::min_element(roots.begin(), roots.end(), [&](Complex p, Complex q) {
      return std::abs(p - target) < std::abs(q - target);
    });
  };
  roots.erase(nearest(z));
  if (roots.size() > 1) {
    double reach = std::numeric_limits<double>::infinity();
    for (const Complex& p : x.poles) reach = std::min(reach, std::abs(p - a));
    for (const auto& b : superloop::branch_points(x))
      if (std::abs(b.z - a) > 1e-9) reach = std::min(reach, std::abs(b.z - a));
    if (!(std::abs(z - a) < 0.5 * reach)) throw InvalidArgument("point outside the involution neighbourhood");
  }
  return *nearest(2.0 * a - z);
}

Complex CorrelatorForm::coefficient(const std::vector<int>& index) const {
  if (static_cast<int>(index.size()) != n) throw SizeMismatch("form index length");
  std::size_t flat = 0;
  for (int i : index) {
    if (i < 0 || i >= dim()) throw IndexOutOfRange("form index");
    flat = flat * dim() + i;
  }
  return coefficients[flat];
}

Complex CorrelatorForm::evaluate(const std::vector<Complex>& z) const {
  if (static_cast<int>(z.size()) != n) throw SizeMismatch("form takes " + std::to_string(n) + " points");
  const int d = dim(), w = max_order - 1;
  std::vector<std::vector<Complex>> basis(n, std::vector<Complex>(d));
  for (int k = 0; k < n; ++k)
    for (std::size_t b = 0; b < branch.size(); ++b) {
      const Complex inv = 1.0 / (z[k] - branch[b]);
      Complex p = inv;
      for (int m = 2; m <= max_order; ++m) basis[k][b * w + m - 2] = (p *= inv);
    }
  Complex total = 0;
  std::vector<int> idx(n, 0);
  for (std::size_t flat = 0; flat < coefficients.size(); ++flat) {
    if (coefficients[flat] != 0.0) {
      Complex t = coefficients[flat];
      for (int k = 0; k < n; ++k) t *= basis[k][idx[k]];
      total += t;
    }
    for (int k = n - 1; k >= 0; --k) {
      if (++idx[k] < d) break;
      idx[k] = 0;
    }
  }
  return total;
}

TopologicalRecursion::TopologicalRecursion(const SpectralCurve& curve) : TopologicalRecursion(curve.x, curve.y) {}

TopologicalRecursion::TopologicalRecursion(RationalFunction x, RationalFunction y)
    : x_(std::move(x)), y_(std::move(y)), branch_(superloop::branch_points(x_)), precise_(std::make_shared<Precise>()) {
  locals_.resize(branch_.size());
  for (auto& b : branch_) {
    precise_->branch.push_back(refine(x_, b.z));
    b.z = narrow(precise_->branch.back());
    b.x = x_(b.z);
    for (const Complex& p : y_.poles)
      if (std::abs(b.z - p) < 1e-8) throw DegenerateCurve("y has a pole at a branch point of x");
  }
}

const TopologicalRecursion::Local& TopologicalRecursion::local(int b) const {
  if (locals_[b]) return *locals_[b];
  auto L = std::make_shared<Local>();
  const Number a = precise_->branch[b];
  const auto& refined = precise_->branch;
  Real reach = -1;
  auto nearer = [&](const Number& p) {
    const Real d = magnitude(p - a);
    if (reach < 0 || d < reach) reach = d;
  };
  for (const Complex& p : x_.poles) nearer(wide(p));
  for (const Complex& p : y_.poles) nearer(wide(p));
  for (std::size_t c = 0; c < refined.size(); ++c)
    if (static_cast<int>(c) != b) nearer(refined[c]);
  const Real rho = reach > 0 ? reach / 2 : Real(1);
  L->rho = rho;

  const int hn = kPrec + 12;
  std::vector<Number> tx = taylor(x_, a, hn + 1);
  tx[0] = 0;
  tx[1] = 0;  // x'(a) = 0
  Real rk = 1, big = 0;
  for (auto& t : tx) {
    t *= rk;
    rk *= rho;
    big = std::max(big, magnitude(t));
  }
  std::vector<Number> dtx(hn + 1, Number(0));
  for (int k = 1; k <= hn + 1; ++k) dtx[k - 1] = Real(k) * tx[k];
  const Series w = zeta_power(1, hn);
  const Series xw = from_coefficients(tx, 0, hn);

  // Newton for x(a + ρs) = x(a + ρw), s = −w + O(w²)
  Series s = detail::monomial(Number(-1), 1, hn);
  const double tol = 1e-13 * static_cast<double>(big);
  for (int it = 0; it < 12; ++it) {
    Series g = detail::add(compose(tx, s, hn), xw, Number(-1));
    g = detail::drop_below(g, 3, tol);
    Series gp = detail::drop_below(compose(dtx, s, hn), 1, 0.0);
    Series step = detail::mul(g, detail::inverse(gp, hn), hn);
    s = detail::add(s, step, Number(-1));
    s.hi = hn;
    Real size = 0;
    for (const Number& c : step.c) size = std::max(size, magnitude(c));
    if (size == 0) break;
  }
  auto cap = [](Series t) {
    t.hi = std::min(t.hi, kPrec);
    return detail::trim(t);
  };
  const Series zeta = cap(w);
  s = cap(s);
  const Series sp = detail::derivative(s);
  const Series xp = cap(detail::drop_below(detail::derivative(xw), 1, 0.0));  // dx/dw
  std::vector<Number> ty = taylor(y_, a, kPrec);
  rk = 1;
  for (auto& t : ty) {
    t *= rk;
    rk *= rho;
  }
  const Series yl = from_coefficients(ty, 0, kPrec);
  Series dy = detail::add(yl, compose(ty, s, kPrec), Number(-1));
  dy = detail::drop_below(dy, 1, 0.0);
  const Series inv_denom = detail::inverse(scaled(detail::mul(dy, xp, kPrec), 2), kPrec);
  std::vector<Series> kf(kWidth + 1);
  Series sk = detail::monomial(Number(1), 0, kPrec);
  for (int k = 1; k <= kWidth; ++k) {
    sk = detail::mul(sk, s, kPrec);
    kf[k] = detail::mul(detail::add(zeta_power(k, kPrec), sk, Number(-1)), inv_denom, kPrec);
  }
  const Series phi = detail::integral(detail::mul(yl, xp, kPrec));
  const Series diff = detail::add(zeta, s, Number(-1));
  const Series bzzb = detail::mul(sp, detail::power(detail::inverse(diff, kPrec), 2, kPrec), kPrec);

  // u_i, v_i in w and the factor f_i that restores the ζ normalization
  const int nb = static_cast<int>(branch_.size());
  L->nu = nb * kWidth + kWidth;
  std::vector<Series> u(L->nu), v(L->nu);
  std::vector<Real> f(L->nu);
  for (int c = 0; c < nb; ++c) {
    const Number d = (refined[c] - a) / rho;
    const Series zu = c == b ? zeta : detail::add(detail::monomial(-d, 0, kPrec), zeta);
    const Series zv = c == b ? s : detail::add(detail::monomial(-d, 0, kPrec), s);
    const Series iu = detail::inverse(zu, kPrec), iv = detail::inverse(zv, kPrec);
    Series pu = iu, pv = iv;
    for (int m = 2; m <= kMaxOrder; ++m) {
      pu = detail::mul(pu, iu, kPrec);
      pv = detail::mul(pv, iv, kPrec);
      u[local_index(c, m)] = pu;
      v[local_index(c, m)] = detail::mul(pv, sp, kPrec);
      f[local_index(c, m)] = pow(rho, -m);
    }
  }
  // ω_{0,2}(z, z_j) and ω_{0,2}(z̄, z_j) with z_j expanded at a
  Series sm = detail::monomial(Number(1), 0, kPrec);
  for (int m = 2; m <= kMaxOrder; ++m) {
    u[nb * kWidth + m - 2] = scaled(zeta_power(m - 2, kPrec), m - 1);
    v[nb * kWidth + m - 2] = scaled(detail::mul(sm, sp, kPrec), m - 1);
    f[nb * kWidth + m - 2] = pow(rho, m - 2);
    sm = detail::mul(sm, s, kPrec);
  }

  // Res_ζ F(ζ) dζ = ρ Res_w F(ρw) dw, Kf_k = ρ^{k+1} kf_k, ω_{0,2}(z, z̄) = ρ^{−2} bzzb
  L->r.assign(static_cast<std::size_t>(kWidth) * L->nu * L->nu, Number(0));
  L->bare.assign(kWidth, Number(0));
  for (int k = 1; k <= kWidth; ++k) {
    const Real rk2 = pow(rho, k + 2);
    L->bare[k - 1] = pow(rho, k) * detail::residue_of_product(kf[k], bzzb);
    for (int i = 0; i < L->nu; ++i) {
      const Series ku = detail::mul(kf[k], u[i], kPrec);
      for (int j = 0; j < L->nu; ++j)
        L->r[((k - 1) * L->nu + i) * L->nu + j] = rk2 * f[i] * f[j] * detail::residue_of_product(ku, v[j]);
    }
  }
  L->dil.resize(L->nu);
  for (int i = 0; i < L->nu; ++i) L->dil[i] = rho * f[i] * detail::residue_of_product(phi, u[i]);
  L->tau = detail::residue_of_product(bzzb, detail::inverse(xp, kPrec));
  locals_[b] = L;
  return *L;
}

namespace {

/// Basis element of a form argument: branch point and pole order.
struct Slot {
  int b, m;
};

struct Fine {
  int max_order;
  int dim;
  const std::vector<Number>* c;
};

/// Entries of F(·, rest) as (local index, coefficient), rest given by slots.
std::vector<std::pair<int, Number>> first_argument(const Fine& f, const std::vector<Slot>& rest) {
  const int w = f.max_order - 1, d = f.dim;
  std::size_t offset = 0, stride = 1;
  for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
    if (it->m > f.max_order) return {};
    offset += stride * (it->b * w + it->m - 2);
    stride *= d;
  }
  std::vector<std::pair<int, Number>> out;
  for (int i = 0; i < d; ++i) {
    const Number c = (*f.c)[offset + stride * i];
    if (c != Number(0)) out.push_back({local_index(i / w, i % w + 2), c});
  }
  return out;
}

/// Entries of F(·, ·, rest) as (local i, local j, coefficient).
std::vector<std::tuple<int, int, Number>> first_two(const Fine& f, const std::vector<Slot>& rest) {
  const int w = f.max_order - 1, d = f.dim;
  std::size_t offset = 0, stride = 1;
  for (auto it = rest.rbegin(); it != rest.rend(); ++it) {
    if (it->m > f.max_order) return {};
    offset += stride * (it->b * w + it->m - 2);
    stride *= d;
  }
  std::vector<std::tuple<int, int, Number>> out;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const Number c = (*f.c)[offset + stride * (i * d + j)];
      if (c != Number(0)) out.push_back({local_index(i / w, i % w + 2), local_index(j / w, j % w + 2), c});
    }
  return out;
}

}  // namespace

const CorrelatorForm& TopologicalRecursion::omega(int g, int n) {
  if (g < 0 || n < 1 || 2 * g - 2 + n <= 0) throw InvalidArgument("ω_{g,n} needs 2g − 2 + n > 0");
  if (g > kMaxGenus || n > kMaxPoints) throw CapExceeded("ω_{g,n} is capped at g ≤ 3, n ≤ 3");
  return level(g, n);
}

Complex TopologicalRecursion::evaluate(int g, const std::vector<Complex>& z) {
  return omega(g, static_cast<int>(z.size())).evaluate(z);
}

const CorrelatorForm& TopologicalRecursion::level(int g, int n) {
  if (auto it = memo_.find({g, n}); it != memo_.end()) return it->second;
  if (2 * g + n > 2 * kMaxGenus + 1) throw CapExceeded("recursion depth beyond 2g + n = 7");
  const int nb = static_cast<int>(branch_.size());
  CorrelatorForm out;
  out.g = g;
  out.n = n;
  out.max_order = max_order(g, n);
  for (const auto& b : branch_) out.branch.push_back(b.z);
  const int w = out.max_order - 1, d = out.dim(), nj = n - 1;
  std::size_t count = 1;
  for (int k = 0; k < n; ++k) count *= d;
  std::vector<Number> fine(count, Number(0));

  // lower levels first; the maps keep references stable
  if (g >= 1 && !(g == 1 && n == 1)) level(g - 1, n + 1);
  for (int h = 0; h <= g; ++h)
    for (int i = 0; i <= nj; ++i) {
      if ((h == 0 && i == 0) || (h == g && i == nj)) continue;
      const int ln = 1 + i, rn = 1 + nj - i;
      if (2 * h - 2 + ln > 0) level(h, ln);
      if (2 * (g - h) - 2 + rn > 0) level(g - h, rn);
    }
  auto view = [&](int gg, int nn) {
    const CorrelatorForm& f = memo_.at({gg, nn});
    return Fine{f.max_order, f.dim(), &precise_->fine.at({gg, nn})};
  };

  std::size_t jcount = 1;
  for (int k = 0; k < nj; ++k) jcount *= d;
  std::vector<Slot> slots(nj);
  for (int a = 0; a < nb; ++a) {
    const Local& L = local(a);
    const int extra = nb * kWidth;
    for (std::size_t jflat = 0; jflat < jcount; ++jflat) {
      std::size_t rem = jflat;
      for (int k = nj - 1; k >= 0; --k) {
        const int idx = static_cast<int>(rem % d);
        rem /= d;
        slots[k] = {idx / w, idx % w + 2};
      }
      std::vector<Number> acc(w, Number(0));  // indexed by k − 1
      if (g >= 1) {
        if (g == 1 && n == 1) {
          for (int k = 1; k <= w; ++k) acc[k - 1] += L.bare[k - 1];
        } else {
          for (const auto& [i, j, c] : first_two(view(g - 1, n + 1), slots))
            for (int k = 1; k <= w; ++k) acc[k - 1] += c * L.res(k, i, j);
        }
      }
      for (int h = 0; h <= g; ++h)
        for (unsigned mask = 0; mask < (1u << nj); ++mask) {
          const int in = std::popcount(mask);
          if ((h == 0 && in == 0) || (h == g && in == nj)) continue;
          std::vector<Slot> left_rest, right_rest;
          for (int k = 0; k < nj; ++k) (mask >> k & 1 ? left_rest : right_rest).push_back(slots[k]);
          std::vector<std::pair<int, Number>> left, right;
          if (h == 0 && in == 1) {
            if (left_rest[0].b == a) left.push_back({extra + left_rest[0].m - 2, Number(1)});
          } else {
            left = first_argument(view(h, 1 + in), left_rest);
          }
          if (g - h == 0 && nj - in == 1) {
            if (right_rest[0].b == a) right.push_back({extra + right_rest[0].m - 2, Number(1)});
          } else {
            right = first_argument(view(g - h, 1 + nj - in), right_rest);
          }
          for (const auto& [i, ci] : left)
            for (const auto& [j, cj] : right) {
              const Number c = ci * cj;
              for (int k = 1; k <= w; ++k) acc[k - 1] += c * L.res(k, i, j);
            }
        }
      for (int k = 1; k <= w; ++k) fine[static_cast<std::size_t>(a * w + k - 1) * jcount + jflat] = acc[k - 1];
    }
  }
  out.coefficients.reserve(count);
  for (const Number& c : fine) out.coefficients.push_back(narrow(c));
  precise_->fine.emplace(std::make_pair(g, n), std::move(fine));
  return memo_.emplace(std::make_pair(g, n), std::move(out)).first->second;
}

Complex TopologicalRecursion::raw_free_energy(int g) {
  if (g < 0 || g > kMaxGenus) throw CapExceeded("free energies are capped at g ≤ 3");
  if (g == 0) return genus_zero();
  if (g == 1) return genus_one();
  const CorrelatorForm& w1 = level(g, 1);
  const std::vector<Number>& c = precise_->fine.at({g, 1});
  const int w = w1.max_order - 1;
  Number total = 0;
  for (std::size_t a = 0; a < branch_.size(); ++a) {
    const Local& L = local(static_cast<int>(a));
    for (std::size_t b = 0; b < branch_.size(); ++b)
      for (int m = 2; m <= w1.max_order; ++m) {
        const Number cm = c[b * w + m - 2];
        if (cm != Number(0)) total += cm * L.dil[local_index(static_cast<int>(b), m)];
      }
  }
  return narrow(total / Real(2 - 2 * g));
}

Complex TopologicalRecursion::pole_normalization(int g) const {
  if (g < 0 || g > kMaxGenus) throw CapExceeded("free energies are capped at g ≤ 3");
  Complex total = 0;
  for (std::size_t i = 0; i < y_.poles.size(); ++i) {
    const Complex t = y_.residues[i] * x_.derivative(y_.poles[i]);  // Res y dx
    if (t != 0.0) total += gaussian_term(g, t);
  }
  return total;
}

Complex TopologicalRecursion::free_energy(int g) { return raw_free_energy(g) + pole_normalization(g); }

Complex TopologicalRecursion::tau_variation(int k) const {
  if (k < 0 || k >= static_cast<int>(branch_.size())) throw IndexOutOfRange("branch point index");
  const Local& L = local(k);
  return narrow(L.tau);
}

}  // namespace superloop
