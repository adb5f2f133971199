#include "superloop/loopcheck.hpp"

namespace superloop {

namespace {

constexpr int kMaxOrder = 8;

void check_order(int order) {
  if (order < 0) throw InvalidArgument("truncation order must be non-negative");
  if (order > kMaxOrder) throw CapExceeded("loop equation order above 8");
}

void check_grading(const PolyMatrix& x, Grading g) {
  if (x.grading().p != g.p || x.grading().q != g.q) throw SizeMismatch("matrix gradings differ");
}

/// (BM)^k for k = 0..order.
std::vector<PolyMatrix> powers_of(const PolyMatrix& bm, int order) {
  std::vector<PolyMatrix> out{PolyMatrix::identity(bm.grading(), SuperPoly(), SuperPoly(1))};
  for (int k = 1; k <= order; ++k) out.push_back(out.back() * bm);
  return out;
}

/// str(XY) without forming the off-diagonal entries of XY.
SuperPoly str_product(const PolyMatrix& x, const PolyMatrix& y) {
  const Grading g = x.grading();
  SuperPoly out;
  for (int i = 0; i < g.size(); ++i) {
    SuperPoly d;
    for (int j = 0; j < g.size(); ++j) d += x(i, j) * y(j, i);
    out += g.sigma(i) > 0 ? d : -d;
  }
  return out;
}

}  // namespace

SymbolicMatrix::SymbolicMatrix(Grading g, int first_generator) : m(g, SuperPoly()) {
  const int n = g.size();
  var.assign(n * n, -1);
  int bosons = 0, gens = first_generator;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (g.epsilon(i) == g.epsilon(j)) {
        if (bosons >= kMaxBosons) throw CapExceeded("too many even entries");
        var[i * n + j] = bosons;
        m(i, j) = SuperPoly::boson(bosons++);
      } else {
        if (gens >= 64) throw CapExceeded("too many Grassmann generators");
        var[i * n + j] = gens;
        m(i, j) = SuperPoly::fermion(gens++);
      }
    }
}

SuperPoly SymbolicMatrix::derivative(const SuperPoly& f, int i, int j) const {
  const Grading g = m.grading();
  const int n = g.size();
  if (i < 0 || j < 0 || i >= n || j >= n) throw IndexOutOfRange("matrix entry out of range");
  return g.epsilon(i) == g.epsilon(j) ? boson_derivative(f, var[i * n + j])
                                      : fermion_left_derivative(f, var[i * n + j]);
}

SuperPoly loop_operator(const PolyMatrix& g, const SymbolicMatrix& m) {
  const Grading gr = m.m.grading();
  check_grading(g, gr);
  SuperPoly k;
  for (int i = 0; i < gr.size(); ++i)
    for (int j = 0; j < gr.size(); ++j) {
      SuperPoly d = m.derivative(g(i, j), i, j);
      if (gr.sigma(i) * gr.sigma(j) < 0) d = -d;
      k += d;
    }
  return k;
}

std::vector<SuperPoly> split_rule_residual(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                                           const SymbolicMatrix& m, int order) {
  check_order(order);
  const Grading g = m.m.grading();
  check_grading(a, g);
  check_grading(b, g);
  check_grading(c, g);
  const auto p = powers_of(b * m.m, order);
  std::vector<SuperPoly> left, right;  // str(A (BM)^r B), str((BM)^r C)
  for (int r = 0; r < order; ++r) {
    left.push_back(str_product(a * p[r], b));
    right.push_back(str_product(p[r], c));
  }
  std::vector<SuperPoly> out;
  for (int k = 0; k <= order; ++k) {
    SuperPoly r = loop_operator(a * p[k] * c, m);
    for (int l = 1; l <= k; ++l) r -= left[l - 1] * right[k - l];
    out.push_back(r);
  }
  return out;
}

std::vector<SuperPoly> merge_rule_residual(const PolyMatrix& a, const PolyMatrix& b, const PolyMatrix& c,
                                           const SymbolicMatrix& m, int order) {
  check_order(order);
  const Grading g = m.m.grading();
  check_grading(a, g);
  check_grading(b, g);
  check_grading(c, g);
  const auto p = powers_of(b * m.m, order);
  // t_j = Σ_{a+b=j} (BM)^a C (BM)^b = (BM) t_{j−1} + C (BM)^j
  const PolyMatrix bm = b * m.m;
  std::vector<PolyMatrix> t{c};
  for (int j = 1; j < order; ++j) t.push_back(bm * t.back() + c * p[j]);
  std::vector<SuperPoly> out;
  for (int k = 0; k <= order; ++k) {
    SuperPoly r = loop_operator(str_product(p[k], c) * a, m);
    if (k >= 1) r -= str_product(a * t[k - 1], b);
    out.push_back(r);
  }
  return out;
}

bool SdReport::zero() const {
  for (const auto& r : residual)
    if (!r.is_zero()) return false;
  return true;
}

SdReport sd_residual(Grading g, const Rational& hbar, const std::vector<ComplexRational>& y, int order,
                     bool with_trace) {
  check_order(order);
  GaussianOracle oracle(g, hbar, y);
  const int n = g.size();
  const int top = order + 1;
  const SuperPoly one(1);
  const PolyMatrix& nm = oracle.matrix();

  // N^k and str N^k
  std::vector<PolyMatrix> pw{PolyMatrix::identity(g, SuperPoly(), one)};
  for (int k = 1; k <= top; ++k) pw.push_back(pw.back() * nm);

  // (I g) as coefficients of x^{−s}, s = 0..top
  std::vector<PolyMatrix> ig(top + 1, PolyMatrix(g, SuperPoly()));
  for (int k = 0; k + 1 <= top; ++k) {
    if (!with_trace) {
      ig[k + 1] = ig[k + 1] + pw[k];
      continue;
    }
    for (int l = 0; k + l + 2 <= top; ++l) ig[k + l + 2] = ig[k + l + 2] + str(pw[l]) * pw[k];
  }

  PolyMatrix ymat(g, SuperPoly());
  for (int i = 0; i < n && i < static_cast<int>(y.size()); ++i) ymat(i, i) = SuperPoly(y[i]);
  const ComplexRational inv_hbar(Rational(1) / hbar);

  SdReport rep;
  for (int s = 0; s <= top; ++s) {
    // g_ij = (I g)_ij / I_i; I_i = 1 or i, 1/i = −i
    SuperPoly k;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        SuperPoly gij = ig[s](i, j);
        if (g.sigma(i) < 0) gij = gij * -ComplexRational::i();
        SuperPoly d = oracle.derivative_m(gij, i, j);
        if (g.sigma(i) * g.sigma(j) < 0) d = -d;
        k += d;
      }
    const ComplexRational lhs = oracle.expectation_value(k);
    const ComplexRational quad = oracle.expectation_value(str(ig[s] * nm)) * inv_hbar;
    const ComplexRational src = -oracle.expectation_value(str(ig[s] * ymat)) * inv_hbar;
    rep.lhs.push_back(lhs);
    rep.quadratic.push_back(quad);
    rep.source.push_back(src);
    rep.residual.push_back(lhs - quad - src);
  }
  return rep;
}

}  // namespace superloop
