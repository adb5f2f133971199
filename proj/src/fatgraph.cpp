#include "superloop/fatgraph.hpp"

#include <algorithm>
#include <array>
#include <future>
#include <numeric>
#include <sstream>

namespace superloop {

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

constexpr int kMaxIndexSumSize = 4;
constexpr int kMaxIndexSumSlots = 8;

int total_slots(const std::vector<int>& valencies) {
  int n = 0;
  for (int v : valencies) {
    if (v <= 0) throw InvalidArgument("valencies must be positive");
    n += v;
  }
  return n;
}

Rational rational_pow(const Rational& base, int e) {
  Rational r(1);
  const Rational b = e < 0 ? Rational(1) / base : base;
  for (int k = 0; k < std::abs(e); ++k) r *= b;
  return r;
}

}  // namespace

int FatgraphStar::unpaired_count() const {
  return static_cast<int>(std::count(partner.begin(), partner.end(), -1));
}

int FatgraphStar::vertex_of(int slot) const {
  int offset = 0;
  for (int k = 0; k < trace_count(); ++k) {
    if (slot < offset + valencies[k]) return k;
    offset += valencies[k];
  }
  throw IndexOutOfRange("slot out of range");
}

int FatgraphStar::first_slot(int vertex) const {
  int offset = 0;
  for (int k = 0; k < vertex; ++k) offset += valencies[k];
  return offset;
}

int FatgraphStar::next_slot(int slot) const {
  const int v = vertex_of(slot);
  const int start = first_slot(v);
  return start + (slot - start + 1) % valencies[v];
}

void FatgraphStar::validate() const {
  if (total_slots(valencies) != slot_count()) throw SizeMismatch("pairing length");
  for (int s = 0; s < slot_count(); ++s) {
    const int t = partner[s];
    if (t == -1) continue;
    if (t < 0 || t >= slot_count() || t == s || partner[t] != s) {
      throw InvalidArgument("pairing is not a fixpoint-free involution");
    }
  }
}

FatgraphStar make_star(std::vector<int> valencies, const std::vector<std::pair<int, int>>& edges) {
  FatgraphStar star;
  star.partner.assign(total_slots(valencies), -1);
  star.valencies = std::move(valencies);
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= star.slot_count() || b >= star.slot_count()) {
      throw IndexOutOfRange("edge slot out of range");
    }
    if (star.partner[a] != -1 || star.partner[b] != -1) throw InvalidArgument("slot paired twice");
    star.partner[a] = b;
    star.partner[b] = a;
  }
  star.validate();
  return star;
}

StarTopology euler_genus(const FatgraphStar& star) {
  star.validate();
  const int n = star.slot_count();
  const int d = star.trace_count();
  const int m = star.unpaired_count();
  StarTopology t;
  t.vertices = d + m;
  t.edges = (n - m) / 2 + m;

  // faces: cycles of (rotation ∘ pairing), unpaired slots fixed by the pairing
  std::vector<int> face_of(n, -1);
  for (int s = 0; s < n; ++s) {
    if (face_of[s] >= 0) continue;
    int unpaired = 0;
    for (int cur = s; face_of[cur] < 0;) {
      face_of[cur] = t.faces;
      if (star.partner[cur] == -1) ++unpaired;
      const int alpha = star.partner[cur] == -1 ? cur : star.partner[cur];
      cur = star.next_slot(alpha);
    }
    t.face_unpaired.push_back(unpaired);
    ++t.faces;
  }

  // components over trace vertices; leaves hang off their trace vertex
  UnionFind uf(d);
  for (int s = 0; s < n; ++s)
    if (star.partner[s] >= 0) uf.unite(star.vertex_of(s), star.vertex_of(star.partner[s]));
  std::map<int, std::array<int, 3>> per;  // root → (V, E, F)
  for (int k = 0; k < d; ++k) per[uf.find(k)][0] += 1;
  for (int s = 0; s < n; ++s) {
    auto& c = per[uf.find(star.vertex_of(s))];
    if (star.partner[s] == -1) {
      c[0] += 1;
      c[1] += 1;
    } else if (star.partner[s] > s) {
      c[1] += 1;
    }
  }
  std::vector<bool> face_seen(t.faces, false);
  for (int s = 0; s < n; ++s) {
    if (face_seen[face_of[s]]) continue;
    face_seen[face_of[s]] = true;
    per[uf.find(star.vertex_of(s))][2] += 1;
  }
  t.components = static_cast<int>(per.size());
  for (const auto& [root, c] : per) {
    const int chi = c[0] + c[2] - c[1];
    if ((2 - chi) % 2 != 0 || chi > 2) throw ConsistencyError("non-integer genus");
    t.genus += (2 - chi) / 2;
  }
  return t;
}

void enumerate_stars(const std::vector<int>& valencies, bool allow_unpaired,
                     const std::function<void(const FatgraphStar&)>& emit) {
  const int n = total_slots(valencies);
  if (n > kMaxStarSlots) throw CapExceeded("sum of valencies exceeds 12");
  FatgraphStar star{valencies, std::vector<int>(n, -1)};
  std::vector<bool> used(n, false);

  std::function<void(int)> rec = [&](int s) {
    while (s < n && used[s]) ++s;
    if (s == n) {
      emit(star);
      return;
    }
    used[s] = true;
    if (allow_unpaired) rec(s + 1);
    for (int t = s + 1; t < n; ++t) {
      if (used[t]) continue;
      used[t] = true;
      star.partner[s] = t;
      star.partner[t] = s;
      rec(s + 1);
      star.partner[s] = star.partner[t] = -1;
      used[t] = false;
    }
    used[s] = false;
  };
  rec(0);
}

std::vector<FatgraphStar> all_stars(const std::vector<int>& valencies, bool allow_unpaired) {
  std::vector<FatgraphStar> out;
  enumerate_stars(valencies, allow_unpaired, [&](const FatgraphStar& s) { out.push_back(s); });
  return out;
}

int pairing_sign(const std::vector<int>& labels, const std::vector<int>& partner, const Grading& g) {
  const int n = static_cast<int>(partner.size());
  if (static_cast<int>(labels.size()) != 2 * n) throw SizeMismatch("labels must be pairs (i, j)");
  std::vector<int> deg(n);
  for (int s = 0; s < n; ++s) deg[s] = (g.epsilon(labels[2 * s]) + g.epsilon(labels[2 * s + 1])) % 2;

  std::vector<int> order;
  for (int s = 0; s < n; ++s) {
    if (partner[s] > s) {
      order.push_back(s);
      order.push_back(partner[s]);
    }
  }
  for (int s = 0; s < n; ++s)
    if (partner[s] == -1) order.push_back(s);

  int parity = 0;
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (order[a] > order[b]) parity ^= deg[order[a]] & deg[order[b]];
  return parity ? -1 : 1;
}

RibbonWeight ribbon_weight(const std::vector<int>& labels, const std::vector<int>& partner,
                           const Grading& g) {
  RibbonWeight w;
  w.sign = pairing_sign(labels, partner, g);
  const int n = static_cast<int>(partner.size());
  for (int s = 0; s < n; ++s) {
    const int i = labels[2 * s], j = labels[2 * s + 1];
    if (partner[s] == -1) {
      w.hbar_power += 1;
      w.y_factors.emplace_back(i, j);
    } else if (partner[s] > s) {
      const int t = partner[s];
      w.hbar_power += 1;
      w.sign *= g.sigma(j);
      if (i != labels[2 * t + 1] || j != labels[2 * t]) w.deltas_hold = false;
    }
  }
  return w;
}

void MomentPolynomial::add(Key key, const Rational& c) {
  if (sgn(c) == 0) return;
  std::sort(key.p.begin(), key.p.end());
  auto [it, inserted] = terms_.try_emplace(std::move(key), c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

MomentPolynomial& MomentPolynomial::operator+=(const MomentPolynomial& o) {
  for (const auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

std::string MomentPolynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str();
    if (k.hbar_exponent) os << "*hbar^" << k.hbar_exponent;
    for (int p : k.p) os << "*p" << p;
  }
  return os.str();
}

namespace {

MomentPolynomial star_terms(const std::vector<FatgraphStar>& stars, std::size_t begin,
                            std::size_t end) {
  MomentPolynomial out;
  for (std::size_t k = begin; k < end; ++k) {
    const StarTopology t = euler_genus(stars[k]);
    out.add({t.edges - t.vertices - t.faces, t.face_unpaired}, Rational(1));
  }
  return out;
}

}  // namespace

MomentPolynomial moment_polynomial(const std::vector<int>& valencies, int jobs) {
  const std::vector<FatgraphStar> stars = all_stars(valencies, true);
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(stars.size())));
  if (jobs == 1) return star_terms(stars, 0, stars.size());
  std::vector<std::future<MomentPolynomial>> parts;
  const std::size_t chunk = (stars.size() + jobs - 1) / jobs;
  for (std::size_t b = 0; b < stars.size(); b += chunk) {
    parts.push_back(std::async(std::launch::async, star_terms, std::cref(stars), b,
                               std::min(stars.size(), b + chunk)));
  }
  MomentPolynomial out;
  for (auto& f : parts) out += f.get();
  return out;
}

MomentPolynomial moment_polynomial_perfect(const std::vector<int>& valencies) {
  const std::vector<FatgraphStar> stars = all_stars(valencies, false);
  return star_terms(stars, 0, stars.size());
}

ComplexRational str_power_of_field(const Grading& g, const std::vector<ComplexRational>& y,
                                   const Rational& hbar, int k) {
  if (static_cast<int>(y.size()) != g.size()) throw SizeMismatch("Y diagonal length");
  ComplexRational s;
  for (int i = 0; i < g.size(); ++i) {
    const ComplexRational term = pow(y[i], k);
    if (g.sigma(i) > 0) s += term; else s -= term;
  }
  return s * ComplexRational(rational_pow(hbar, k));
}

ComplexRational specialize(const MomentPolynomial& poly, const Grading& g,
                           const std::vector<ComplexRational>& y, const Rational& hbar_in) {
  Rational hbar = hbar_in;
  hbar.canonicalize();
  std::map<int, ComplexRational> p;
  ComplexRational out;
  for (const auto& [key, c] : poly.terms()) {
    ComplexRational term(c * rational_pow(hbar, key.hbar_exponent));
    for (int k : key.p) {
      auto it = p.find(k);
      if (it == p.end()) {
        // p_k = ħ str Y^k
        it = p.emplace(k, str_power_of_field(g, y, Rational(1), k) * ComplexRational(hbar)).first;
      }
      term *= it->second;
    }
    out += term;
  }
  return out;
}

ComplexRational star_indexsum(const FatgraphStar& star, const Grading& g,
                              const std::vector<ComplexRational>& y, const Rational& hbar_in,
                              WeightConvention convention) {
  star.validate();
  Rational hbar = hbar_in;
  hbar.canonicalize();
  if (g.size() > kMaxIndexSumSize) throw CapExceeded("index sum supports p+q <= 4");
  if (static_cast<int>(y.size()) != g.size()) throw SizeMismatch("Y diagonal length");
  const int n = star.slot_count();
  const bool raw = convention == WeightConvention::raw;

  // Index variable i_s per slot; slot s is labelled (i_s, i_{next(s)}).
  // Edge and diagonal-Y deltas identify variables; sum over the classes.
  UnionFind uf(n);
  for (int s = 0; s < n; ++s) {
    const int t = star.partner[s];
    if (t == -1) {
      uf.unite(s, star.next_slot(s));
    } else if (t > s) {
      uf.unite(s, star.next_slot(t));
      uf.unite(star.next_slot(s), t);
    }
  }
  std::vector<int> classes;
  std::vector<int> class_of(n);
  for (int s = 0; s < n; ++s) {
    const int r = uf.find(s);
    auto it = std::find(classes.begin(), classes.end(), r);
    class_of[s] = static_cast<int>(it - classes.begin());
    if (it == classes.end()) classes.push_back(r);
  }

  const int c = static_cast<int>(classes.size());
  const int size = g.size();
  std::vector<int> value(c, 0);
  std::vector<int> labels(2 * n);
  ComplexRational total;
  const ComplexRational h(hbar);
  for (;;) {
    for (int s = 0; s < n; ++s) {
      labels[2 * s] = value[class_of[s]];
      labels[2 * s + 1] = value[class_of[star.next_slot(s)]];
    }
    const RibbonWeight w = ribbon_weight(labels, star.partner, g);
    if (w.deltas_hold) {
      ComplexRational term(w.sign);
      for (int k = 0; k < w.hbar_power - static_cast<int>(w.y_factors.size()); ++k) term *= h;
      for (auto [i, j] : w.y_factors) {
        term *= y[i];  // i == j by construction
        if (raw) term *= h;
      }
      for (int v = 0; v < star.trace_count(); ++v) {
        if (g.sigma(labels[2 * star.first_slot(v)]) < 0) term = -term;
        if (!raw) term *= ComplexRational(Rational(1) / hbar);
      }
      total += term;
    }
    int k = 0;
    while (k < c && ++value[k] == size) value[k++] = 0;
    if (k == c) break;
  }
  return total;
}

ComplexRational moment_indexsum(const std::vector<int>& valencies, const Grading& g,
                                const std::vector<ComplexRational>& y, const Rational& hbar,
                                WeightConvention convention) {
  if (total_slots(valencies) > kMaxIndexSumSlots) throw CapExceeded("index sum supports N <= 8");
  ComplexRational total;
  enumerate_stars(valencies, true, [&](const FatgraphStar& s) {
    total += star_indexsum(s, g, y, hbar, convention);
  });
  return total;
}

}  // namespace superloop
