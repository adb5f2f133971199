#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "superloop/supermatrix.hpp"

namespace superloop {

inline constexpr int kMaxStarSlots = 12;

/// Trace vertices with valencies n_1..n_d and a partial pairing of the
/// N = Σ n_k half-edge slots. Slot s of vertex k carries the factor
/// M_{i_s i_{s+1}} of str M^{n_k} (cyclically within the vertex).
struct FatgraphStar {
  std::vector<int> valencies;
  std::vector<int> partner;  // −1 for an unpaired slot

  int slot_count() const { return static_cast<int>(partner.size()); }
  int trace_count() const { return static_cast<int>(valencies.size()); }
  int unpaired_count() const;
  int vertex_of(int slot) const;
  int first_slot(int vertex) const;
  /// Next slot around the same trace vertex.
  int next_slot(int slot) const;
  void validate() const;
  friend bool operator==(const FatgraphStar&, const FatgraphStar&) = default;
};

/// Builds a star from 0-based slot pairs; remaining slots are unpaired.
FatgraphStar make_star(std::vector<int> valencies, const std::vector<std::pair<int, int>>& edges);

struct StarTopology {
  int vertices = 0;  // d + m
  int edges = 0;     // (N − m)/2 + m
  int faces = 0;
  std::vector<int> face_unpaired;  // m_i per face
  int components = 0;
  int genus = 0;  // Σ over connected components
  int euler_characteristic() const { return vertices + faces - edges; }
};

StarTopology euler_genus(const FatgraphStar& star);

/// Calls `emit` once per partial (or perfect) pairing, smallest free slot first.
void enumerate_stars(const std::vector<int>& valencies, bool allow_unpaired,
                     const std::function<void(const FatgraphStar&)>& emit);
std::vector<FatgraphStar> all_stars(const std::vector<int>& valencies, bool allow_unpaired);

/// Sign of the graded permutation that brings each paired half-edge next to
/// its partner (pairs ordered by first slot, then unpaired half-edges in
/// order). Half-edge s is labelled (labels[2s], labels[2s+1]) with 0-based
/// indices and has degree ε(i)+ε(j).
int pairing_sign(const std::vector<int>& labels, const std::vector<int>& partner, const Grading& g);

/// W of a general ribbon graph: edge (a<b) → ħσ(j_a)δ_{i_a j_b}δ_{j_a i_b},
/// half-edge → ħY_{ij}, times the graded permutation sign.
struct RibbonWeight {
  int sign = 1;            // permutation sign times Π σ(j_a)
  bool deltas_hold = true; // every edge Kronecker delta is satisfied
  int hbar_power = 0;
  std::vector<std::pair<int, int>> y_factors;  // (i, j) of each unpaired half-edge
};
RibbonWeight ribbon_weight(const std::vector<int>& labels, const std::vector<int>& partner,
                           const Grading& g);

/// Σ c · ħ^e · Π p_k, with p_0 = ħ(p−q), p_k = ħ str Y^k kept formal.
class MomentPolynomial {
public:
  struct Key {
    int hbar_exponent = 0;
    std::vector<int> p;  // sorted multiset of p indices
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  using Terms = std::map<Key, Rational>;

  void add(Key key, const Rational& c);
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  MomentPolynomial& operator+=(const MomentPolynomial& o);
  friend bool operator==(const MomentPolynomial&, const MomentPolynomial&) = default;
  std::string str() const;

private:
  Terms terms_;
};

MomentPolynomial moment_polynomial(const std::vector<int>& valencies, int jobs = 1);
/// Only perfect pairings: the Y = 0 part.
MomentPolynomial moment_polynomial_perfect(const std::vector<int>& valencies);

ComplexRational specialize(const MomentPolynomial& poly, const Grading& g,
                           const std::vector<ComplexRational>& y, const Rational& hbar);

enum class WeightConvention {
  normalized,  // ⟨Π (1/ħ) str M^{n_k}⟩ with unpaired half-edges weighted Y
  raw,         // Σ σ(i_1) W(T) with unpaired half-edges weighted ħY
};

/// Direct index summation for one star.
ComplexRational star_indexsum(const FatgraphStar& star, const Grading& g,
                              const std::vector<ComplexRational>& y, const Rational& hbar,
                              WeightConvention convention = WeightConvention::normalized);
/// Σ over all partial pairings of star_indexsum.
ComplexRational moment_indexsum(const std::vector<int>& valencies, const Grading& g,
                                const std::vector<ComplexRational>& y, const Rational& hbar,
                                WeightConvention convention = WeightConvention::normalized);

/// str (ħY)^k for diagonal Y; k = 0 gives p − q.
ComplexRational str_power_of_field(const Grading& g, const std::vector<ComplexRational>& y,
                                   const Rational& hbar, int k);

}  // namespace superloop
