#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "masure/linalg.hpp"

namespace masure {

// Generalized Cartan matrix with a rational realization: simple coroots are
// the first n standard basis vectors of Q^d, simple roots are covectors on
// Q^d, and d = n + corank(C) so the simple roots stay independent even for
// singular C.
class GcmRealization {
 public:
  // Throws Error(ViolatesGcmAxioms) naming the failing axiom and entry.
  static GcmRealization validate(const std::vector<std::vector<long>>& matrix);

  int rank() const { return n_; }
  int dim() const { return d_; }
  long cartan(int i, int j) const { return cartan_[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
  const VecQ& simple_root(int i) const { return simple_roots_[static_cast<size_t>(i)]; }
  const VecQ& simple_coroot(int i) const { return simple_coroots_[static_cast<size_t>(i)]; }

  // Covector of a root given by integer coordinates in the simple-root basis.
  VecQ root_covector(const std::vector<long>& coords) const;
  // Matrix of the simple reflection r_i(v) = v - alpha_i(v) alpha_i^vee.
  const MatQ& simple_reflection(int i) const { return refl_[static_cast<size_t>(i)]; }

  // A rational point in the open fundamental chamber (alpha_i = 1 for all i).
  const VecQ& chamber_interior_point() const { return interior_; }
  // W^v-invariant covectors delta with delta >= 0 on the chamber, nonzero only
  // when C is singular with a signed kernel (e.g. affine type). Used as a
  // non-membership certificate for the Tits cone.
  const std::vector<VecQ>& radical_covectors() const { return radical_; }

  bool operator==(const GcmRealization& o) const {
    return cartan_ == o.cartan_;
  }

 private:
  int n_ = 0, d_ = 0;
  std::vector<std::vector<long>> cartan_;
  std::vector<VecQ> simple_roots_;    // covectors, length d
  std::vector<VecQ> simple_coroots_;  // vectors, length d
  std::vector<MatQ> refl_;
  VecQ interior_;
  std::vector<VecQ> radical_;
};

// Preset matrices: "a1", "affine-a1", "hyp23".
std::vector<std::vector<long>> preset_matrix(const std::string& name);

struct RealRoot {
  std::vector<long> coords;  // integer coordinates in the simple-root basis
  VecQ covector;             // length d
  VecQ coroot;               // beta^vee, length d
  bool positive = false;
  long height = 0;           // sum of |coords|
};

// Real roots of height <= H: the breadth-first closure of {+-alpha_i} under
// simple reflections, in deterministic (height, lex coords) order.
class RealRootTable {
 public:
  RealRootTable(const GcmRealization& realization, long height_bound);

  long height_bound() const { return height_bound_; }
  int size() const { return static_cast<int>(roots_.size()); }
  const RealRoot& root(int idx) const { return roots_[static_cast<size_t>(idx)]; }
  // Indices of positive roots, (height, lex) order; FoldingLetter root ids and
  // point literals index into this list.
  const std::vector<int>& positive() const { return positive_; }
  int positive_root(int pos_idx) const;

  std::optional<int> find(const std::vector<long>& coords) const;
  int negation(int idx) const;
  // Whether the underlying root system saturated below the height bound
  // (finite root system, hence finite Weyl group).
  bool saturated() const { return saturated_; }

 private:
  long height_bound_;
  std::vector<RealRoot> roots_;
  std::vector<int> positive_;
  std::map<std::vector<long>, int> index_;
  bool saturated_ = false;
};

// Covector action of r_j on root coordinates: only coordinate j changes.
std::vector<long> reflect_root_coords(const GcmRealization& g, int j, std::vector<long> coords);
long root_height(const std::vector<long>& coords);
// all coords >= 0 (at least one > 0) -> +1; all <= 0 -> -1.
int root_sign(const std::vector<long>& coords);

// An element of W^v as its canonical (lexicographically least) reduced word
// together with the cached d x d action matrix.
class WeylWord {
 public:
  WeylWord() = default;
  const std::vector<int>& word() const { return word_; }
  const MatQ& matrix() const { return matrix_; }
  int length() const { return static_cast<int>(word_.size()); }
  bool operator==(const WeylWord& o) const { return matrix_ == o.matrix_; }

 private:
  friend WeylWord weyl_reduce(const GcmRealization&, const std::vector<int>&);
  std::vector<int> word_;
  MatQ matrix_;
};

// Reduce by the descent criterion: l(r_i w) < l(w) iff w^{-1} alpha_i < 0.
// Greedy smallest descent yields the lexicographically least reduced word.
WeylWord weyl_reduce(const GcmRealization& g, const std::vector<int>& word);

VecQ weyl_act(const GcmRealization& g, const std::vector<int>& word, const VecQ& v);
// Affine action: w(v) + translation.
VecQ weyl_act_affine(const GcmRealization& g, const std::vector<int>& word, const VecQ& translation,
                     const VecQ& v);

// w^{-1} . beta in root coordinates (covector action along the word).
std::vector<long> word_inverse_on_root(const GcmRealization& g, const std::vector<int>& word,
                                       std::vector<long> coords);

// A sector-germ of the root apartment: a sign and a canonical reduced word.
// (+, e) is +infinity, (-, e) is -infinity.
struct SectorGermId {
  int sign = +1;  // +1 or -1
  WeylWord word;

  static SectorGermId make(const GcmRealization& g, int sign, const std::vector<int>& w);
  bool operator==(const SectorGermId& o) const { return sign == o.sign && word == o.word; }
};

// +1 if beta > 0 on the germ's direction cone w (sign C_f), i.e.
// sign * w^{-1} beta is positive; never 0. Throws RootOutsideTable when
// w^{-1} beta has height beyond the table bound.
int germ_side(const GcmRealization& g, const RealRootTable& table, int root_idx,
              const SectorGermId& germ);

// Longest element of a finite Weyl group (table must be saturated).
WeylWord longest_element(const GcmRealization& g, const RealRootTable& table);

// For finite W^v rewrites a negative germ as the equal positive germ
// (sigma, w) -> (+, w w_0); identity for infinite W^v or positive germs.
SectorGermId germ_canonical_signed(const GcmRealization& g, const RealRootTable& table,
                                   const SectorGermId& germ);

}  // namespace masure
