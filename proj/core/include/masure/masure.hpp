#pragma once

#include <map>
#include <memory>
#include <optional>
#include <vector>

#include "masure/apartment.hpp"
#include "masure/rootsys.hpp"

namespace masure {

// One gluing step: the child apartment shares the closed half {beta + k >= 0}
// with its parent. beta is a positive tabled root, so the germ +infinity lies
// in every registered apartment; k is integral (true walls only).
struct FoldingLetter {
  int root_pos = 0;  // index into RealRootTable::positive()
  long level = 0;
  int sheet = 1;  // 1 .. thickness-1

  auto operator<=>(const FoldingLetter&) const = default;
};

using Word = std::vector<FoldingLetter>;

struct MasureConfig {
  int thickness = 2;
  int max_depth = 6;
};

// A point of the branched masure: an apartment id plus exact coordinates.
struct MasurePoint {
  int apartment = 0;
  VecQ coords;

  bool operator==(const MasurePoint& o) const {
    return apartment == o.apartment && vec_cmp(coords, o.coords) == 0;
  }
};

// Closed affine constraint cov . c >= rhs in chart coordinates.
struct ChartIneq {
  VecQ covector;
  Rat rhs;
};

// One region of an unfolded chart: host apartment, the affine map from chart
// coordinates to coordinate labels, and the closed region it covers.
struct ChartPiece {
  std::vector<ChartIneq> region;
  int host = 0;        // apartment whose chart canonically holds the points
  AffineMap to_labels;  // chart coords -> label coords
};

struct UnfoldedChart {
  SectorGermId germ;
  MasurePoint anchor;
  VecQ anchor_position;  // chart coordinates of the anchor (= retract value)
  std::vector<ChartPiece> pieces;  // piece 0 covers the germ
};

struct SundialHalf {
  HalfSpaceSpec half;   // in the split apartment's labels
  int resident = 0;     // apartment holding the half's own points
  UnfoldedChart chart;  // the apartment containing this half together with g
};

struct SplitPiece {
  std::vector<ChartIneq> region;  // in the split apartment's labels
  AffineMap fold;                 // labels -> chart coordinates of the host
  int witness_resident = 0;       // canonical apartment of an interior witness
};

class Masure {
 public:
  Masure(const GcmRealization& realization, const RealRootTable& table, MasureConfig config);

  const GcmRealization& realization() const { return *realization_; }
  const RealRootTable& table() const { return *table_; }
  const MasureConfig& config() const { return config_; }
  ApartmentContext apartment_context() const { return {*realization_, *table_}; }

  int root_apartment() const { return 0; }
  int apartment_count() const { return static_cast<int>(apartments_.size()); }
  const Word& word(int apartment) const;
  int depth(int apartment) const;
  int parent(int apartment) const;

  // Registers (or finds) the child of `parent` across the true wall
  // (beta, level) on the given sheet. Errors: NotTrueWall, SheetOutOfRange,
  // DepthExceeded, FrozenRegistry, RootOutsideTable.
  int branch(int parent, int root_pos, const Rat& level, int sheet);
  std::optional<int> find_word(const Word& w) const;
  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

  // Strips trailing letters whose glue half contains the coordinates; the
  // result is either in the root apartment or strictly private to its leaf.
  MasurePoint canonicalize(int apartment, VecQ coords) const;
  MasurePoint canonicalize(const MasurePoint& p) const { return canonicalize(p.apartment, p.coords); }
  bool points_equal(const MasurePoint& a, const MasurePoint& b) const;
  bool is_canonical(const MasurePoint& p) const;

  // Retraction onto the root apartment centered at g: walk leaf -> root and
  // reflect across each glue wall that is violated while the germ lies on the
  // other side.
  VecQ retract(const MasurePoint& x, const SectorGermId& g) const;

  // The chart of the apartment containing x and g, with the piece list
  // refined so each piece's host is the canonical residence of its points.
  UnfoldedChart unfold(const MasurePoint& x, const SectorGermId& g) const;

  // Point of x's unfolded apartment at the given chart position. Walk-exact;
  // throws ChartExit if the result fails the retract round-trip (a depth
  // bound artifact, logged by callers).
  MasurePoint chart_point(const MasurePoint& x, const SectorGermId& g, const VecQ& position) const;

  // Germ containment: every glue letter of the apartment has the germ on its
  // glue side.
  bool contains_germ(int apartment, const SectorGermId& g) const;

  // The unique pair of opposite half-apartments at the deepest separating
  // wall, each inside an apartment that also contains g. Errors: GermContained.
  std::pair<SundialHalf, SundialHalf> sundial_split(int apartment, const SectorGermId& g) const;

  // Covering of the apartment by convex pieces on which the retraction toward
  // g is a single affine map (each piece lies in a common apartment with g).
  std::vector<SplitPiece> split_apartment(int apartment, const SectorGermId& g) const;

  // Coxeter length of w1^{-1} w2; opposite signs are rejected unless the Weyl
  // group is finite (then signs normalize away). Errors: MixedSigns.
  int gallery_distance(const SectorGermId& a, const SectorGermId& b) const;

  // Gallery distance from g to the nearest germ of the apartment.
  int germ_distance_to_apartment(int apartment, const SectorGermId& g, int max_length = 16) const;

  struct Automorphism {
    WeylWord vectorial;  // w in W^v
    VecQ translation;    // integer vector in Y
    // sheet permutation per source wall (positive root table pos, level);
    // identity where absent. Permutations are 0-indexed over 1..t-1.
    std::map<std::pair<int, long>, std::vector<int>> sheet_perms;
  };

  // Transport of a point by (w, lambda) with sheet permutations: root
  // coordinates map through the affine map, folding letters through the wall
  // transport, renormalized to positive-root gluing. Errors:
  // WallImageOutsideTable, FrozenRegistry (image apartment not yet registered).
  MasurePoint automorphism_apply(const Automorphism& aut, const MasurePoint& x);
  SectorGermId automorphism_on_germ(const Automorphism& aut, const SectorGermId& g) const;

  // Per-letter side of the germ.
  int letter_side(const FoldingLetter& letter, const SectorGermId& g) const;

  // Which glue letters reflect in the retraction walk of x toward g.
  std::vector<bool> retraction_folds(const MasurePoint& x, const SectorGermId& g) const;

 private:
  struct Apartment {
    Word word;
    int parent = -1;
    int depth = 0;
  };

  struct WalkStep {
    bool fired = false;  // reflection applied at this letter
  };

  // Retraction walk leaf -> root; records which letters fired and the final
  // chart position.
  std::vector<WalkStep> walk(const MasurePoint& x, const SectorGermId& g, VecQ* chart_pos) const;

  const RealRoot& letter_root(const FoldingLetter& l) const;
  AffineMap letter_reflection(const FoldingLetter& l) const;

  std::shared_ptr<const GcmRealization> realization_;
  std::shared_ptr<const RealRootTable> table_;
  MasureConfig config_;
  std::vector<Apartment> apartments_;
  std::map<Word, int> index_;
  bool frozen_ = false;
};

}  // namespace masure
