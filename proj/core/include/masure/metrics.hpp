#pragma once

#include <optional>
#include <vector>

#include "masure/masure.hpp"

namespace masure {

struct ThetaSpec {
  NormKind norm = NormKind::L1;
  SectorGermId germ;
};

struct XiSpec {
  ThetaSpec plus;   // positive germ
  ThetaSpec minus;  // negative germ
};

struct ConePair {
  VecQ u, uprime;
};

// x +_g u for u in the closed dominant cone: move by sign(g) * w_g u in the
// chart of the apartment containing x and g.
MasurePoint translate(const Masure& m, const MasurePoint& x, const SectorGermId& g, const VecQ& u);

struct DistanceResult {
  Rat value;
  ConePair witness;
};

// d_theta(x, x') = min |u| + |u'| over dominant pairs with x+u = x'+u',
// solved exactly piece-pair by piece-pair.
DistanceResult distance(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                        const ThetaSpec& theta);
Rat distance_mixed(const Masure& m, const MasurePoint& x, const MasurePoint& xp, const XiSpec& xi);

// Brute-force minimum over the (1/N)-lattice within a radius derived from a
// feasible pair; upper-bounds the exact distance.
Rat distance_oracle(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                    const ThetaSpec& theta, long resolution);

// Norm on root-apartment differences induced by d_theta.
Rat chart_norm(const Masure& m, const ThetaSpec& theta, const VecQ& diff);

struct RayExit {
  Rat time;  // T_{sigma u}(x)
  VecQ land;  // y_{sigma u}(x), a root-apartment point
};

// Least t >= 0 with x +_{sigma infinity} t u in the root apartment; u must be
// in the open chamber.
RayExit ray_exit(const Masure& m, const MasurePoint& x, const VecQ& u, int sigma);

// Two-leg geodesic through the distance witness, evaluated at t in [0,1].
MasurePoint geodesic(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                     const ThetaSpec& theta, const Rat& t);

// The z-indexed family of geodesics from 0 to a root point outside the
// closed (anti)dominant cones; distinct z give distinct paths.
VecQ geodesic_family(const Masure& m, const VecQ& xprime, const ThetaSpec& theta, const Rat& z,
                     const Rat& t);

// Strong deformation retraction onto the root apartment and the contraction
// to the origin built from it.
MasurePoint chi(const Masure& m, const MasurePoint& x, const Rat& t, const VecQ& u);
MasurePoint upsilon(const Masure& m, const MasurePoint& x, const Rat& t, const VecQ& u);

struct EquivalenceReport {
  Rat empirical_forward;   // max d_theta2 / d_theta1
  Rat empirical_backward;  // max d_theta1 / d_theta2
  Rat apriori;             // composed per-step bound along a minimal gallery
  int gallery_length = 0;
};

EquivalenceReport equivalence_constant(const Masure& m, const ThetaSpec& t1, const ThetaSpec& t2,
                                       const std::vector<std::pair<MasurePoint, MasurePoint>>& samples);

struct DiscretenessLevel {
  int index = 0;
  int root = 0;  // table index of the branching root
  long level = 0;
  Rat d_plus;        // d_theta+(lambda_m, 0)
  Rat d_mixed;       // d_xi(lambda_m, 0)
  Rat rho_minus_l1;  // |rho_-infinity(lambda_m)|_1
  Rat mixed_lower;   // exact lower bound N_-(beta^vee) from 1-Lipschitz-ness
};

struct DiscretenessReport {
  bool building = false;
  Rat min_spacing;  // building case: least positive pairwise distance found
  std::vector<DiscretenessLevel> levels;
};

// Building case reports the lattice spacing; otherwise constructs lambda_m on
// walls of shrinking gap and reports the separating behaviour of d_+ vs d_xi.
DiscretenessReport discreteness_probe(Masure& m, const XiSpec& xi, int levels);

struct UPathReport {
  std::vector<std::pair<Rat, VecQ>> breakpoints;  // retracted image of the segment
  UPathCheck check;
  bool increment_ok = false;  // u - (pi(1) - pi(0)) in Q^vee_{R+}
  bool two_time_bound_ok = false;
};

// Retract the segment [x, x+u] (in x's chart) under rho_{-infinity} and check
// the u-path, increment, and two-time-bound properties.
UPathReport path_retract_check(const Masure& m, const MasurePoint& x, const VecQ& u);

// Exact norm-comparison constant max N_a / N_b over nonzero vectors.
Rat norm_ratio(const Masure& m, const ThetaSpec& a, const ThetaSpec& b);
// Exact Lipschitz constant of the linear reflection at the given tabled root
// with respect to the chart norm of theta.
Rat reflection_lipschitz(const Masure& m, const ThetaSpec& theta, int root_idx);

bool is_dominant(const GcmRealization& g, const VecQ& u);
bool is_strictly_dominant(const GcmRealization& g, const VecQ& u);

}  // namespace masure
