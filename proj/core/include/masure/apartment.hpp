#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "masure/lp.hpp"
#include "masure/rootsys.hpp"

namespace masure {

enum class NormKind { L1, LInf };

Rat norm_eval(NormKind norm, const VecQ& v);
// Dual norm of a covector in closed form: the L1 dual is the sup-norm of the
// coefficient row and vice versa.
Rat dual_norm(NormKind norm, const VecQ& covector);

// Closed half-apartment D(beta, k) = { x : beta(x) + k >= 0 }.
struct HalfSpaceSpec {
  int root = 0;  // table index
  Rat level;
};

struct ApartmentContext {
  const GcmRealization& realization;
  const RealRootTable& table;
};

// Enclosure of a finite intersection of half-spaces over the tabled real
// roots: per root the tightest integer level containing the set. A single
// input (beta, k) comes back as (beta, ceil(k)). Throws EmptyFilter when the
// input intersection is empty (filters are nonempty by definition).
std::vector<HalfSpaceSpec> enclose(const ApartmentContext& ctx,
                                   const std::vector<HalfSpaceSpec>& halfspaces);

enum class Tristate { True, False, Unknown };

// Is y - x in the Tits cone? Descent gives True; the invariant-covector
// (root-string) certificate gives False; otherwise Unknown after max_steps.
Tristate tits_leq(const ApartmentContext& ctx, const VecQ& x, const VecQ& y, int max_steps = 200);

// Unique dominant representative of y - x; throws NotComparable when the
// descent does not certify x <= y.
VecQ vectorial_distance(const ApartmentContext& ctx, const VecQ& x, const VecQ& y,
                        int max_steps = 200);

// Dominant form of a single vector; nullopt when descent fails to converge.
std::optional<VecQ> dominant_representative(const GcmRealization& g, VecQ v, int max_steps = 200);

// Least-height root whose consecutive true walls are closer than eps in the
// given norm, with the achieved gap 1/||beta||*. Throws HeightBoundExhausted.
std::pair<int, Rat> find_dense_direction(const ApartmentContext& ctx, const Rat& eps,
                                         NormKind norm);

struct UPathCheck {
  bool is_u_path = false;
  bool undecided = false;  // some velocity's orbit membership timed out
};

// Breakpoints (t_i, p_i) of a piecewise-linear path; each segment velocity
// must lie in the W^v-orbit of u.
UPathCheck is_u_path(const ApartmentContext& ctx,
                     const std::vector<std::pair<Rat, VecQ>>& breakpoints, const VecQ& u,
                     int max_steps = 200);

// Vertices of { v : rows hold } for small dimension; exact enumeration by
// basis intersection. Rows are (covector, rel, rhs) as lp::Row over v.
std::vector<VecQ> polytope_vertices(const std::vector<lp::Row>& rows, int dim);

}  // namespace masure
