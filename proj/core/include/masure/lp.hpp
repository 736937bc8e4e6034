#pragma once

#include <variant>
#include <vector>

#include "masure/linalg.hpp"

namespace masure::lp {

enum class Rel { Le, Eq, Ge };

struct Row {
  VecQ a;
  Rel rel = Rel::Ge;
  Rat b;
};

// minimize c.z over free variables z subject to the rows.
struct Problem {
  int num_vars = 0;
  VecQ objective;
  std::vector<Row> rows;
};

struct Optimal {
  Rat value;
  VecQ witness;  // z
  VecQ dual;     // y per original row: sum y_i a_i = c, sign per relation
};
struct Infeasible {
  VecQ farkas;  // y with sum y_i a_i = 0, sum y_i b_i > 0, signs per relation
};
struct Unbounded {
  VecQ ray;  // feasible direction with c.ray < 0
};
using Result = std::variant<Optimal, Infeasible, Unbounded>;

// Exact dense-tableau simplex, Bland's anti-cycling rule, rows sorted into a
// canonical order first so the outcome is independent of row permutation.
Result solve(const Problem& p);

// Convenience: minimize objective subject to rows; nullopt when unbounded,
// throws Error(Infeasible) when infeasible.
struct MinResult {
  Rat value;
  VecQ witness;
};
std::optional<MinResult> minimize(const VecQ& objective, const std::vector<Row>& rows);

// The d_theta inner problem: minimize |u|+|u'| over pairs subject to affine
// rows in the stacked variable (u, u') of length 2d. Norm is L1 or Linf per
// coordinate block. Returns value and the pair; propagates Infeasible.
struct NormPair {
  Rat value;
  VecQ u, uprime;
};
std::optional<NormPair> min_norm_pair(int d, bool linf, const std::vector<Row>& rows_on_pair);

}  // namespace masure::lp
