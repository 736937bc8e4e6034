#pragma once

#include <optional>
#include <vector>

#include "masure/rational.hpp"

namespace masure {

using VecQ = std::vector<Rat>;

VecQ vec_zero(int d);
VecQ vec_add(const VecQ& a, const VecQ& b);
VecQ vec_sub(const VecQ& a, const VecQ& b);
VecQ vec_neg(const VecQ& a);
VecQ vec_scale(const Rat& c, const VecQ& a);
Rat vec_dot(const VecQ& cov, const VecQ& v);
bool vec_is_zero(const VecQ& a);
// Lexicographic three-way compare; vectors must have equal length.
int vec_cmp(const VecQ& a, const VecQ& b);
Rat vec_l1(const VecQ& a);
Rat vec_linf(const VecQ& a);

// Dense rational matrix, row major.
struct MatQ {
  int rows = 0, cols = 0;
  std::vector<VecQ> m;

  static MatQ identity(int d);
  static MatQ zero(int r, int c);
  VecQ apply(const VecQ& v) const;           // m * v
  VecQ apply_transpose(const VecQ& cov) const;  // cov^T * m, covector pullback
  MatQ mul(const MatQ& o) const;
  bool operator==(const MatQ& o) const = default;
};

int mat_rank(MatQ a);
std::optional<MatQ> mat_inverse(const MatQ& a);
// One solution of a x = b (free variables set to 0), or nullopt if inconsistent.
std::optional<VecQ> mat_solve(MatQ a, VecQ b);
// Basis of the null space of a.
std::vector<VecQ> mat_nullspace(MatQ a);

// Affine map x -> m x + t.
struct AffineMap {
  MatQ m;
  VecQ t;

  static AffineMap identity(int d);
  VecQ apply(const VecQ& v) const;
  // this after o:  x -> this(o(x)).
  AffineMap compose(const AffineMap& o) const;
  bool operator==(const AffineMap& o) const = default;
};

// Affine reflection s_{beta,k}(x) = x - (beta(x)+k) beta^vee.
AffineMap reflection(const VecQ& root_covector, const VecQ& coroot, const Rat& level);

}  // namespace masure
