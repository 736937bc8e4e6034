#include "masure/apartment.hpp"

#include <algorithm>
#include <cassert>

namespace masure {

Rat norm_eval(NormKind norm, const VecQ& v) {
  return norm == NormKind::L1 ? vec_l1(v) : vec_linf(v);
}

Rat dual_norm(NormKind norm, const VecQ& covector) {
  return norm == NormKind::L1 ? vec_linf(covector) : vec_l1(covector);
}

std::vector<HalfSpaceSpec> enclose(const ApartmentContext& ctx,
                                   const std::vector<HalfSpaceSpec>& halfspaces) {
  std::vector<lp::Row> rows;
  for (const HalfSpaceSpec& h : halfspaces) {
    if (h.root < 0 || h.root >= ctx.table.size())
      throw Error(Errc::RootOutsideTable, "half-space root index outside table");
    lp::Row r;
    r.a = ctx.table.root(h.root).covector;
    r.rel = lp::Rel::Ge;
    r.b = -h.level;  // beta(x) >= -k
    rows.push_back(r);
  }
  std::vector<HalfSpaceSpec> out;
  for (int idx = 0; idx < ctx.table.size(); ++idx) {
    const RealRoot& gamma = ctx.table.root(idx);
    std::optional<lp::MinResult> m;
    try {
      m = lp::minimize(gamma.covector, rows);
    } catch (const Error& e) {
      if (e.code() == Errc::Infeasible)
        throw Error(Errc::EmptyFilter, "enclosure input has empty intersection");
      throw;
    }
    if (!m) continue;  // unbounded below: no constraint in this direction
    out.push_back({idx, rat_ceil(-m->value)});
  }
  return out;
}

std::optional<VecQ> dominant_representative(const GcmRealization& g, VecQ v, int max_steps) {
  for (int step = 0; step <= max_steps; ++step) {
    int i = -1;
    for (int k = 0; k < g.rank(); ++k)
      if (vec_dot(g.simple_root(k), v) < 0) { i = k; break; }
    if (i < 0) return v;
    v = g.simple_reflection(i).apply(v);
  }
  return std::nullopt;
}

Tristate tits_leq(const ApartmentContext& ctx, const VecQ& x, const VecQ& y, int max_steps) {
  VecQ v = vec_sub(y, x);
  // Root-string certificate: a W^v-invariant covector nonnegative on the
  // chamber is nonnegative on the whole Tits cone; a strictly negative value
  // puts infinitely many positive roots below zero on v.
  for (const VecQ& delta : ctx.realization.radical_covectors())
    if (vec_dot(delta, v) < 0) return Tristate::False;
  if (dominant_representative(ctx.realization, v, max_steps).has_value()) return Tristate::True;
  return Tristate::Unknown;
}

VecQ vectorial_distance(const ApartmentContext& ctx, const VecQ& x, const VecQ& y, int max_steps) {
  auto dom = dominant_representative(ctx.realization, vec_sub(y, x), max_steps);
  if (!dom) throw Error(Errc::NotComparable, "x <= y is not certified by descent");
  return *dom;
}

std::pair<int, Rat> find_dense_direction(const ApartmentContext& ctx, const Rat& eps,
                                         NormKind norm) {
  if (eps <= 0) throw Error(Errc::ConfigInvalid, "eps must be positive");
  for (int pos : ctx.table.positive()) {
    Rat dn = dual_norm(norm, ctx.table.root(pos).covector);
    if (dn == 0) continue;
    Rat gap = 1 / dn;
    if (gap < eps) return {pos, gap};
  }
  throw Error(Errc::HeightBoundExhausted,
              "no tabled wall direction with gap below eps; raise the height bound");
}

UPathCheck is_u_path(const ApartmentContext& ctx,
                     const std::vector<std::pair<Rat, VecQ>>& breakpoints, const VecQ& u,
                     int max_steps) {
  UPathCheck res;
  res.is_u_path = true;
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const Rat dt = breakpoints[i + 1].first - breakpoints[i].first;
    if (dt <= 0) {
      res.is_u_path = false;
      return res;
    }
    VecQ vel = vec_scale(1 / dt, vec_sub(breakpoints[i + 1].second, breakpoints[i].second));
    auto dom = dominant_representative(ctx.realization, vel, max_steps);
    if (!dom) {
      res.is_u_path = false;
      res.undecided = true;
      return res;
    }
    if (*dom != u) {
      res.is_u_path = false;
      return res;
    }
  }
  return res;
}

std::vector<VecQ> polytope_vertices(const std::vector<lp::Row>& rows, int dim) {
  // Every vertex is the unique solution of dim active constraints; enumerate
  // bases, solve exactly, keep feasible solutions. Fine for dim <= 3.
  std::vector<VecQ> verts;
  const int m = static_cast<int>(rows.size());
  std::vector<int> pick;
  auto feasible = [&](const VecQ& v) {
    for (const lp::Row& r : rows) {
      Rat val = vec_dot(r.a, v);
      if (r.rel == lp::Rel::Ge && val < r.b) return false;
      if (r.rel == lp::Rel::Le && val > r.b) return false;
      if (r.rel == lp::Rel::Eq && val != r.b) return false;
    }
    return true;
  };
  auto try_basis = [&](const std::vector<int>& idx) {
    MatQ a = MatQ::zero(dim, dim);
    VecQ b = vec_zero(dim);
    for (int i = 0; i < dim; ++i) {
      a.m[static_cast<size_t>(i)] = rows[static_cast<size_t>(idx[static_cast<size_t>(i)])].a;
      b[static_cast<size_t>(i)] = rows[static_cast<size_t>(idx[static_cast<size_t>(i)])].b;
    }
    if (mat_rank(a) != dim) return;
    auto sol = mat_solve(a, b);
    if (!sol || !feasible(*sol)) return;
    for (const VecQ& v : verts)
      if (vec_cmp(v, *sol) == 0) return;
    verts.push_back(*sol);
  };
  std::vector<int> c(static_cast<size_t>(dim));
  for (int i = 0; i < dim; ++i) c[static_cast<size_t>(i)] = i;
  if (m < dim) return verts;
  for (;;) {
    try_basis(c);
    int i = dim - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == m - dim + i) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < dim; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
  std::sort(verts.begin(), verts.end(), [](const VecQ& a, const VecQ& b) { return vec_cmp(a, b) < 0; });
  return verts;
}

}  // namespace masure
