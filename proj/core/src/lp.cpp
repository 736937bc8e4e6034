#include "masure/lp.hpp"

#include <algorithm>
#include <cassert>

namespace masure::lp {

namespace {

// Equality-form tableau over variables
//   [ z+ (n) | z- (n) | slacks (one per Le/Ge row) | artificials (one per row) ]
// with b >= 0. Basis starts at the artificial identity block.
struct Tableau {
  int n = 0;
  int cols = 0;
  int art0 = 0;  // first artificial column
  std::vector<VecQ> a;
  VecQ b;
  std::vector<int> basis;
  VecQ cost;
  VecQ reduced;  // r_j = cost_j - c_B^T B^{-1} A_j
  Rat objective_value;

  int m() const { return static_cast<int>(a.size()); }

  void compute_reduced() {
    reduced = cost;
    objective_value = 0;
    for (int i = 0; i < m(); ++i) {
      const Rat& cb = cost[static_cast<size_t>(basis[static_cast<size_t>(i)])];
      if (cb == 0) continue;
      objective_value += cb * b[static_cast<size_t>(i)];
      for (int j = 0; j < cols; ++j)
        reduced[static_cast<size_t>(j)] -= cb * a[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
  }

  void pivot(int row, int col) {
    Rat inv = 1 / a[static_cast<size_t>(row)][static_cast<size_t>(col)];
    for (int j = 0; j < cols; ++j) a[static_cast<size_t>(row)][static_cast<size_t>(j)] *= inv;
    b[static_cast<size_t>(row)] *= inv;
    for (int i = 0; i < m(); ++i) {
      if (i == row) continue;
      Rat f = a[static_cast<size_t>(i)][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j)
        a[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * a[static_cast<size_t>(row)][static_cast<size_t>(j)];
      b[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(row)];
    }
    Rat f = reduced[static_cast<size_t>(col)];
    if (f != 0) {
      for (int j = 0; j < cols; ++j)
        reduced[static_cast<size_t>(j)] -= f * a[static_cast<size_t>(row)][static_cast<size_t>(j)];
      objective_value += f * b[static_cast<size_t>(row)];
    }
    basis[static_cast<size_t>(row)] = col;
  }

  // Bland's rule. Returns false at optimality; *out_row = -1 means the
  // entering column is unbounded.
  bool step(const std::vector<bool>& allowed, int* out_col, int* out_row) {
    int col = -1;
    for (int j = 0; j < cols; ++j)
      if (allowed[static_cast<size_t>(j)] && reduced[static_cast<size_t>(j)] < 0) { col = j; break; }
    if (col < 0) return false;
    int row = -1;
    Rat best;
    for (int i = 0; i < m(); ++i) {
      const Rat& piv = a[static_cast<size_t>(i)][static_cast<size_t>(col)];
      if (piv <= 0) continue;
      Rat ratio = b[static_cast<size_t>(i)] / piv;
      if (row < 0 || ratio < best ||
          (ratio == best && basis[static_cast<size_t>(i)] < basis[static_cast<size_t>(row)])) {
        row = i;
        best = ratio;
      }
    }
    *out_col = col;
    *out_row = row;
    return true;
  }
};

bool row_less(const Row& x, const Row& y) {
  if (x.rel != y.rel) return static_cast<int>(x.rel) < static_cast<int>(y.rel);
  int c = vec_cmp(x.a, y.a);
  if (c != 0) return c < 0;
  return x.b < y.b;
}

}  // namespace

Result solve(const Problem& p) {
  const int n = p.num_vars;
  const int m = static_cast<int>(p.rows.size());

  // Canonical row order; perm[i] = caller index of sorted row i.
  std::vector<int> perm(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) perm[static_cast<size_t>(i)] = i;
  std::stable_sort(perm.begin(), perm.end(), [&](int x, int y) {
    return row_less(p.rows[static_cast<size_t>(x)], p.rows[static_cast<size_t>(y)]);
  });

  int num_slack = 0;
  for (const Row& r : p.rows)
    if (r.rel != Rel::Eq) ++num_slack;

  Tableau t;
  t.n = n;
  t.art0 = 2 * n + num_slack;
  t.cols = t.art0 + m;
  t.b = vec_zero(m);
  t.basis.assign(static_cast<size_t>(m), 0);
  std::vector<int> row_sign(static_cast<size_t>(m), 1);

  int slack = 0;
  for (int i = 0; i < m; ++i) {
    const Row& r = p.rows[static_cast<size_t>(perm[static_cast<size_t>(i)])];
    VecQ row = vec_zero(t.cols);
    for (int j = 0; j < n; ++j) {
      row[static_cast<size_t>(j)] = r.a[static_cast<size_t>(j)];
      row[static_cast<size_t>(n + j)] = -r.a[static_cast<size_t>(j)];
    }
    if (r.rel != Rel::Eq) {
      row[static_cast<size_t>(2 * n + slack)] = (r.rel == Rel::Ge) ? Rat(-1) : Rat(1);
      ++slack;
    }
    Rat rhs = r.b;
    if (rhs < 0) {
      for (Rat& x : row) x = -x;
      rhs = -rhs;
      row_sign[static_cast<size_t>(i)] = -1;
    }
    row[static_cast<size_t>(t.art0 + i)] = 1;
    t.a.push_back(row);
    t.b[static_cast<size_t>(i)] = rhs;
    t.basis[static_cast<size_t>(i)] = t.art0 + i;
  }

  // Phase 1: minimize the sum of artificials.
  t.cost = vec_zero(t.cols);
  for (int i = 0; i < m; ++i) t.cost[static_cast<size_t>(t.art0 + i)] = 1;
  t.compute_reduced();
  std::vector<bool> allowed(static_cast<size_t>(t.cols), true);
  int col, row;
  while (t.step(allowed, &col, &row)) {
    assert(row >= 0);
    t.pivot(row, col);
  }
  if (t.objective_value > 0) {
    Infeasible inf;
    inf.farkas = vec_zero(m);
    for (int i = 0; i < m; ++i) {
      Rat y = 1 - t.reduced[static_cast<size_t>(t.art0 + i)];
      inf.farkas[static_cast<size_t>(perm[static_cast<size_t>(i)])] =
          Rat(row_sign[static_cast<size_t>(i)]) * y;
    }
    return inf;
  }

  // Phase 2: original objective; artificials may not re-enter.
  t.cost = vec_zero(t.cols);
  for (int j = 0; j < n; ++j) {
    t.cost[static_cast<size_t>(j)] = p.objective[static_cast<size_t>(j)];
    t.cost[static_cast<size_t>(n + j)] = -p.objective[static_cast<size_t>(j)];
  }
  t.compute_reduced();
  for (int i = 0; i < m; ++i) allowed[static_cast<size_t>(t.art0 + i)] = false;
  while (t.step(allowed, &col, &row)) {
    if (row < 0) {
      VecQ xray = vec_zero(t.cols);
      xray[static_cast<size_t>(col)] = 1;
      for (int i = 0; i < t.m(); ++i)
        xray[static_cast<size_t>(t.basis[static_cast<size_t>(i)])] =
            -t.a[static_cast<size_t>(i)][static_cast<size_t>(col)];
      Unbounded ub;
      ub.ray = vec_zero(n);
      for (int j = 0; j < n; ++j)
        ub.ray[static_cast<size_t>(j)] =
            xray[static_cast<size_t>(j)] - xray[static_cast<size_t>(n + j)];
      return ub;
    }
    t.pivot(row, col);
  }

  Optimal opt;
  VecQ x = vec_zero(t.cols);
  for (int i = 0; i < m; ++i)
    x[static_cast<size_t>(t.basis[static_cast<size_t>(i)])] = t.b[static_cast<size_t>(i)];
  opt.witness = vec_zero(n);
  for (int j = 0; j < n; ++j)
    opt.witness[static_cast<size_t>(j)] = x[static_cast<size_t>(j)] - x[static_cast<size_t>(n + j)];
  opt.value = vec_dot(p.objective, opt.witness);
  opt.dual = vec_zero(m);
  for (int i = 0; i < m; ++i) {
    Rat y = -t.reduced[static_cast<size_t>(t.art0 + i)];
    opt.dual[static_cast<size_t>(perm[static_cast<size_t>(i)])] =
        Rat(row_sign[static_cast<size_t>(i)]) * y;
  }
  return opt;
}

std::optional<MinResult> minimize(const VecQ& objective, const std::vector<Row>& rows) {
  Problem p;
  p.num_vars = static_cast<int>(objective.size());
  p.objective = objective;
  p.rows = rows;
  Result r = solve(p);
  if (std::holds_alternative<Unbounded>(r)) return std::nullopt;
  if (std::holds_alternative<Infeasible>(r)) throw Error(Errc::Infeasible, "infeasible linear program");
  const Optimal& o = std::get<Optimal>(r);
  return MinResult{o.value, o.witness};
}

std::optional<NormPair> min_norm_pair(int d, bool linf, const std::vector<Row>& rows_on_pair) {
  // Variables: (u, u', s, s'); the s blocks carry the norm epigraph.
  int ns = linf ? 1 : d;
  int total = 2 * d + 2 * ns;
  Problem p;
  p.num_vars = total;
  p.objective = vec_zero(total);
  for (int k = 0; k < 2 * ns; ++k) p.objective[static_cast<size_t>(2 * d + k)] = 1;
  for (const Row& r : rows_on_pair) {
    Row ext;
    ext.a = vec_zero(total);
    for (int j = 0; j < 2 * d; ++j) ext.a[static_cast<size_t>(j)] = r.a[static_cast<size_t>(j)];
    ext.rel = r.rel;
    ext.b = r.b;
    p.rows.push_back(ext);
  }
  auto epigraph = [&](int var_base, int s_base) {
    for (int i = 0; i < d; ++i) {
      int s = linf ? s_base : s_base + i;
      Row r1;  // s - u_i >= 0
      r1.a = vec_zero(total);
      r1.a[static_cast<size_t>(s)] = 1;
      r1.a[static_cast<size_t>(var_base + i)] = -1;
      r1.rel = Rel::Ge;
      r1.b = Rat(0);
      Row r2;  // s + u_i >= 0
      r2.a = vec_zero(total);
      r2.a[static_cast<size_t>(s)] = 1;
      r2.a[static_cast<size_t>(var_base + i)] = 1;
      r2.rel = Rel::Ge;
      r2.b = Rat(0);
      p.rows.push_back(r1);
      p.rows.push_back(r2);
    }
  };
  epigraph(0, 2 * d);
  epigraph(d, 2 * d + ns);
  Result r = solve(p);
  if (std::holds_alternative<Infeasible>(r)) return std::nullopt;
  if (std::holds_alternative<Unbounded>(r))
    throw Error(Errc::Infeasible, "norm objective is bounded below; unbounded result is a solver fault");
  const Optimal& o = std::get<Optimal>(r);
  NormPair np;
  np.u = VecQ(o.witness.begin(), o.witness.begin() + d);
  np.uprime = VecQ(o.witness.begin() + d, o.witness.begin() + 2 * d);
  np.value = o.value;
  return np;
}

}  // namespace masure::lp
