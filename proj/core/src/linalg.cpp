#include "masure/linalg.hpp"

#include <cassert>

namespace masure {

VecQ vec_zero(int d) { return VecQ(static_cast<size_t>(d), Rat(0)); }

VecQ vec_add(const VecQ& a, const VecQ& b) {
  assert(a.size() == b.size());
  VecQ r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

VecQ vec_sub(const VecQ& a, const VecQ& b) {
  assert(a.size() == b.size());
  VecQ r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

VecQ vec_neg(const VecQ& a) {
  VecQ r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}

VecQ vec_scale(const Rat& c, const VecQ& a) {
  VecQ r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

Rat vec_dot(const VecQ& cov, const VecQ& v) {
  assert(cov.size() == v.size());
  Rat s(0);
  for (size_t i = 0; i < v.size(); ++i) s += cov[i] * v[i];
  return s;
}

bool vec_is_zero(const VecQ& a) {
  for (const Rat& x : a)
    if (x != 0) return false;
  return true;
}

int vec_cmp(const VecQ& a, const VecQ& b) {
  assert(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return -1;
    if (a[i] > b[i]) return 1;
  }
  return 0;
}

Rat vec_l1(const VecQ& a) {
  Rat s(0);
  for (const Rat& x : a) s += abs(x);
  return s;
}

Rat vec_linf(const VecQ& a) {
  Rat s(0);
  for (const Rat& x : a)
    if (abs(x) > s) s = abs(x);
  return s;
}

MatQ MatQ::identity(int d) {
  MatQ r = zero(d, d);
  for (int i = 0; i < d; ++i) r.m[i][i] = 1;
  return r;
}

MatQ MatQ::zero(int r, int c) {
  MatQ out;
  out.rows = r;
  out.cols = c;
  out.m.assign(static_cast<size_t>(r), vec_zero(c));
  return out;
}

VecQ MatQ::apply(const VecQ& v) const {
  assert(static_cast<int>(v.size()) == cols);
  VecQ r = vec_zero(rows);
  for (int i = 0; i < rows; ++i) r[i] = vec_dot(m[i], v);
  return r;
}

VecQ MatQ::apply_transpose(const VecQ& cov) const {
  assert(static_cast<int>(cov.size()) == rows);
  VecQ r = vec_zero(cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) r[j] += cov[i] * m[i][j];
  return r;
}

MatQ MatQ::mul(const MatQ& o) const {
  assert(cols == o.rows);
  MatQ r = zero(rows, o.cols);
  for (int i = 0; i < rows; ++i)
    for (int k = 0; k < cols; ++k) {
      if (m[i][k] == 0) continue;
      for (int j = 0; j < o.cols; ++j) r.m[i][j] += m[i][k] * o.m[k][j];
    }
  return r;
}

namespace {

// Row echelon with partial pivoting by first nonzero; returns pivot columns.
std::vector<int> echelon(MatQ& a, std::vector<VecQ>* rhs = nullptr) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < a.cols && row < a.rows; ++col) {
    int p = -1;
    for (int i = row; i < a.rows; ++i)
      if (a.m[i][col] != 0) { p = i; break; }
    if (p < 0) continue;
    std::swap(a.m[p], a.m[row]);
    if (rhs) std::swap((*rhs)[p], (*rhs)[row]);
    Rat inv = 1 / a.m[row][col];
    for (int j = 0; j < a.cols; ++j) a.m[row][j] *= inv;
    if (rhs) (*rhs)[row] = vec_scale(inv, (*rhs)[row]);
    for (int i = 0; i < a.rows; ++i) {
      if (i == row || a.m[i][col] == 0) continue;
      Rat f = a.m[i][col];
      for (int j = 0; j < a.cols; ++j) a.m[i][j] -= f * a.m[row][j];
      if (rhs) (*rhs)[i] = vec_sub((*rhs)[i], vec_scale(f, (*rhs)[row]));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

int mat_rank(MatQ a) { return static_cast<int>(echelon(a).size()); }

std::optional<MatQ> mat_inverse(const MatQ& a) {
  assert(a.rows == a.cols);
  MatQ work = a;
  MatQ id = MatQ::identity(a.rows);
  std::vector<VecQ> rhs = id.m;
  std::vector<int> piv = echelon(work, &rhs);
  if (static_cast<int>(piv.size()) != a.rows) return std::nullopt;
  MatQ inv = MatQ::zero(a.rows, a.rows);
  inv.m = rhs;
  return inv;
}

std::optional<VecQ> mat_solve(MatQ a, VecQ b) {
  std::vector<VecQ> rhs(static_cast<size_t>(a.rows));
  for (int i = 0; i < a.rows; ++i) rhs[static_cast<size_t>(i)] = {b[static_cast<size_t>(i)]};
  std::vector<int> piv = echelon(a, &rhs);
  // consistency: zero rows must have zero rhs
  for (int i = static_cast<int>(piv.size()); i < a.rows; ++i)
    if (rhs[static_cast<size_t>(i)][0] != 0) return std::nullopt;
  VecQ x = vec_zero(a.cols);
  for (size_t r = 0; r < piv.size(); ++r) x[static_cast<size_t>(piv[r])] = rhs[r][0];
  return x;
}

std::vector<VecQ> mat_nullspace(MatQ a) {
  int cols = a.cols;
  std::vector<int> piv = echelon(a);
  std::vector<bool> is_pivot(static_cast<size_t>(cols), false);
  for (int c : piv) is_pivot[static_cast<size_t>(c)] = true;
  std::vector<VecQ> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<size_t>(free)]) continue;
    VecQ v = vec_zero(cols);
    v[static_cast<size_t>(free)] = 1;
    for (size_t r = 0; r < piv.size(); ++r)
      v[static_cast<size_t>(piv[r])] = -a.m[r][static_cast<size_t>(free)];
    basis.push_back(v);
  }
  return basis;
}

AffineMap AffineMap::identity(int d) { return {MatQ::identity(d), vec_zero(d)}; }

VecQ AffineMap::apply(const VecQ& v) const { return vec_add(m.apply(v), t); }

AffineMap AffineMap::compose(const AffineMap& o) const {
  return {m.mul(o.m), vec_add(m.apply(o.t), t)};
}

AffineMap reflection(const VecQ& root_covector, const VecQ& coroot, const Rat& level) {
  int d = static_cast<int>(root_covector.size());
  MatQ m = MatQ::identity(d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m.m[i][j] -= coroot[static_cast<size_t>(i)] * root_covector[static_cast<size_t>(j)];
  return {m, vec_scale(-level, coroot)};
}

}  // namespace masure
