#include "masure/rootsys.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <set>

namespace masure {

GcmRealization GcmRealization::validate(const std::vector<std::vector<long>>& matrix) {
  GcmRealization g;
  int n = static_cast<int>(matrix.size());
  if (n == 0) throw Error(Errc::ViolatesGcmAxioms, "empty matrix");
  for (int i = 0; i < n; ++i)
    if (static_cast<int>(matrix[static_cast<size_t>(i)].size()) != n)
      throw Error(Errc::ViolatesGcmAxioms, "matrix is not square at row " + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    if (matrix[i][i] != 2)
      throw Error(Errc::ViolatesGcmAxioms,
                  "axiom 1 (c_ii = 2) fails at entry (" + std::to_string(i) + "," + std::to_string(i) + ")");
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (matrix[i][j] > 0)
        throw Error(Errc::ViolatesGcmAxioms, "axiom 2 (off-diagonal <= 0) fails at entry (" +
                                                 std::to_string(i) + "," + std::to_string(j) + ")");
      if ((matrix[i][j] == 0) != (matrix[j][i] == 0))
        throw Error(Errc::ViolatesGcmAxioms, "axiom 3 (symmetric zero pattern) fails at entry (" +
                                                 std::to_string(i) + "," + std::to_string(j) + ")");
    }
  }
  g.n_ = n;
  g.cartan_ = matrix;

  // Stack rows of C; append standard covector rows until full column rank.
  // The appended rows become the extra realization coordinates.
  MatQ stacked = MatQ::zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) stacked.m[i][j] = matrix[i][j];
  int r = mat_rank(stacked);
  std::vector<int> extension_rows;
  for (int cand = 0; cand < n && r + static_cast<int>(extension_rows.size()) < n; ++cand) {
    MatQ trial = stacked;
    trial.rows += 1;
    VecQ row = vec_zero(n);
    row[static_cast<size_t>(cand)] = 1;
    trial.m.push_back(row);
    if (mat_rank(trial) > mat_rank(stacked)) {
      stacked = trial;
      extension_rows.push_back(cand);
    }
  }
  int corank = static_cast<int>(extension_rows.size());
  g.d_ = n + corank;

  for (int i = 0; i < n; ++i) {
    VecQ coroot = vec_zero(g.d_);
    coroot[static_cast<size_t>(i)] = 1;
    g.simple_coroots_.push_back(coroot);
  }
  for (int j = 0; j < n; ++j) {
    VecQ cov = vec_zero(g.d_);
    for (int i = 0; i < n; ++i) cov[static_cast<size_t>(i)] = matrix[i][j];
    for (int s = 0; s < corank; ++s)
      cov[static_cast<size_t>(n + s)] = (extension_rows[static_cast<size_t>(s)] == j) ? 1 : 0;
    g.simple_roots_.push_back(cov);
  }
  for (int i = 0; i < n; ++i)
    g.refl_.push_back(reflection(g.simple_roots_[static_cast<size_t>(i)],
                                 g.simple_coroots_[static_cast<size_t>(i)], Rat(0)).m);

  // Interior chamber point: alpha_i(v) = 1 for all i (free coords zero).
  MatQ a = MatQ::zero(n, g.d_);
  for (int i = 0; i < n; ++i) a.m[static_cast<size_t>(i)] = g.simple_roots_[static_cast<size_t>(i)];
  VecQ ones(static_cast<size_t>(n), Rat(1));
  auto sol = mat_solve(a, ones);
  assert(sol.has_value());
  g.interior_ = *sol;

  // Radical covectors: t in ker(C) (acting by t -> C t) with entries of one
  // sign give W-invariant covectors sum t_j alpha_j, nonnegative on C_f.
  MatQ c = MatQ::zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c.m[i][j] = matrix[i][j];
  for (const VecQ& t : mat_nullspace(c)) {
    bool nonneg = true, nonpos = true;
    for (const Rat& x : t) {
      if (x < 0) nonneg = false;
      if (x > 0) nonpos = false;
    }
    if (!nonneg && !nonpos) continue;
    VecQ tt = nonneg ? t : vec_neg(t);
    VecQ cov = vec_zero(g.d_);
    for (int j = 0; j < n; ++j)
      cov = vec_add(cov, vec_scale(tt[static_cast<size_t>(j)], g.simple_roots_[static_cast<size_t>(j)]));
    if (!vec_is_zero(cov)) g.radical_.push_back(cov);
  }
  return g;
}

VecQ GcmRealization::root_covector(const std::vector<long>& coords) const {
  VecQ cov = vec_zero(d_);
  for (int j = 0; j < n_; ++j)
    cov = vec_add(cov, vec_scale(Rat(coords[static_cast<size_t>(j)]), simple_roots_[static_cast<size_t>(j)]));
  return cov;
}

std::vector<std::vector<long>> preset_matrix(const std::string& name) {
  if (name == "a1") return {{2}};
  if (name == "affine-a1") return {{2, -2}, {-2, 2}};
  if (name == "hyp23") return {{2, -3}, {-3, 2}};
  throw Error(Errc::ConfigInvalid, "unknown preset: " + name);
}

std::vector<long> reflect_root_coords(const GcmRealization& g, int j, std::vector<long> coords) {
  long pairing = 0;  // beta(alpha_j^vee) = sum_k c_{j,k} b_k
  for (int k = 0; k < g.rank(); ++k) pairing += g.cartan(j, k) * coords[static_cast<size_t>(k)];
  coords[static_cast<size_t>(j)] -= pairing;
  return coords;
}

long root_height(const std::vector<long>& coords) {
  long h = 0;
  for (long c : coords) h += (c >= 0) ? c : -c;
  return h;
}

int root_sign(const std::vector<long>& coords) {
  bool nonneg = true, nonpos = true;
  for (long c : coords) {
    if (c < 0) nonneg = false;
    if (c > 0) nonpos = false;
  }
  assert(nonneg || nonpos);
  return nonneg ? +1 : -1;
}

RealRootTable::RealRootTable(const GcmRealization& g, long height_bound)
    : height_bound_(height_bound) {
  if (height_bound < 1) throw Error(Errc::ConfigInvalid, "height bound must be >= 1");
  struct Item {
    std::vector<long> coords;
    VecQ coroot;
  };
  std::deque<Item> queue;
  std::set<std::vector<long>> seen;
  saturated_ = true;
  for (int i = 0; i < g.rank(); ++i) {
    std::vector<long> cp(static_cast<size_t>(g.rank()), 0), cm;
    cp[static_cast<size_t>(i)] = 1;
    cm = cp;
    cm[static_cast<size_t>(i)] = -1;
    queue.push_back({cp, g.simple_coroot(i)});
    queue.push_back({cm, vec_neg(g.simple_coroot(i))});
    seen.insert(cp);
    seen.insert(cm);
  }
  std::vector<RealRoot> out;
  while (!queue.empty()) {
    Item it = queue.front();
    queue.pop_front();
    RealRoot r;
    r.coords = it.coords;
    r.covector = g.root_covector(it.coords);
    r.coroot = it.coroot;
    r.height = root_height(it.coords);
    r.positive = root_sign(it.coords) > 0;
    out.push_back(r);
    for (int j = 0; j < g.rank(); ++j) {
      std::vector<long> nc = reflect_root_coords(g, j, it.coords);
      if (seen.count(nc)) continue;
      if (root_height(nc) > height_bound) {
        saturated_ = false;
        continue;
      }
      seen.insert(nc);
      queue.push_back({nc, g.simple_reflection(j).apply(it.coroot)});
    }
  }
  std::sort(out.begin(), out.end(), [](const RealRoot& a, const RealRoot& b) {
    if (a.height != b.height) return a.height < b.height;
    return a.coords < b.coords;
  });
  roots_ = std::move(out);
  for (int i = 0; i < size(); ++i) {
    index_[roots_[static_cast<size_t>(i)].coords] = i;
    if (roots_[static_cast<size_t>(i)].positive) positive_.push_back(i);
  }
}

int RealRootTable::positive_root(int pos_idx) const {
  if (pos_idx < 0 || pos_idx >= static_cast<int>(positive_.size()))
    throw Error(Errc::RootOutsideTable, "positive root index " + std::to_string(pos_idx) +
                                            " outside table (have " +
                                            std::to_string(positive_.size()) + ")");
  return positive_[static_cast<size_t>(pos_idx)];
}

std::optional<int> RealRootTable::find(const std::vector<long>& coords) const {
  auto it = index_.find(coords);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int RealRootTable::negation(int idx) const {
  std::vector<long> neg = root(idx).coords;
  for (long& c : neg) c = -c;
  auto found = find(neg);
  assert(found.has_value());
  return *found;
}

std::vector<long> word_inverse_on_root(const GcmRealization& g, const std::vector<int>& word,
                                       std::vector<long> coords) {
  // w^{-1}.beta = r_{w_m} ... r_{w_1}.beta applied innermost-first.
  for (int letter : word) coords = reflect_root_coords(g, letter, coords);
  return coords;
}

WeylWord weyl_reduce(const GcmRealization& g, const std::vector<int>& word) {
  for (int i : word)
    if (i < 0 || i >= g.rank()) throw Error(Errc::ConfigInvalid, "generator index out of range");
  std::vector<int> remaining = word;
  std::vector<int> out;
  for (;;) {
    int descent = -1;
    for (int i = 0; i < g.rank() && descent < 0; ++i) {
      std::vector<long> coords(static_cast<size_t>(g.rank()), 0);
      coords[static_cast<size_t>(i)] = 1;
      if (root_sign(word_inverse_on_root(g, remaining, coords)) < 0) descent = i;
    }
    if (descent < 0) break;
    out.push_back(descent);
    remaining.insert(remaining.begin(), descent);
  }
  WeylWord w;
  w.word_ = out;
  MatQ m = MatQ::identity(g.dim());
  for (int i : out) m = m.mul(g.simple_reflection(i));
  w.matrix_ = m;
  return w;
}

VecQ weyl_act(const GcmRealization& g, const std::vector<int>& word, const VecQ& v) {
  // w = r_{w_1} ... r_{w_m} as composition; apply last letter first.
  VecQ r = v;
  for (auto it = word.rbegin(); it != word.rend(); ++it) r = g.simple_reflection(*it).apply(r);
  return r;
}

VecQ weyl_act_affine(const GcmRealization& g, const std::vector<int>& word, const VecQ& translation,
                     const VecQ& v) {
  return vec_add(weyl_act(g, word, v), translation);
}

SectorGermId SectorGermId::make(const GcmRealization& g, int sign, const std::vector<int>& w) {
  if (sign != +1 && sign != -1) throw Error(Errc::ConfigInvalid, "germ sign must be +1 or -1");
  SectorGermId id;
  id.sign = sign;
  id.word = weyl_reduce(g, w);
  return id;
}

int germ_side(const GcmRealization& g, const RealRootTable& table, int root_idx,
              const SectorGermId& germ) {
  std::vector<long> coords =
      word_inverse_on_root(g, germ.word.word(), table.root(root_idx).coords);
  if (root_height(coords) > table.height_bound())
    throw Error(Errc::RootOutsideTable,
                "w^{-1} beta has height " + std::to_string(root_height(coords)) +
                    " beyond bound " + std::to_string(table.height_bound()));
  return germ.sign * root_sign(coords);
}

WeylWord longest_element(const GcmRealization& g, const RealRootTable& table) {
  if (!table.saturated())
    throw Error(Errc::HeightBoundExhausted, "longest element needs a finite (saturated) root system");
  // Descend the negated interior point to the dominant chamber; the recording
  // word maps -C_f onto C_f, i.e. equals w_0.
  VecQ v = vec_neg(g.chamber_interior_point());
  std::vector<int> word;
  for (;;) {
    int i = -1;
    for (int k = 0; k < g.rank(); ++k)
      if (vec_dot(g.simple_root(k), v) < 0) { i = k; break; }
    if (i < 0) break;
    v = g.simple_reflection(i).apply(v);
    word.push_back(i);
  }
  return weyl_reduce(g, word);
}

SectorGermId germ_canonical_signed(const GcmRealization& g, const RealRootTable& table,
                                   const SectorGermId& germ) {
  if (germ.sign > 0 || !table.saturated()) return germ;
  WeylWord w0 = longest_element(g, table);
  std::vector<int> w = germ.word.word();
  w.insert(w.end(), w0.word().begin(), w0.word().end());
  return SectorGermId::make(g, +1, w);
}

}  // namespace masure
