#include "masure/masure.hpp"

#include <algorithm>
#include <cassert>

namespace masure {

namespace {

// cov(map(c)) + k >= 0 as a ChartIneq over c.
ChartIneq pullback_ge(const VecQ& cov, const Rat& k, const AffineMap& map) {
  return {map.m.apply_transpose(cov), -k - vec_dot(cov, map.t)};
}

ChartIneq negate(const ChartIneq& q) { return {vec_neg(q.covector), -q.rhs}; }

bool region_feasible(const std::vector<ChartIneq>& region, int dim) {
  std::vector<lp::Row> rows;
  for (const ChartIneq& q : region) rows.push_back({q.covector, lp::Rel::Ge, q.rhs});
  try {
    lp::minimize(vec_zero(dim), rows);
    return true;
  } catch (const Error& e) {
    if (e.code() == Errc::Infeasible) return false;
    throw;
  }
}

bool region_contains(const std::vector<ChartIneq>& region, const VecQ& c) {
  for (const ChartIneq& q : region)
    if (vec_dot(q.covector, c) < q.rhs) return false;
  return true;
}

}  // namespace

Masure::Masure(const GcmRealization& realization, const RealRootTable& table, MasureConfig config)
    : realization_(std::make_shared<const GcmRealization>(realization)),
      table_(std::make_shared<const RealRootTable>(table)),
      config_(config) {
  if (config_.thickness < 2) throw Error(Errc::ConfigInvalid, "thickness must be >= 2");
  if (config_.max_depth < 0) throw Error(Errc::ConfigInvalid, "max depth must be >= 0");
  apartments_.push_back({});
  index_[{}] = 0;
}

const Word& Masure::word(int apartment) const {
  if (apartment < 0 || apartment >= apartment_count())
    throw Error(Errc::UnregisteredApartment, "apartment id " + std::to_string(apartment));
  return apartments_[static_cast<size_t>(apartment)].word;
}

int Masure::depth(int apartment) const {
  return apartments_[static_cast<size_t>(apartment)].depth;
}

int Masure::parent(int apartment) const {
  return apartments_[static_cast<size_t>(apartment)].parent;
}

const RealRoot& Masure::letter_root(const FoldingLetter& l) const {
  return table_->root(table_->positive_root(l.root_pos));
}

AffineMap Masure::letter_reflection(const FoldingLetter& l) const {
  const RealRoot& r = letter_root(l);
  return reflection(r.covector, r.coroot, Rat(l.level));
}

int Masure::branch(int parent, int root_pos, const Rat& level, int sheet) {
  const Word& pw = word(parent);
  if (!rat_is_integer(level))
    throw Error(Errc::NotTrueWall, "branching level " + rat_str(level) + " is not an integer");
  if (sheet < 1 || sheet > config_.thickness - 1)
    throw Error(Errc::SheetOutOfRange, "sheet " + std::to_string(sheet) + " outside 1.." +
                                            std::to_string(config_.thickness - 1));
  table_->positive_root(root_pos);  // validates the index
  if (static_cast<int>(pw.size()) + 1 > config_.max_depth)
    throw Error(Errc::DepthExceeded, "folding depth bound " + std::to_string(config_.max_depth));
  Word w = pw;
  w.push_back({root_pos, rat_to_long(level), sheet});
  auto it = index_.find(w);
  if (it != index_.end()) return it->second;
  if (frozen_) throw Error(Errc::FrozenRegistry, "registry is frozen; cannot branch");
  Apartment a;
  a.word = w;
  a.parent = parent;
  a.depth = static_cast<int>(w.size());
  apartments_.push_back(a);
  int id = apartment_count() - 1;
  index_[w] = id;
  return id;
}

std::optional<int> Masure::find_word(const Word& w) const {
  auto it = index_.find(w);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

MasurePoint Masure::canonicalize(int apartment, VecQ coords) const {
  int a = apartment;
  (void)word(a);  // validates
  while (a != 0) {
    const FoldingLetter& leaf = apartments_[static_cast<size_t>(a)].word.back();
    const RealRoot& r = letter_root(leaf);
    if (vec_dot(r.covector, coords) + leaf.level >= 0)
      a = apartments_[static_cast<size_t>(a)].parent;
    else
      break;
  }
  return {a, std::move(coords)};
}

bool Masure::points_equal(const MasurePoint& a, const MasurePoint& b) const {
  MasurePoint ca = canonicalize(a), cb = canonicalize(b);
  return ca == cb;
}

bool Masure::is_canonical(const MasurePoint& p) const {
  return canonicalize(p) == p;
}

int Masure::letter_side(const FoldingLetter& letter, const SectorGermId& g) const {
  return germ_side(*realization_, *table_, table_->positive_root(letter.root_pos), g);
}

std::vector<Masure::WalkStep> Masure::walk(const MasurePoint& x, const SectorGermId& g,
                                           VecQ* chart_pos) const {
  const Word& w = word(x.apartment);
  std::vector<WalkStep> steps(w.size());
  VecQ c = x.coords;
  for (int i = static_cast<int>(w.size()) - 1; i >= 0; --i) {
    const FoldingLetter& letter = w[static_cast<size_t>(i)];
    if (letter_side(letter, g) < 0) {
      const RealRoot& r = letter_root(letter);
      if (vec_dot(r.covector, c) + letter.level < 0) {
        c = letter_reflection(letter).apply(c);
        steps[static_cast<size_t>(i)].fired = true;
      }
    }
  }
  if (chart_pos) *chart_pos = c;
  return steps;
}

std::vector<bool> Masure::retraction_folds(const MasurePoint& x, const SectorGermId& g) const {
  MasurePoint cx = canonicalize(x);
  std::vector<WalkStep> steps = walk(cx, g, nullptr);
  std::vector<bool> fired(steps.size());
  for (size_t i = 0; i < steps.size(); ++i) fired[i] = steps[i].fired;
  return fired;
}

VecQ Masure::retract(const MasurePoint& x, const SectorGermId& g) const {
  MasurePoint cx = canonicalize(x);
  VecQ c;
  walk(cx, g, &c);
  return c;
}

MasurePoint Masure::chart_point(const MasurePoint& x, const SectorGermId& g,
                                const VecQ& position) const {
  MasurePoint cx = canonicalize(x);
  std::vector<WalkStep> steps = walk(cx, g, nullptr);
  const Word& w = word(cx.apartment);

  // Ancestor chain root..x.
  std::vector<int> chain(w.size() + 1);
  {
    int a = cx.apartment;
    for (int i = static_cast<int>(w.size()); i >= 0; --i) {
      chain[static_cast<size_t>(i)] = a;
      a = (i > 0) ? apartments_[static_cast<size_t>(a)].parent : a;
    }
  }

  VecQ z = position;
  MasurePoint result;
  bool stopped = false;
  for (size_t i = 0; i < w.size() && !stopped; ++i) {
    const FoldingLetter& letter = w[i];
    if (letter_side(letter, g) > 0) continue;
    const RealRoot& r = letter_root(letter);
    Rat val = vec_dot(r.covector, z) + letter.level;
    if (val >= 0) {
      // Descend into x's branch only where x itself folded.
      if (steps[i].fired) z = letter_reflection(letter).apply(z);
    } else {
      result = canonicalize(chain[i], z);
      stopped = true;
    }
  }
  if (!stopped) result = canonicalize(cx.apartment, z);

  VecQ check;
  walk(result, g, &check);
  if (vec_cmp(check, position) != 0)
    throw Error(Errc::ChartExit,
                "chart position does not invert through the unfolding (depth-bound artifact)");
  return result;
}

bool Masure::contains_germ(int apartment, const SectorGermId& g) const {
  for (const FoldingLetter& letter : word(apartment))
    if (letter_side(letter, g) < 0) return false;
  return true;
}

UnfoldedChart Masure::unfold(const MasurePoint& x, const SectorGermId& g) const {
  MasurePoint cx = canonicalize(x);
  UnfoldedChart chart;
  chart.germ = g;
  chart.anchor = cx;
  std::vector<WalkStep> steps = walk(cx, g, &chart.anchor_position);
  const Word& w = word(cx.apartment);
  const int d = realization_->dim();

  std::vector<int> chain(w.size() + 1);
  {
    int a = cx.apartment;
    for (int i = static_cast<int>(w.size()); i >= 0; --i) {
      chain[static_cast<size_t>(i)] = a;
      a = (i > 0) ? apartments_[static_cast<size_t>(a)].parent : a;
    }
  }

  // Refine a raw piece (stop at prefix level j, map A) into canonical
  // residence levels: trailing glue letters strip one by one.
  auto emit_refined = [&](int j, const AffineMap& a, std::vector<ChartIneq> base,
                          std::vector<ChartPiece>* out, int* germ_piece, bool mark_germ) {
    for (int lvl = j; lvl >= 0; --lvl) {
      std::vector<ChartIneq> region = base;
      for (int t = lvl; t < j; ++t) {
        const FoldingLetter& lt = w[static_cast<size_t>(t)];
        region.push_back(pullback_ge(letter_root(lt).covector, Rat(lt.level), a));
      }
      if (lvl > 0) {
        const FoldingLetter& lt = w[static_cast<size_t>(lvl - 1)];
        region.push_back(negate(pullback_ge(letter_root(lt).covector, Rat(lt.level), a)));
      }
      bool keep = (mark_germ && lvl == 0) || region_feasible(region, d);
      if (!keep) continue;
      out->push_back({region, chain[static_cast<size_t>(lvl)], a});
      if (mark_germ && lvl == 0) *germ_piece = static_cast<int>(out->size()) - 1;
    }
  };

  std::vector<ChartPiece> pieces;
  int germ_piece = -1;
  AffineMap acc = AffineMap::identity(d);
  std::vector<ChartIneq> constraints;
  bool first_stop = true;
  for (size_t i = 0; i < w.size(); ++i) {
    const FoldingLetter& letter = w[i];
    if (letter_side(letter, g) > 0) continue;
    const RealRoot& r = letter_root(letter);
    ChartIneq cont = pullback_ge(r.covector, Rat(letter.level), acc);
    std::vector<ChartIneq> stop_region = constraints;
    stop_region.push_back(negate(cont));
    emit_refined(static_cast<int>(i), acc, stop_region, &pieces, &germ_piece, first_stop);
    first_stop = false;
    constraints.push_back(cont);
    if (steps[i].fired) acc = letter_reflection(letter).compose(acc);
  }
  emit_refined(static_cast<int>(w.size()), acc, constraints, &pieces, &germ_piece, first_stop);

  if (germ_piece > 0) std::rotate(pieces.begin(), pieces.begin() + germ_piece, pieces.begin() + germ_piece + 1);
  chart.pieces = std::move(pieces);
  return chart;
}

std::pair<SundialHalf, SundialHalf> Masure::sundial_split(int apartment,
                                                          const SectorGermId& g) const {
  const Word& w = word(apartment);
  int deepest = -1;
  for (int i = 0; i < static_cast<int>(w.size()); ++i)
    if (letter_side(w[static_cast<size_t>(i)], g) < 0) deepest = i;
  if (deepest < 0)
    throw Error(Errc::GermContained, "germ is contained in the apartment; split is trivial");
  const FoldingLetter& letter = w[static_cast<size_t>(deepest)];
  const RealRoot& r = letter_root(letter);
  int full_idx = table_->positive_root(letter.root_pos);

  auto witness = [&](int side_sign) {
    // beta(p) + k = side_sign on the beta^vee line.
    Rat target = Rat(side_sign) - Rat(letter.level);
    Rat pairing = vec_dot(r.covector, r.coroot);  // = 2
    return vec_scale(target / pairing, r.coroot);
  };

  SundialHalf d1, d2;
  d1.half = {full_idx, Rat(letter.level)};
  MasurePoint w1 = canonicalize(apartment, witness(+1));
  d1.resident = w1.apartment;
  d1.chart = unfold(w1, g);
  d2.half = {table_->negation(full_idx), Rat(-letter.level)};
  MasurePoint w2 = canonicalize(apartment, witness(-1));
  d2.resident = w2.apartment;
  d2.chart = unfold(w2, g);
  return {d1, d2};
}

std::vector<SplitPiece> Masure::split_apartment(int apartment, const SectorGermId& g) const {
  const Word& w = word(apartment);
  const int d = realization_->dim();
  std::vector<SplitPiece> out;

  struct Frame {
    int i;  // next letter (processed leaf -> root, i decreasing)
    std::vector<ChartIneq> region;  // over label coordinates
    AffineMap fold;                 // labels -> running coordinates
  };
  std::vector<Frame> stack;
  stack.push_back({static_cast<int>(w.size()) - 1, {}, AffineMap::identity(d)});
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    bool split = false;
    while (f.i >= 0) {
      const FoldingLetter& letter = w[static_cast<size_t>(f.i)];
      if (letter_side(letter, g) < 0) {
        const RealRoot& r = letter_root(letter);
        ChartIneq glue = pullback_ge(r.covector, Rat(letter.level), f.fold);
        // private branch: fold fires
        Frame fired;
        fired.i = f.i - 1;
        fired.region = f.region;
        fired.region.push_back(negate(glue));
        fired.fold = letter_reflection(letter).compose(f.fold);
        if (region_feasible(fired.region, d)) stack.push_back(fired);
        // glue branch: continue unfolded
        f.region.push_back(glue);
        if (!region_feasible(f.region, d)) {
          split = true;
          break;
        }
      }
      --f.i;
    }
    if (!split) out.push_back({f.region, f.fold, 0});
  }

  // Interior witness per piece (drop lower-dimensional cells).
  std::vector<SplitPiece> kept;
  for (SplitPiece& p : out) {
    std::vector<lp::Row> rows;
    // maximize t subject to cov.b - t >= rhs, t <= 1: variables (b, t)
    VecQ obj = vec_zero(d + 1);
    obj[static_cast<size_t>(d)] = -1;
    for (const ChartIneq& q : p.region) {
      lp::Row row;
      row.a = q.covector;
      row.a.push_back(Rat(-1));
      row.rel = lp::Rel::Ge;
      row.b = q.rhs;
      rows.push_back(row);
    }
    lp::Row cap;
    cap.a = vec_zero(d + 1);
    cap.a[static_cast<size_t>(d)] = 1;
    cap.rel = lp::Rel::Le;
    cap.b = Rat(1);
    rows.push_back(cap);
    auto r = lp::minimize(obj, rows);
    if (!r) continue;  // cannot happen: t capped
    if (-r->value <= 0) continue;  // empty interior
    VecQ b(r->witness.begin(), r->witness.begin() + d);
    p.witness_resident = canonicalize(apartment, b).apartment;
    kept.push_back(p);
  }
  return kept;
}

int Masure::gallery_distance(const SectorGermId& a, const SectorGermId& b) const {
  SectorGermId ca = germ_canonical_signed(*realization_, *table_, a);
  SectorGermId cb = germ_canonical_signed(*realization_, *table_, b);
  if (ca.sign != cb.sign)
    throw Error(Errc::MixedSigns, "gallery distance needs germs of one sign");
  std::vector<int> wordv;
  const std::vector<int>& wa = ca.word.word();
  wordv.assign(wa.rbegin(), wa.rend());  // involutive generators: reversed word is the inverse
  wordv.insert(wordv.end(), cb.word.word().begin(), cb.word.word().end());
  return weyl_reduce(*realization_, wordv).length();
}

int Masure::germ_distance_to_apartment(int apartment, const SectorGermId& g,
                                       int max_length) const {
  SectorGermId cg = germ_canonical_signed(*realization_, *table_, g);
  // BFS over W^v elements u by length; candidate germ (sign, w_g u).
  std::vector<WeylWord> frontier = {weyl_reduce(*realization_, {})};
  std::vector<MatQ> seen = {frontier[0].matrix()};
  for (int length = 0; length <= max_length; ++length) {
    for (const WeylWord& u : frontier) {
      std::vector<int> v = cg.word.word();
      v.insert(v.end(), u.word().begin(), u.word().end());
      SectorGermId cand = SectorGermId::make(*realization_, cg.sign, v);
      try {
        if (contains_germ(apartment, cand)) return length;
      } catch (const Error& e) {
        if (e.code() != Errc::RootOutsideTable) throw;
      }
    }
    std::vector<WeylWord> next;
    for (const WeylWord& u : frontier)
      for (int i = 0; i < realization_->rank(); ++i) {
        std::vector<int> v = u.word();
        v.push_back(i);
        WeylWord cand = weyl_reduce(*realization_, v);
        if (cand.length() != u.length() + 1) continue;
        bool dup = false;
        for (const MatQ& m : seen)
          if (m == cand.matrix()) { dup = true; break; }
        if (!dup) {
          seen.push_back(cand.matrix());
          next.push_back(cand);
        }
      }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  throw Error(Errc::HeightBoundExhausted,
              "no germ of the apartment within gallery radius " + std::to_string(max_length));
}

SectorGermId Masure::automorphism_on_germ(const Automorphism& aut, const SectorGermId& g) const {
  std::vector<int> v = aut.vectorial.word();
  v.insert(v.end(), g.word.word().begin(), g.word.word().end());
  return SectorGermId::make(*realization_, g.sign, v);
}

MasurePoint Masure::automorphism_apply(const Automorphism& aut, const MasurePoint& x) {
  MasurePoint cx = canonicalize(x);
  const Word w = word(cx.apartment);
  const int d = realization_->dim();
  const int n = realization_->rank();

  AffineMap acc{aut.vectorial.matrix(), aut.translation};
  int cur = 0;
  for (const FoldingLetter& letter : w) {
    const RealRoot& beta = letter_root(letter);
    auto inv = mat_inverse(acc.m);
    assert(inv.has_value());
    VecQ gamma_cov = inv->apply_transpose(beta.covector);
    // alpha-coordinates of the transported root
    MatQ cols = MatQ::zero(d, n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i)
        cols.m[static_cast<size_t>(i)][static_cast<size_t>(j)] =
            realization_->simple_root(j)[static_cast<size_t>(i)];
    auto coords_q = mat_solve(cols, gamma_cov);
    if (!coords_q) throw Error(Errc::WallImageOutsideTable, "transported wall is not a real root");
    std::vector<long> coords(static_cast<size_t>(n));
    for (int j = 0; j < n; ++j) {
      if (!rat_is_integer((*coords_q)[static_cast<size_t>(j)]))
        throw Error(Errc::WallImageOutsideTable, "transported root has non-integer coordinates");
      coords[static_cast<size_t>(j)] = rat_to_long((*coords_q)[static_cast<size_t>(j)]);
    }
    Rat level = Rat(letter.level) - vec_dot(gamma_cov, acc.t);
    // A negative transported covector flips the glue side; the image chart is
    // recoordinatized by the wall reflection to restore positive-root gluing.
    bool flipped = root_sign(coords) < 0;
    if (flipped) {
      for (long& c : coords) c = -c;
      level = -level;
    }
    auto idx = table_->find(coords);
    if (!idx || !table_->root(*idx).positive)
      throw Error(Errc::WallImageOutsideTable, "transported wall outside the root table");
    if (!rat_is_integer(level))
      throw Error(Errc::WallImageOutsideTable, "transported wall level is not integral");
    int pos = -1;
    for (int p = 0; p < static_cast<int>(table_->positive().size()); ++p)
      if (table_->positive()[static_cast<size_t>(p)] == *idx) { pos = p; break; }
    assert(pos >= 0);
    int sheet = letter.sheet;
    auto pit = aut.sheet_perms.find({letter.root_pos, letter.level});
    if (pit != aut.sheet_perms.end()) {
      const std::vector<int>& perm = pit->second;
      if (static_cast<int>(perm.size()) != config_.thickness - 1)
        throw Error(Errc::ConfigInvalid, "sheet permutation has wrong size");
      sheet = perm[static_cast<size_t>(sheet - 1)] + 1;
    }
    cur = branch(cur, pos, level, sheet);
    if (flipped) {
      const RealRoot& star = table_->root(*idx);
      acc = reflection(star.covector, star.coroot, level).compose(acc);
    }
  }
  return canonicalize(cur, acc.apply(cx.coords));
}

}  // namespace masure
