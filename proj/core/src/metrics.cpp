#include "masure/metrics.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>

namespace masure {

bool is_dominant(const GcmRealization& g, const VecQ& u) {
  for (int i = 0; i < g.rank(); ++i)
    if (vec_dot(g.simple_root(i), u) < 0) return false;
  return true;
}

bool is_strictly_dominant(const GcmRealization& g, const VecQ& u) {
  for (int i = 0; i < g.rank(); ++i)
    if (vec_dot(g.simple_root(i), u) <= 0) return false;
  return true;
}

namespace {

VecQ germ_direction(const Masure& m, const SectorGermId& g, const VecQ& u) {
  return vec_scale(Rat(g.sign), g.word.matrix().apply(u));
}

}  // namespace

MasurePoint translate(const Masure& m, const MasurePoint& x, const SectorGermId& g,
                      const VecQ& u) {
  if (!is_dominant(m.realization(), u))
    throw Error(Errc::ConfigInvalid, "translation direction must be dominant");
  MasurePoint cx = m.canonicalize(x);
  VecQ target = vec_add(m.retract(cx, g), germ_direction(m, g, u));
  return m.chart_point(cx, g, target);
}

namespace {

struct OrderedPiece {
  const ChartPiece* piece;
  int host_depth;
  int index;
};

std::vector<OrderedPiece> ordered_pieces(const Masure& m, const UnfoldedChart& chart) {
  std::vector<OrderedPiece> out;
  for (int i = 0; i < static_cast<int>(chart.pieces.size()); ++i)
    out.push_back({&chart.pieces[static_cast<size_t>(i)],
                   m.depth(chart.pieces[static_cast<size_t>(i)].host), i});
  std::stable_sort(out.begin(), out.end(), [](const OrderedPiece& a, const OrderedPiece& b) {
    return a.host_depth < b.host_depth;
  });
  return out;
}

// Rows over the stacked pair variable (u, u') of length 2d.
void append_cone_rows(const GcmRealization& g, std::vector<lp::Row>* rows) {
  int d = g.dim();
  for (int block = 0; block < 2; ++block)
    for (int i = 0; i < g.rank(); ++i) {
      lp::Row r;
      r.a = vec_zero(2 * d);
      const VecQ& cov = g.simple_root(i);
      for (int j = 0; j < d; ++j) r.a[static_cast<size_t>(block * d + j)] = cov[static_cast<size_t>(j)];
      r.rel = lp::Rel::Ge;
      r.b = Rat(0);
      rows->push_back(r);
    }
}

// Region constraint cov.c >= rhs with c = base + dir_matrix * v, v one of the
// two d-blocks.
void append_region_rows(const std::vector<ChartIneq>& region, const VecQ& base, const MatQ& dir,
                        int block, int d, std::vector<lp::Row>* rows) {
  for (const ChartIneq& q : region) {
    lp::Row r;
    r.a = vec_zero(2 * d);
    VecQ comp = dir.apply_transpose(q.covector);
    for (int j = 0; j < d; ++j) r.a[static_cast<size_t>(block * d + j)] = comp[static_cast<size_t>(j)];
    r.rel = lp::Rel::Ge;
    r.b = q.rhs - vec_dot(q.covector, base);
    rows->push_back(r);
  }
}

}  // namespace

DistanceResult distance(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                        const ThetaSpec& theta) {
  const GcmRealization& g = m.realization();
  const int d = g.dim();
  MasurePoint cx = m.canonicalize(x), cxp = m.canonicalize(xp);
  if (cx == cxp) return {Rat(0), {vec_zero(d), vec_zero(d)}};

  UnfoldedChart chart1 = m.unfold(cx, theta.germ);
  UnfoldedChart chart2 = m.unfold(cxp, theta.germ);
  MatQ dir = theta.germ.word.matrix();
  for (auto& row : dir.m)
    for (auto& v : row) v *= theta.germ.sign;

  std::optional<DistanceResult> best;
  auto pieces1 = ordered_pieces(m, chart1);
  auto pieces2 = ordered_pieces(m, chart2);
  for (const OrderedPiece& p1 : pieces1) {
    for (const OrderedPiece& p2 : pieces2) {
      if (p1.piece->host != p2.piece->host) continue;
      std::vector<lp::Row> rows;
      append_cone_rows(g, &rows);
      append_region_rows(p1.piece->region, chart1.anchor_position, dir, 0, d, &rows);
      append_region_rows(p2.piece->region, chart2.anchor_position, dir, 1, d, &rows);
      // label equality: A1(c1) = A2(c2)
      const AffineMap& a1 = p1.piece->to_labels;
      const AffineMap& a2 = p2.piece->to_labels;
      MatQ m1 = a1.m.mul(dir), m2 = a2.m.mul(dir);
      VecQ rhs = vec_sub(vec_add(a2.m.apply(chart2.anchor_position), a2.t),
                         vec_add(a1.m.apply(chart1.anchor_position), a1.t));
      for (int i = 0; i < d; ++i) {
        lp::Row r;
        r.a = vec_zero(2 * d);
        for (int j = 0; j < d; ++j) {
          r.a[static_cast<size_t>(j)] = m1.m[static_cast<size_t>(i)][static_cast<size_t>(j)];
          r.a[static_cast<size_t>(d + j)] = -m2.m[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        r.rel = lp::Rel::Eq;
        r.b = rhs[static_cast<size_t>(i)];
        rows.push_back(r);
      }
      auto np = lp::min_norm_pair(d, theta.norm == NormKind::LInf, rows);
      if (!np) continue;
      // Walk-exact witness check; closed piece boundaries can overclaim at
      // degenerate wall crossings, so reject pairs whose optimum fails it.
      MasurePoint y1 = translate(m, cx, theta.germ, np->u);
      MasurePoint y2 = translate(m, cxp, theta.germ, np->uprime);
      if (!m.points_equal(y1, y2)) continue;
      bool better = !best || np->value < best->value;
      if (!better && best && np->value == best->value) {
        VecQ cand = np->u, prev = best->witness.u;
        cand.insert(cand.end(), np->uprime.begin(), np->uprime.end());
        prev.insert(prev.end(), best->witness.uprime.begin(), best->witness.uprime.end());
        better = vec_cmp(cand, prev) < 0;
      }
      if (better) best = DistanceResult{np->value, {np->u, np->uprime}};
    }
  }
  if (!best)
    throw Error(Errc::Infeasible,
                "no feasible translation pair found; internal consistency failure");
  return *best;
}

Rat distance_mixed(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                   const XiSpec& xi) {
  if (xi.plus.germ.sign <= 0 || xi.minus.germ.sign >= 0)
    throw Error(Errc::MixedSigns, "xi needs one positive and one negative germ");
  return distance(m, x, xp, xi.plus).value + distance(m, x, xp, xi.minus).value;
}

Rat chart_norm(const Masure& m, const ThetaSpec& theta, const VecQ& diff) {
  const GcmRealization& g = m.realization();
  const int d = g.dim();
  std::vector<lp::Row> rows;
  append_cone_rows(g, &rows);
  // u - u' = sign * w^{-1} diff
  MatQ winv = *mat_inverse(theta.germ.word.matrix());
  VecQ target = vec_scale(Rat(theta.germ.sign), winv.apply(diff));
  for (int i = 0; i < d; ++i) {
    lp::Row r;
    r.a = vec_zero(2 * d);
    r.a[static_cast<size_t>(i)] = 1;
    r.a[static_cast<size_t>(d + i)] = -1;
    r.rel = lp::Rel::Eq;
    r.b = target[static_cast<size_t>(i)];
    rows.push_back(r);
  }
  auto np = lp::min_norm_pair(d, theta.norm == NormKind::LInf, rows);
  if (!np) throw Error(Errc::Infeasible, "chart norm problem infeasible");
  return np->value;
}

Rat distance_oracle(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                    const ThetaSpec& theta, long resolution) {
  if (resolution < 1) throw Error(Errc::ConfigInvalid, "oracle resolution must be >= 1");
  const GcmRealization& g = m.realization();
  const int d = g.dim();
  MasurePoint cx = m.canonicalize(x), cxp = m.canonicalize(xp);
  if (cx == cxp) return Rat(0);

  // Feasible pair along the interior dominant direction fixes the radius.
  VecQ p1 = m.retract(cx, theta.germ), p2 = m.retract(cxp, theta.germ);
  MatQ winv = *mat_inverse(theta.germ.word.matrix());
  VecQ delta = vec_scale(Rat(theta.germ.sign), winv.apply(vec_sub(p1, p2)));
  const VecQ& interior = g.chamber_interior_point();
  Rat tstar(1);
  for (int i = 0; i < g.rank(); ++i) {
    Rat need = -vec_dot(g.simple_root(i), delta) + 1;
    if (need > tstar) tstar = need;
  }
  for (;;) {
    VecQ u0 = vec_scale(tstar, interior);
    VecQ u0p = vec_add(u0, delta);
    MasurePoint y1 = translate(m, cx, theta.germ, u0);
    MasurePoint y2 = translate(m, cxp, theta.germ, u0p);
    if (y1.apartment == m.root_apartment() && y2.apartment == m.root_apartment() &&
        m.points_equal(y1, y2))
      break;
    tstar *= 2;
  }
  Rat radius = norm_eval(theta.norm, vec_scale(tstar, interior)) +
               norm_eval(theta.norm, vec_add(vec_scale(tstar, interior), delta));
  Rat best = radius;

  // Enumerate lattice points of the dominant cone with |u| <= bound.
  std::function<void(VecQ&, int, const Rat&, std::vector<VecQ>&)> enumerate =
      [&](VecQ& cur, int coord, const Rat& bound, std::vector<VecQ>& out) {
        if (coord == d) {
          if (is_dominant(g, cur) && norm_eval(theta.norm, cur) <= bound) out.push_back(cur);
          return;
        }
        long capped = rat_to_long(rat_floor(bound * resolution));
        for (long k = -capped; k <= capped; ++k) {
          cur[static_cast<size_t>(coord)] = Rat(k, resolution);
          enumerate(cur, coord + 1, bound, out);
        }
      };
  VecQ cur = vec_zero(d);
  std::vector<VecQ> candidates;
  enumerate(cur, 0, best, candidates);
  std::sort(candidates.begin(), candidates.end(), [&](const VecQ& a, const VecQ& b) {
    Rat na = norm_eval(theta.norm, a), nb = norm_eval(theta.norm, b);
    if (na != nb) return na < nb;
    return vec_cmp(a, b) < 0;
  });
  for (const VecQ& u : candidates) {
    Rat nu = norm_eval(theta.norm, u);
    if (nu >= best) break;
    MasurePoint y1 = translate(m, cx, theta.germ, u);
    for (const VecQ& up : candidates) {
      Rat tot = nu + norm_eval(theta.norm, up);
      if (tot >= best) continue;
      MasurePoint y2 = translate(m, cxp, theta.germ, up);
      if (m.points_equal(y1, y2)) best = tot;
    }
  }
  return best;
}

RayExit ray_exit(const Masure& m, const MasurePoint& x, const VecQ& u, int sigma) {
  if (!is_strictly_dominant(m.realization(), u))
    throw Error(Errc::ConfigInvalid, "ray direction must lie in the open chamber");
  if (sigma != 1 && sigma != -1) throw Error(Errc::ConfigInvalid, "sigma must be +-1");
  SectorGermId germ = SectorGermId::make(m.realization(), sigma, {});
  MasurePoint cx = m.canonicalize(x);
  VecQ p = m.retract(cx, germ);
  VecQ q = vec_scale(Rat(sigma), u);
  const Word& w = m.word(cx.apartment);
  std::vector<bool> fired = m.retraction_folds(cx, germ);

  // Exact section walk along the ray t -> p + t q, splitting [0, infinity)
  // wherever a wall test changes sign; membership intervals where the result
  // canonicalizes into the root apartment.
  struct Span {
    Rat lo;
    std::optional<Rat> hi;  // nullopt = +infinity
  };
  std::vector<Span> member;

  auto root_for = m.root_apartment();
  (void)root_for;

  std::function<void(Span, VecQ, VecQ, size_t)> descend = [&](Span span, VecQ zp, VecQ zq,
                                                              size_t i) {
    if (span.hi && *span.hi < span.lo) return;
    if (i == w.size()) {
      // terminal at prefix level i: root membership needs every prefix glue
      // test nonnegative; all tests are affine in t.
      Span win = span;
      bool empty = false;
      for (size_t t = 0; t < i && !empty; ++t) {
        const RealRoot& r = m.table().root(m.table().positive_root(w[t].root_pos));
        Rat c = vec_dot(r.covector, zp) + w[t].level;
        Rat slope = vec_dot(r.covector, zq);
        if (slope == 0) {
          if (c < 0) empty = true;
        } else if (slope > 0) {
          Rat bound = -c / slope;
          if (bound > win.lo) win.lo = bound;
        } else {
          Rat bound = -c / slope;
          if (!win.hi || bound < *win.hi) win.hi = bound;
        }
      }
      if (!empty && (!win.hi || *win.hi >= win.lo)) member.push_back(win);
      return;
    }
    const FoldingLetter& letter = w[i];
    if (m.letter_side(letter, germ) > 0) {
      descend(span, std::move(zp), std::move(zq), i + 1);
      return;
    }
    const RealRoot& r = m.table().root(m.table().positive_root(letter.root_pos));
    Rat c = vec_dot(r.covector, zp) + letter.level;
    Rat slope = vec_dot(r.covector, zq);
    AffineMap s = reflection(r.covector, r.coroot, Rat(letter.level));
    auto on_glue = [&](Span sp) {
      // descend; fold only where x itself folded
      if (fired[i])
        descend(sp, s.apply(zp), s.m.apply(zq), i + 1);
      else
        descend(sp, zp, zq, i + 1);
    };
    auto on_private = [&](Span sp) {
      // stopped before this branch: terminal at prefix level i
      Span win = sp;
      bool empty = false;
      for (size_t t = 0; t < i && !empty; ++t) {
        const RealRoot& rt = m.table().root(m.table().positive_root(w[t].root_pos));
        Rat ct = vec_dot(rt.covector, zp) + w[t].level;
        Rat st = vec_dot(rt.covector, zq);
        if (st == 0) {
          if (ct < 0) empty = true;
        } else if (st > 0) {
          Rat bound = -ct / st;
          if (bound > win.lo) win.lo = bound;
        } else {
          Rat bound = -ct / st;
          if (!win.hi || bound < *win.hi) win.hi = bound;
        }
      }
      if (!empty && (!win.hi || *win.hi >= win.lo)) member.push_back(win);
    };
    if (slope == 0) {
      if (c >= 0)
        on_glue(span);
      else
        on_private(span);
      return;
    }
    Rat t0 = -c / slope;
    if (slope > 0) {
      // glue for t >= t0
      Span below{span.lo, span.hi}, above{std::max(span.lo, t0), span.hi};
      if (!below.hi || t0 < *below.hi) below.hi = t0;
      if (below.hi && *below.hi >= below.lo) on_private(below);
      if (!above.hi || *above.hi >= above.lo) on_glue(above);
    } else {
      Span below{span.lo, span.hi}, above{std::max(span.lo, t0), span.hi};
      if (!below.hi || t0 < *below.hi) below.hi = t0;
      if (below.hi && *below.hi >= below.lo) on_glue(below);
      if (!above.hi || *above.hi >= above.lo) on_private(above);
    }
  };
  descend({Rat(0), std::nullopt}, p, q, 0);

  std::sort(member.begin(), member.end(), [](const Span& a, const Span& b) { return a.lo < b.lo; });
  std::vector<Span> merged;
  for (const Span& sp : member) {
    if (!merged.empty() && merged.back().hi && *merged.back().hi >= sp.lo) {
      if (!sp.hi)
        merged.back().hi = std::nullopt;
      else if (merged.back().hi && *sp.hi > *merged.back().hi)
        merged.back().hi = sp.hi;
    } else if (!merged.empty() && !merged.back().hi) {
      // already unbounded
    } else {
      merged.push_back(sp);
    }
  }
  if (merged.size() != 1 || merged.back().hi)
    throw Error(Errc::ChartExit, "ray membership in the root apartment is not a single tail");
  Rat T = merged.front().lo;
  if (T < 0) T = 0;

  RayExit out;
  out.time = T;
  out.land = vec_add(p, vec_scale(Rat(sigma) * T, u));
  MasurePoint check = translate(m, cx, germ, vec_scale(T, u));
  if (check.apartment != m.root_apartment() || vec_cmp(check.coords, out.land) != 0)
    throw Error(Errc::ChartExit, "ray exit landing point failed verification");
  return out;
}

MasurePoint geodesic(const Masure& m, const MasurePoint& x, const MasurePoint& xp,
                     const ThetaSpec& theta, const Rat& t) {
  if (t < 0 || t > 1) throw Error(Errc::ConfigInvalid, "geodesic parameter outside [0,1]");
  DistanceResult dr = distance(m, x, xp, theta);
  if (dr.value == 0) return m.canonicalize(x);
  Rat n1 = norm_eval(theta.norm, dr.witness.u);
  Rat a1 = n1 / dr.value;
  if (t <= a1 && a1 > 0)
    return translate(m, x, theta.germ, vec_scale(t / a1, dr.witness.u));
  Rat a2 = 1 - a1;
  return translate(m, xp, theta.germ, vec_scale((1 - t) / a2, dr.witness.uprime));
}

VecQ geodesic_family(const Masure& m, const VecQ& xprime, const ThetaSpec& theta, const Rat& z,
                     const Rat& t) {
  if (z < 0 || z > 1 || t < 0 || t > 1)
    throw Error(Errc::ConfigInvalid, "family parameters outside [0,1]");
  MasurePoint origin{m.root_apartment(), vec_zero(m.realization().dim())};
  MasurePoint target{m.root_apartment(), xprime};
  DistanceResult dr = distance(m, origin, target, theta);
  const VecQ& u1 = dr.witness.u;
  const VecQ& u2 = dr.witness.uprime;
  if (vec_is_zero(u1) || vec_is_zero(u2))
    throw Error(Errc::DegenerateWitness, "geodesic family needs both witness legs nonzero");
  Rat n1 = norm_eval(theta.norm, u1);
  Rat a1 = n1 / dr.value, a2 = 1 - a1;
  VecQ combo;
  if (t <= z * a1 && a1 > 0) {
    combo = vec_scale(t / a1, u1);
  } else if (t <= z * a1 + a2) {
    combo = vec_sub(vec_scale(z, u1), vec_scale((t - z * a1) / a2, u2));
  } else {
    combo = vec_sub(vec_scale((t - a2) / a1, u1), u2);
  }
  return germ_direction(m, theta.germ, combo);
}

MasurePoint chi(const Masure& m, const MasurePoint& x, const Rat& t, const VecQ& u) {
  if (t < 0 || t > 1) throw Error(Errc::ConfigInvalid, "chi parameter outside [0,1]");
  MasurePoint cx = m.canonicalize(x);
  RayExit exit = ray_exit(m, cx, u, +1);
  if (t == 1) return {m.root_apartment(), exit.land};
  Rat r = t / (1 - t);
  SectorGermId plus = SectorGermId::make(m.realization(), +1, {});
  if (r < exit.time) return translate(m, cx, plus, vec_scale(r, u));
  return {m.root_apartment(), exit.land};
}

MasurePoint upsilon(const Masure& m, const MasurePoint& x, const Rat& t, const VecQ& u) {
  if (t < 0 || t > 1) throw Error(Errc::ConfigInvalid, "upsilon parameter outside [0,1]");
  if (t <= Rat(1, 2)) return chi(m, x, 2 * t, u);
  RayExit exit = ray_exit(m, x, u, +1);
  return {m.root_apartment(), vec_scale(2 - 2 * t, exit.land)};
}

namespace {

// Vertex candidates of the theta unit ball: +-(sign w)(vertices of the
// norm-capped dominant cone).
std::vector<VecQ> ball_candidates(const Masure& m, const ThetaSpec& theta) {
  const GcmRealization& g = m.realization();
  const int d = g.dim();
  std::vector<lp::Row> rows;
  for (int i = 0; i < g.rank(); ++i) rows.push_back({g.simple_root(i), lp::Rel::Ge, Rat(0)});
  if (theta.norm == NormKind::L1) {
    for (int mask = 0; mask < (1 << d); ++mask) {
      lp::Row r;
      r.a = vec_zero(d);
      for (int j = 0; j < d; ++j) r.a[static_cast<size_t>(j)] = (mask >> j) & 1 ? 1 : -1;
      r.rel = lp::Rel::Le;
      r.b = Rat(1);
      rows.push_back(r);
    }
  } else {
    for (int j = 0; j < d; ++j) {
      lp::Row r1, r2;
      r1.a = vec_zero(d);
      r1.a[static_cast<size_t>(j)] = 1;
      r1.rel = lp::Rel::Le;
      r1.b = Rat(1);
      r2.a = vec_zero(d);
      r2.a[static_cast<size_t>(j)] = -1;
      r2.rel = lp::Rel::Le;
      r2.b = Rat(1);
      rows.push_back(r1);
      rows.push_back(r2);
    }
  }
  std::vector<VecQ> verts = polytope_vertices(rows, d);
  std::vector<VecQ> out;
  for (const VecQ& v : verts) {
    VecQ img = germ_direction(m, theta.germ, v);
    out.push_back(img);
    out.push_back(vec_neg(img));
  }
  return out;
}

}  // namespace

Rat norm_ratio(const Masure& m, const ThetaSpec& a, const ThetaSpec& b) {
  Rat best(0);
  for (const VecQ& v : ball_candidates(m, b)) {
    if (vec_is_zero(v)) continue;
    Rat val = chart_norm(m, a, v);
    if (val > best) best = val;
  }
  return best;
}

Rat reflection_lipschitz(const Masure& m, const ThetaSpec& theta, int root_idx) {
  const RealRoot& r = m.table().root(root_idx);
  MatQ refl = reflection(r.covector, r.coroot, Rat(0)).m;
  Rat best(0);
  for (const VecQ& v : ball_candidates(m, theta)) {
    if (vec_is_zero(v)) continue;
    Rat val = chart_norm(m, theta, refl.apply(v));
    if (val > best) best = val;
  }
  return best;
}

EquivalenceReport equivalence_constant(
    const Masure& m, const ThetaSpec& t1, const ThetaSpec& t2,
    const std::vector<std::pair<MasurePoint, MasurePoint>>& samples) {
  const GcmRealization& g = m.realization();
  SectorGermId g1 = germ_canonical_signed(g, m.table(), t1.germ);
  SectorGermId g2 = germ_canonical_signed(g, m.table(), t2.germ);
  if (g1.sign != g2.sign)
    throw Error(Errc::MixedSigns, "equivalence constants need germs of one sign");

  // Minimal gallery from g1 to g2 and the per-step constants.
  std::vector<int> rel(g1.word.word().rbegin(), g1.word.word().rend());
  rel.insert(rel.end(), g2.word.word().begin(), g2.word.word().end());
  WeylWord path = weyl_reduce(g, rel);
  EquivalenceReport rep;
  rep.gallery_length = path.length();
  Rat fwd(1), bwd(1);
  std::vector<int> prefix = g1.word.word();
  ThetaSpec cur = t1;
  for (int step = 0; step < path.length(); ++step) {
    int gen = path.word()[static_cast<size_t>(step)];
    // separating wall direction: (prefix) applied to alpha_gen
    std::vector<long> coords(static_cast<size_t>(g.rank()), 0);
    coords[static_cast<size_t>(gen)] = 1;
    std::vector<int> rev(prefix.rbegin(), prefix.rend());
    std::vector<long> wall = word_inverse_on_root(g, rev, coords);
    if (root_sign(wall) < 0)
      for (long& c : wall) c = -c;
    auto idx = m.table().find(wall);
    if (!idx) throw Error(Errc::RootOutsideTable, "separating wall outside root table");
    prefix.push_back(gen);
    ThetaSpec next{t1.norm, SectorGermId::make(g, g1.sign, prefix)};
    Rat l0f = norm_ratio(m, next, cur), l1f = reflection_lipschitz(m, next, *idx);
    Rat l0b = norm_ratio(m, cur, next), l1b = reflection_lipschitz(m, cur, *idx);
    fwd *= l0f * l1f;
    bwd *= l0b * l1b;
    cur = next;
  }
  rep.apriori = std::max(fwd, bwd);
  if (rep.gallery_length == 0) rep.apriori = std::max(norm_ratio(m, t2, t1), norm_ratio(m, t1, t2));

  Rat ef(0), eb(0);
  for (const auto& [a, b] : samples) {
    Rat d1 = distance(m, a, b, t1).value;
    Rat d2 = distance(m, a, b, t2).value;
    if (d1 == 0 || d2 == 0) continue;
    if (d2 / d1 > ef) ef = d2 / d1;
    if (d1 / d2 > eb) eb = d1 / d2;
  }
  rep.empirical_forward = ef;
  rep.empirical_backward = eb;
  if (rep.apriori < 1) rep.apriori = 1;
  return rep;
}

DiscretenessReport discreteness_probe(Masure& m, const XiSpec& xi, int levels) {
  const GcmRealization& g = m.realization();
  const RealRootTable& table = m.table();
  const int d = g.dim();
  DiscretenessReport rep;

  if (table.saturated()) {
    rep.building = true;
    // Lattice points of the root chart plus branch-sheet vertices near 0.
    std::vector<MasurePoint> pts;
    std::function<void(VecQ&, int)> enumerate = [&](VecQ& cur, int coord) {
      if (coord == d) {
        pts.push_back(m.canonicalize(m.root_apartment(), cur));
        return;
      }
      for (long k = -2; k <= 2; ++k) {
        cur[static_cast<size_t>(coord)] = Rat(k);
        enumerate(cur, coord + 1);
      }
    };
    VecQ cur = vec_zero(d);
    enumerate(cur, 0);
    for (int pos = 0; pos < static_cast<int>(table.positive().size()); ++pos) {
      const RealRoot& beta = table.root(table.positive_root(pos));
      for (long k = -2; k <= 2; ++k) {
        int child = m.branch(m.root_apartment(), pos, Rat(k), 1);
        // an integral point strictly inside the sheet
        for (long c0 = -3; c0 <= 3; ++c0) {
          VecQ b = vec_scale(Rat(c0), beta.coroot);
          if (vec_dot(beta.covector, b) + k < 0) {
            pts.push_back(m.canonicalize(child, b));
            break;
          }
        }
      }
    }
    std::optional<Rat> spacing;
    for (size_t i = 0; i < pts.size(); ++i)
      for (size_t j = i + 1; j < pts.size(); ++j) {
        if (m.points_equal(pts[i], pts[j])) continue;
        Rat dv = distance(m, pts[i], pts[j], xi.plus).value;
        if (!spacing || dv < *spacing) spacing = dv;
      }
    rep.min_spacing = spacing.value_or(Rat(0));
    return rep;
  }

  // Non-building branch: walls of shrinking gap toward 0, mixed distance
  // stays separated.
  MasurePoint origin{m.root_apartment(), vec_zero(d)};
  Rat last_cone(0), last_coroot(0);
  int made = 0;
  for (int pos = 0; pos < static_cast<int>(table.positive().size()) && made < levels; ++pos) {
    int idx = table.positive_root(pos);
    const RealRoot& beta = table.root(idx);
    // cone-restricted dual norm: max beta(u) over dominant u with |u|_1 <= 1
    std::vector<lp::Row> rows;
    for (int i = 0; i < g.rank(); ++i) rows.push_back({g.simple_root(i), lp::Rel::Ge, Rat(0)});
    for (int mask = 0; mask < (1 << d); ++mask) {
      lp::Row r;
      r.a = vec_zero(d);
      for (int j = 0; j < d; ++j) r.a[static_cast<size_t>(j)] = (mask >> j) & 1 ? 1 : -1;
      r.rel = lp::Rel::Le;
      r.b = Rat(1);
      rows.push_back(r);
    }
    auto got = lp::minimize(vec_neg(beta.covector), rows);
    if (!got) continue;
    Rat cone_dual = -got->value;
    Rat coroot_norm = vec_l1(beta.coroot);
    if (cone_dual <= last_cone || coroot_norm <= last_coroot) continue;
    last_cone = cone_dual;
    last_coroot = coroot_norm;

    DiscretenessLevel lvl;
    lvl.index = made + 1;
    lvl.root = idx;
    lvl.level = -1;
    int child = m.branch(m.root_apartment(), pos, Rat(-1), 1);
    MasurePoint lambda = m.canonicalize(child, vec_zero(d));
    lvl.d_plus = distance(m, lambda, origin, xi.plus).value;
    lvl.d_mixed = distance_mixed(m, lambda, origin, xi);
    SectorGermId minus = xi.minus.germ;
    lvl.rho_minus_l1 = vec_l1(m.retract(lambda, minus));
    lvl.mixed_lower = chart_norm(m, xi.minus, m.retract(lambda, minus));
    rep.levels.push_back(lvl);
    ++made;
  }
  if (made < levels)
    throw Error(Errc::HeightBoundExhausted,
                "not enough wall directions of growing dual norm; raise the height bound");
  return rep;
}

UPathReport path_retract_check(const Masure& m, const MasurePoint& x, const VecQ& u) {
  const GcmRealization& g = m.realization();
  if (!is_dominant(g, u)) throw Error(Errc::ConfigInvalid, "u must be dominant");
  MasurePoint cx = m.canonicalize(x);
  SectorGermId minus = SectorGermId::make(g, -1, {});
  const Word& w = m.word(cx.apartment);

  // Piecewise retraction of t -> (x.word, b + t u): split [0,1] at every wall
  // crossing met along the leaf-to-root walk.
  std::function<void(Rat, Rat, VecQ, VecQ, int, std::vector<std::pair<Rat, VecQ>>*)> descend =
      [&](Rat lo, Rat hi, VecQ p, VecQ q, int i, std::vector<std::pair<Rat, VecQ>>* out) {
        if (i < 0) {
          out->push_back({lo, vec_add(p, vec_scale(lo, q))});
          return;
        }
        const FoldingLetter& letter = w[static_cast<size_t>(i)];
        if (m.letter_side(letter, minus) > 0) {
          descend(lo, hi, std::move(p), std::move(q), i - 1, out);
          return;
        }
        const RealRoot& r = m.table().root(m.table().positive_root(letter.root_pos));
        Rat v_lo = vec_dot(r.covector, vec_add(p, vec_scale(lo, q))) + letter.level;
        Rat v_hi = vec_dot(r.covector, vec_add(p, vec_scale(hi, q))) + letter.level;
        Rat slope = vec_dot(r.covector, q);
        AffineMap s = reflection(r.covector, r.coroot, Rat(letter.level));
        auto fire = [&](Rat a, Rat b) {
          descend(a, b, s.apply(p), s.m.apply(q), i - 1, out);
        };
        auto keep = [&](Rat a, Rat b) { descend(a, b, p, q, i - 1, out); };
        if (slope == 0 || (v_lo >= 0 && v_hi >= 0)) {
          if (v_lo < 0)
            fire(lo, hi);
          else
            keep(lo, hi);
          return;
        }
        if (v_lo < 0 && v_hi < 0) {
          fire(lo, hi);
          return;
        }
        Rat t0 = lo + (hi - lo) * (-v_lo) / (v_hi - v_lo);
        if (v_lo < 0) {
          fire(lo, t0);
          keep(t0, hi);
        } else {
          keep(lo, t0);
          fire(t0, hi);
        }
      };

  std::vector<std::pair<Rat, VecQ>> pts;
  descend(Rat(0), Rat(1), cx.coords, u, static_cast<int>(w.size()) - 1, &pts);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  // close the path at t = 1
  pts.push_back({Rat(1), m.retract({cx.apartment, vec_add(cx.coords, u)}, minus)});
  // drop duplicate parameters
  std::vector<std::pair<Rat, VecQ>> clean;
  for (auto& p : pts)
    if (clean.empty() || p.first > clean.back().first) clean.push_back(p);

  UPathReport rep;
  rep.breakpoints = clean;
  rep.check = is_u_path(m.apartment_context(), clean, u);

  VecQ inc = vec_sub(clean.back().second, clean.front().second);
  VecQ gap = vec_sub(u, inc);  // should lie in Q^vee_{R+}
  rep.increment_ok = true;
  for (int i = 0; i < g.rank(); ++i)
    if (gap[static_cast<size_t>(i)] < 0) rep.increment_ok = false;
  for (int i = g.rank(); i < g.dim(); ++i)
    if (gap[static_cast<size_t>(i)] != 0) rep.increment_ok = false;

  rep.two_time_bound_ok = true;
  Rat u0 = vec_l1(u);
  auto rho_at = [&](const Rat& t) {
    return m.retract({cx.apartment, vec_add(cx.coords, vec_scale(t, u))}, minus);
  };
  for (size_t i = 0; i < clean.size(); ++i)
    for (size_t j = i; j < clean.size(); ++j) {
      Rat t = clean[i].first, tp = clean[j].first;
      Rat lhs = vec_l1(vec_sub(rho_at(t), clean.front().second));
      Rat rhs = (t + tp) * u0 + vec_l1(vec_sub(rho_at(tp), clean.front().second));
      if (lhs > rhs) rep.two_time_bound_ok = false;
    }
  return rep;
}

}  // namespace masure
