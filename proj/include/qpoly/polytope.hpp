#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "lp.hpp"

namespace qpoly {

/// Vertex description of an origin-symmetric polytope: one representative
/// per antipodal vertex pair. Canonical form: each generator nonzero with
/// positive leading coordinate, no duplicates, only extreme points,
/// lexicographically sorted, and the set spans the ambient space.
struct SymVRep {
  int dim = 0;
  std::vector<QVec> generators;
  friend bool operator==(const SymVRep&, const SymVRep&) = default;
};

/// Facet description of the same kind of body: the norm is
/// max_i |functionals[i] . x|, one functional per facet pair. Canonical
/// form mirrors SymVRep (the functionals are the vertices of the dual ball).
struct SymHRep {
  int dim = 0;
  std::vector<QVec> functionals;
  friend bool operator==(const SymHRep&, const SymHRep&) = default;
};

/// The listed functionals have a common kernel, so they induce only a
/// seminorm; `witness` is a nonzero vector they all annihilate.
struct seminorm_error : std::domain_error {
  QVec witness;
  explicit seminorm_error(QVec w)
      : std::domain_error("functionals do not separate points"), witness(std::move(w)) {}
};

/// Minkowski gauge of x for the ball absconv(+-generators):
/// min { sum |lambda_i| : x = sum lambda_i v_i }, an exact LP.
/// 0 for x = 0; positive otherwise (the hull is bounded).
inline Rat gauge(const SymVRep& v, const QVec& x) {
  if (static_cast<int>(x.size()) != v.dim) throw precondition_error("gauge: dimension mismatch");
  if (is_zero(x)) return Rat(0);
  const int m = static_cast<int>(v.generators.size());
  LinearProgram p;
  p.num_vars = 2 * m;  // lambda = lambda+ - lambda-
  p.nonneg.assign(p.num_vars, true);
  p.objective.assign(p.num_vars, Rat(1));
  for (int r = 0; r < v.dim; ++r) {
    LinConstraint c;
    c.rel = Rel::EQ;
    c.b = x[r];
    c.a.resize(p.num_vars);
    for (int i = 0; i < m; ++i) {
      c.a[2 * i] = v.generators[i][r];
      c.a[2 * i + 1] = -v.generators[i][r];
    }
    p.constraints.push_back(std::move(c));
  }
  const LpOutcome out = lp_min(p);
  if (out.status != LpStatus::Optimal)
    throw precondition_error("gauge: point outside the span of the generators");
  return out.value;
}

/// max_i |u_i . x| — the polyhedral norm in facet form.
inline Rat norm_h(const SymHRep& h, const QVec& x) {
  if (static_cast<int>(x.size()) != h.dim) throw precondition_error("norm_h: dimension mismatch");
  Rat best(0);
  for (const auto& u : h.functionals) best = max(best, abs(dot(u, x)));
  return best;
}

namespace detail {

// Antipodal-pair representative: flips the sign so the first nonzero
// coordinate is positive. Zero vectors pass through.
inline QVec pair_rep(QVec v) {
  for (const auto& x : v) {
    if (x.is_zero()) continue;
    return x.sign() < 0 ? -v : v;
  }
  return v;
}

inline void sort_dedupe(std::vector<QVec>& pts) {
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

// Extreme points of absconv(+-pts) among the given points, as sorted pair
// representatives. A point is non-extreme exactly when its gauge with
// respect to the remaining points is <= 1, and such points can be removed
// simultaneously (every non-extreme point is a combination of extreme
// ones, which are never removed). Does not check spanning.
inline std::vector<QVec> extreme_points(int dim, std::vector<QVec> pts) {
  for (auto& p : pts) p = pair_rep(std::move(p));
  std::erase_if(pts, [](const QVec& p) { return is_zero(p); });
  sort_dedupe(pts);
  if (pts.size() <= 1) return pts;
  std::vector<QVec> keep;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    SymVRep others{dim, {}};
    others.generators.reserve(pts.size() - 1);
    for (std::size_t j = 0; j < pts.size(); ++j)
      if (j != i) others.generators.push_back(pts[j]);
    bool redundant;
    try {
      redundant = gauge(others, pts[i]) <= Rat(1);
    } catch (const precondition_error&) {
      redundant = false;  // outside the span of the others: certainly extreme
    }
    if (!redundant) keep.push_back(pts[i]);
  }
  return keep;
}

// --- vertex enumeration of { x : |p_i . x| <= 1 } ---------------------
//
// Both representation conversions reduce to this: the facets of
// absconv(+-S) are exactly the vertices of its polar { x : |s.x| <= 1 },
// and polarity applied twice is the identity for bounded symmetric bodies
// with 0 interior. The input must have full rank (checked by callers).
//
// dim <= 2 solves the problem by an angle-sorted convex hull; higher
// dimensions cut a start parallelotope by one halfspace at a time,
// double-description style.

inline int orient(const QVec& o, const QVec& a, const QVec& b) {
  return ((a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])).sign();
}

// Monotone-chain hull; returns the full hull cycle, counterclockwise.
inline std::vector<QVec> hull2d(std::vector<QVec> pts) {
  sort_dedupe(pts);
  const std::size_t n = pts.size();
  if (n <= 2) return pts;
  std::vector<QVec> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    while (k >= 2 && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  const std::size_t lower = k + 1;
  for (std::size_t i = n - 1; i-- > 0;) {
    while (k >= lower && orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

inline std::vector<QVec> polar_vertices_2d(const std::vector<QVec>& pts) {
  std::vector<QVec> sym;
  for (const auto& p : pts) {
    sym.push_back(p);
    sym.push_back(-p);
  }
  const std::vector<QVec> hull = hull2d(std::move(sym));
  std::vector<QVec> out;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const QVec& a = hull[i];
    const QVec& b = hull[(i + 1) % hull.size()];
    // Functional with u.a = u.b = 1; the edge line avoids the origin
    // because the hull has 0 strictly inside.
    auto u = solve(QMat{{a[0], a[1]}, {b[0], b[1]}}, QVec{Rat(1), Rat(1)});
    if (!u) throw std::logic_error("hull edge through the origin");
    out.push_back(std::move(*u));
  }
  return extreme_points(2, std::move(out));
}

struct CutEngine {
  int dim;
  std::vector<QVec> planes;    // processed constraint normals (pair reps)
  std::vector<QVec> vertices;  // current vertex set, both antipodes

  bool feasible(const QVec& x) const {
    for (const auto& p : planes)
      if (abs(dot(p, x)) > Rat(1)) return false;
    return true;
  }

  bool vertex_rank_ok(const QVec& x) const {
    std::vector<QVec> active;
    for (const auto& p : planes)
      if (abs(dot(p, x)) == Rat(1)) active.push_back(p);
    return static_cast<int>(active.size()) >= dim && rank_of_columns(dim, active) == dim;
  }

  // Intersect the current polytope with a.x <= 1. New vertices live on
  // edges crossing the hyperplane; taking candidates from all
  // inside/outside vertex pairs is a superset of those, and the
  // feasibility + active-rank filter keeps exactly the true vertices.
  void cut_halfspace(const QVec& a) {
    std::vector<QVec> in, out_side;
    for (const auto& v : vertices)
      (dot(a, v) <= Rat(1) ? in : out_side).push_back(v);
    if (out_side.empty()) return;
    std::vector<QVec> next = in;
    for (const auto& u : in) {
      const Rat tu = dot(a, u);
      if (tu == Rat(1)) continue;
      for (const auto& w : out_side) {
        const Rat tw = dot(a, w);
        const Rat theta = (Rat(1) - tu) / (tw - tu);
        QVec q = u + theta * (w - u);
        if (!feasible(q)) continue;
        if (!vertex_rank_ok(q)) continue;
        next.push_back(std::move(q));
      }
    }
    sort_dedupe(next);
    vertices = std::move(next);
  }

  void insert_pair(const QVec& p) {
    planes.push_back(p);
    cut_halfspace(p);
    cut_halfspace(-p);
  }
};

inline std::vector<QVec> polar_vertices_nd(int dim, const std::vector<QVec>& pts) {
  const std::vector<int> start = independent_column_subset(dim, pts);
  // Callers verified rank == dim.
  CutEngine eng{dim, {}, {}};
  QMat m(dim, dim);
  for (int i = 0; i < dim; ++i) {
    eng.planes.push_back(pts[start[i]]);
    for (int j = 0; j < dim; ++j) m(i, j) = pts[start[i]][j];
  }
  const QMat inv = *inverse(m);
  for (unsigned mask = 0; mask < (1u << dim); ++mask) {
    QVec s(dim);
    for (int i = 0; i < dim; ++i) s[i] = Rat((mask >> i) & 1u ? -1 : 1);
    eng.vertices.push_back(inv * s);
  }
  sort_dedupe(eng.vertices);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool already = false;
    for (int j : start)
      if (static_cast<std::size_t>(j) == i) already = true;
    if (!already) eng.insert_pair(pts[i]);
  }
  return extreme_points(dim, std::move(eng.vertices));
}

// Dispatch wrapper; `pts` must span (callers raise their own errors).
inline std::vector<QVec> polar_vertices(int dim, std::vector<QVec> pts) {
  pts = extreme_points(dim, std::move(pts));
  if (dim == 0) return {};
  if (dim == 1) {
    Rat m(0);
    for (const auto& p : pts) m = max(m, abs(p[0]));
    return {QVec{Rat(1) / m}};
  }
  if (dim == 2) return polar_vertices_2d(pts);
  return polar_vertices_nd(dim, pts);
}

inline void require_spanning_vrep(const SymVRep& v) {
  for (const auto& g : v.generators) {
    if (static_cast<int>(g.size()) != v.dim) throw precondition_error("generator dimension mismatch");
    if (is_zero(g)) throw degenerate_input_error("zero generator");
  }
  if (rank_of_columns(v.dim, v.generators) != v.dim)
    throw degenerate_input_error("generators do not span the ambient space");
}

inline void require_separating_hrep(const SymHRep& h) {
  std::vector<QVec> rows;
  for (const auto& u : h.functionals) {
    if (static_cast<int>(u.size()) != h.dim) throw precondition_error("functional dimension mismatch");
    rows.push_back(u);
  }
  if (h.dim == 0) return;
  QMat m(static_cast<int>(rows.size()), h.dim);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < h.dim; ++j) m(i, j) = rows[i][j];
  const auto kern = kernel_basis(m);
  if (!kern.empty()) throw seminorm_error(kern.front());
}

}  // namespace detail

/// Canonical form: see SymVRep. Throws degenerate_input_error when the
/// generators fail to span.
inline SymVRep canonicalize(const SymVRep& v) {
  detail::require_spanning_vrep(v);
  return {v.dim, detail::extreme_points(v.dim, v.generators)};
}

/// Canonical form for facet data; the same reduction applied to the dual
/// ball's vertices. Throws seminorm_error (with a kernel witness) when the
/// functionals fail to separate points.
inline SymHRep canonicalize(const SymHRep& h) {
  detail::require_separating_hrep(h);
  std::vector<QVec> fs = h.functionals;
  std::erase_if(fs, [](const QVec& u) { return is_zero(u); });
  return {h.dim, detail::extreme_points(h.dim, std::move(fs))};
}

/// Facet enumeration: the facets of absconv(+-generators) are the vertices
/// of the polar body { u : |u . v_i| <= 1 }, computed exactly.
inline SymHRep vrep_to_hrep(const SymVRep& v) {
  detail::require_spanning_vrep(v);
  return {v.dim, detail::polar_vertices(v.dim, v.generators)};
}

/// Vertex enumeration of { x : |u_i . x| <= 1 }, the polar construction in
/// the other direction.
inline SymVRep hrep_to_vrep(const SymHRep& h) {
  detail::require_separating_hrep(h);
  std::vector<QVec> fs = h.functionals;
  std::erase_if(fs, [](const QVec& u) { return is_zero(u); });
  if (h.dim > 0 && rank_of_columns(h.dim, fs) != h.dim) {
    // unreachable after the separation check; keep the guard for safety
    throw seminorm_error(kernel_basis(QMat::from_columns(h.dim, fs).transpose()).front());
  }
  return {h.dim, detail::polar_vertices(h.dim, std::move(fs))};
}

/// True when x (required to be a unit vector) lies on exactly one facet
/// pair, i.e. exactly one functional attains the max in the norm.
inline bool is_smooth_point(const SymHRep& h, const QVec& x) {
  if (norm_h(h, x) != Rat(1)) throw precondition_error("is_smooth_point: x is not a unit vector");
  int attained = 0;
  for (const auto& u : h.functionals)
    if (abs(dot(u, x)) == Rat(1)) ++attained;
  return attained == 1;
}

}  // namespace qpoly
