#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "space.hpp"

namespace qpoly {

/**
 * A norm-preserving bijection between two subspaces of one space.
 * map is k x k in basis coordinates: the image of dom.basis[j] is
 * sum_i map(i, j) * ran.basis[i].
 */
struct PartialIsometry {
  PolySpace space;
  Subspace dom;
  Subspace ran;
  LinearMap map;
};

/// Outcome of a validation pass: ok, or the first violated invariant with
/// a machine-checkable witness where one exists (ambient coordinates).
struct ValidationReport {
  bool ok = true;
  std::string violation;  // short slug; empty when ok
  std::optional<QVec> witness;
  std::string detail;

  static ValidationReport pass() { return {}; }
  static ValidationReport fail(std::string slug, std::optional<QVec> w = std::nullopt, std::string note = {}) {
    return {false, std::move(slug), std::move(w), std::move(note)};
  }
};

namespace detail {

// Coefficients of a nonzero vanishing combination of the columns, if any.
inline std::optional<QVec> dependence_witness(int dim, const std::vector<QVec>& cols) {
  if (rank_of_columns(dim, cols) == static_cast<int>(cols.size())) return std::nullopt;
  return kernel_basis(QMat::from_columns(dim, cols)).front();
}

}  // namespace detail

/**
 * Full diagnosis of a claimed partial isometry. Never throws: structural
 * problems come back as reports naming the first violated invariant, in a
 * fixed order (shapes, basis independence, map shape, map invertibility,
 * norm preservation). The norm-preservation witness is a vector, in
 * ambient coordinates, whose norm differs from its image's norm.
 */
inline ValidationReport validate(const PartialIsometry& o) noexcept {
  try {
    const int d = o.space.dim();
    if (o.dom.ambient_dim != d)
      return ValidationReport::fail("domain-ambient-mismatch", std::nullopt,
                                    "domain lives in dimension " + std::to_string(o.dom.ambient_dim) +
                                        ", space has " + std::to_string(d));
    if (o.ran.ambient_dim != d)
      return ValidationReport::fail("range-ambient-mismatch", std::nullopt,
                                    "range lives in dimension " + std::to_string(o.ran.ambient_dim) +
                                        ", space has " + std::to_string(d));
    for (const auto& b : o.dom.basis)
      if (static_cast<int>(b.size()) != d)
        return ValidationReport::fail("domain-ambient-mismatch", std::nullopt, "basis vector of wrong length");
    for (const auto& b : o.ran.basis)
      if (static_cast<int>(b.size()) != d)
        return ValidationReport::fail("range-ambient-mismatch", std::nullopt, "basis vector of wrong length");

    if (auto w = detail::dependence_witness(d, o.dom.basis))
      return ValidationReport::fail("domain-basis-dependent", std::move(w),
                                    "witness holds coefficients of a vanishing combination");
    if (auto w = detail::dependence_witness(d, o.ran.basis))
      return ValidationReport::fail("range-basis-dependent", std::move(w),
                                    "witness holds coefficients of a vanishing combination");

    const int k = static_cast<int>(o.dom.basis.size());
    if (static_cast<int>(o.ran.basis.size()) != k)
      return ValidationReport::fail("domain-range-size-mismatch", std::nullopt,
                                    "domain has " + std::to_string(k) + " basis vectors, range has " +
                                        std::to_string(o.ran.basis.size()));
    if (o.map.rows() != k || o.map.cols() != k)
      return ValidationReport::fail("map-shape-mismatch", std::nullopt,
                                    "map must be " + std::to_string(k) + "x" + std::to_string(k));
    if (k == 0) return ValidationReport::pass();

    const auto minv = inverse(o.map);
    if (!minv) {
      const auto kern = kernel_basis(o.map);
      const QMat dmat = QMat::from_columns(d, o.dom.basis);
      return ValidationReport::fail("map-singular", dmat * kern.front(),
                                    "witness is a nonzero domain vector sent to zero");
    }

    const PolySpace a = subspace_space(o.space, o.dom);
    const PolySpace b = subspace_space(o.space, o.ran);
    if (is_isometric_embedding(a, b, o.map)) return ValidationReport::pass();

    // find a witness: some ball vertex (either side) whose norm is not preserved
    const QMat dmat = QMat::from_columns(d, o.dom.basis);
    for (const auto& t : a.ball_v().generators) {
      const Rat img = b.norm(o.map * t);
      if (img != Rat(1))
        return ValidationReport::fail("not-isometric", dmat * t,
                                      "unit vector maps to norm " + img.str());
    }
    for (const auto& w : b.ball_v().generators) {
      const QVec t = *minv * w;
      const Rat src = a.norm(t);
      if (src != Rat(1))
        return ValidationReport::fail("not-isometric", dmat * t,
                                      "vector of norm " + src.str() + " maps to a unit vector");
    }
    return ValidationReport::fail("not-isometric", std::nullopt, "no vertex witness; inconsistent state");
  } catch (const std::exception& e) {
    return ValidationReport::fail("internal-error", std::nullopt, e.what());
  }
}

/**
 * A space with a finite-order isometry and an isometric copy of a base
 * space inside it: autom generates the action, embed carries the base
 * space in, order is the least n with autom^n = id.
 */
struct IsometrySystem {
  PolySpace space;
  LinearMap autom;
  LinearMap embed;
  int order = 1;
};

namespace detail {

/// Maximum of u.c over { c : m c + nmat mu lies in the ball spanned by
/// ball_gens }, solved as one program over c, mu, and absolutely convex
/// multipliers. The extra cap row u.c <= 2 keeps the program bounded even
/// when the constraint set is unbounded in c; values above 1 are the only
/// signal callers need, so capping at 2 loses nothing.
struct SupportMax {
  Rat value;
  QVec c;
  QVec mu;
};

inline SupportMax max_over_pullback(const QVec& u, const QMat& m, const QMat& nmat,
                                    const std::vector<QVec>& ball_gens) {
  const int dc = m.cols();
  const int dmu = nmat.cols();
  const int amb = m.rows();
  const int L = static_cast<int>(ball_gens.size());
  LinearProgram lp;
  lp.num_vars = dc + dmu + 2 * L;
  lp.nonneg.assign(static_cast<std::size_t>(lp.num_vars), false);
  for (int s = 0; s < 2 * L; ++s) lp.nonneg[static_cast<std::size_t>(dc + dmu + s)] = true;
  lp.objective.assign(static_cast<std::size_t>(lp.num_vars), Rat(0));
  for (int j = 0; j < dc; ++j) lp.objective[j] = -u[j];

  for (int i = 0; i < amb; ++i) {
    LinConstraint row;
    row.rel = Rel::EQ;
    row.a.assign(static_cast<std::size_t>(lp.num_vars), Rat(0));
    for (int j = 0; j < dc; ++j) row.a[j] = m(i, j);
    for (int j = 0; j < dmu; ++j) row.a[dc + j] = nmat(i, j);
    for (int s = 0; s < L; ++s) {
      row.a[dc + dmu + s] = -ball_gens[s][i];
      row.a[dc + dmu + L + s] = ball_gens[s][i];
    }
    lp.constraints.push_back(std::move(row));
  }
  LinConstraint cap1;  // multipliers stay inside the ball
  cap1.a.assign(static_cast<std::size_t>(lp.num_vars), Rat(0));
  cap1.b = Rat(1);
  for (int s = 0; s < 2 * L; ++s) cap1.a[dc + dmu + s] = Rat(1);
  lp.constraints.push_back(std::move(cap1));
  LinConstraint cap2;  // objective cap, see above
  cap2.a.assign(static_cast<std::size_t>(lp.num_vars), Rat(0));
  cap2.b = Rat(2);
  for (int j = 0; j < dc; ++j) cap2.a[j] = u[j];
  lp.constraints.push_back(std::move(cap2));

  const LpOutcome out = lp_min(lp);
  if (out.status != LpStatus::Optimal) throw std::logic_error("support program failed to solve");
  SupportMax r;
  r.value = -out.value;
  r.c.assign(out.point.begin(), out.point.begin() + dc);
  r.mu.assign(out.point.begin() + dc, out.point.begin() + dc + dmu);
  return r;
}

// True iff g maps the vertex pair set of v onto itself bijectively; the
// vertex set spans, so this is exactly "g is a linear isometry" — and it
// never needs facet data.
inline bool permutes_ball_vertices(const SymVRep& v, const QMat& g) {
  const std::size_t m = v.generators.size();
  std::vector<bool> hit(m, false);
  for (const auto& gen : v.generators) {
    const auto p = find_pair(v.generators, g * gen);
    if (!p || hit[*p]) return false;
    hit[*p] = true;
  }
  return true;
}

}  // namespace detail

/**
 * Re-verifies an isometry system from its data alone, against the base
 * space and partial isometry it claims to extend. Works entirely on the
 * vertex side of the big space — its facet description is never computed,
 * because extension spaces with few vertices can have enormous facet
 * counts. Checks, in order: shapes; autom permutes the ball vertices;
 * autom has exactly the claimed order; embed is isometric (support
 * programs per base facet, gauge programs per base vertex); the extension
 * acts on the embedded domain as the partial isometry dictates.
 */
inline ValidationReport check_system(const PartialIsometry& o, const IsometrySystem& sys) noexcept {
  try {
    ValidationReport base = validate(o);
    if (!base.ok) return base;

    const int dc = o.space.dim();
    const int de = sys.space.dim();
    if (sys.autom.rows() != de || sys.autom.cols() != de)
      return ValidationReport::fail("system-shape-mismatch", std::nullopt, "automorphism must be square of the space dimension");
    if (sys.embed.rows() != de || sys.embed.cols() != dc)
      return ValidationReport::fail("system-shape-mismatch", std::nullopt, "embedding must map the base space into the extension");
    if (sys.order < 1)
      return ValidationReport::fail("system-shape-mismatch", std::nullopt, "order must be at least 1");

    const SymVRep& ev = sys.space.ball_v();
    if (!detail::permutes_ball_vertices(ev, sys.autom))
      return ValidationReport::fail("automorphism-not-isometry", std::nullopt,
                                    "the map does not permute the ball's vertex pairs");

    QMat power = QMat::identity(de);
    for (int n = 1; n < sys.order; ++n) {
      power = power * sys.autom;
      if (power.is_identity())
        return ValidationReport::fail("automorphism-order-wrong", std::nullopt,
                                      "identity already at power " + std::to_string(n));
    }
    power = power * sys.autom;
    if (!power.is_identity())
      return ValidationReport::fail("automorphism-order-wrong", std::nullopt,
                                    "not the identity at the claimed order " + std::to_string(sys.order));

    if (rank(sys.embed) != dc)
      return ValidationReport::fail("embed-not-injective");
    const QMat no_extra(de, 0);
    for (const auto& u : o.space.ball_h().functionals) {
      const auto r = detail::max_over_pullback(u, sys.embed, no_extra, ev.generators);
      if (r.value > Rat(1))
        return ValidationReport::fail("embed-not-isometric", r.c,
                                      "the embedded image of the witness has norm at most 1, the witness itself has norm " +
                                          o.space.norm(r.c).str());
    }
    for (const auto& v : o.space.ball_v().generators) {
      const Rat img = gauge(ev, sys.embed * v);
      if (img > Rat(1))
        return ValidationReport::fail("embed-not-isometric", v,
                                      "unit vector embeds to norm " + img.str());
    }

    const QMat dmat = QMat::from_columns(dc, o.dom.basis);
    const QMat rmat = QMat::from_columns(dc, o.ran.basis);
    if (!(sys.autom * (sys.embed * dmat) == sys.embed * (rmat * o.map)))
      return ValidationReport::fail("not-equivariant", std::nullopt,
                                    "the extension does not act on the embedded domain as the partial map does");
    return ValidationReport::pass();
  } catch (const std::exception& e) {
    return ValidationReport::fail("internal-error", std::nullopt, e.what());
  }
}

/// A dimension together with an automorphism of the space that size.
struct LinearExtension {
  int dim = 0;
  LinearMap map;
};

namespace detail {

// Lexicographically first standard coordinates completing the given
// independent columns to a basis.
inline std::vector<int> std_completion(int dim, std::vector<QVec> cols) {
  std::vector<int> idx;
  for (int j = 0; j < dim && static_cast<int>(cols.size()) < dim; ++j) {
    QVec e(dim);
    e[j] = Rat(1);
    cols.push_back(std::move(e));
    if (rank_of_columns(dim, cols) == static_cast<int>(cols.size()))
      idx.push_back(j);
    else
      cols.pop_back();
  }
  return idx;
}

}  // namespace detail

/**
 * Extends an injective linear map f, defined on a subspace of a
 * d-dimensional space by its ambient images (images.col(j) = f of
 * dom.basis[j]), to an invertible map g on a space of dimension
 * d + (d - k): the original space keeps its first d coordinates, fresh
 * coordinates w are appended, g agrees with f on the domain, carries a
 * standard completion of the domain onto the fresh coordinates, and
 * carries the fresh coordinates onto a standard completion of f's image.
 * Pure linear algebra — no norms are involved. A total map (k = d)
 * extends in place; an empty domain yields the identity.
 */
inline LinearExtension linear_hrushovski_extension(int dim, const Subspace& dom, const LinearMap& images) {
  if (dom.ambient_dim != dim) throw precondition_error("linear extension: ambient dimension mismatch");
  require_subspace(dom);
  const int k = static_cast<int>(dom.basis.size());
  if (images.rows() != dim || images.cols() != k)
    throw precondition_error("linear extension: images must be ambient vectors, one per basis vector");
  std::vector<QVec> image_cols;
  for (int j = 0; j < k; ++j) image_cols.push_back(images.col(j));
  if (rank_of_columns(dim, image_cols) != k)
    throw precondition_error("linear extension: images are dependent, the map is not injective");

  if (k == 0) return {dim, QMat::identity(dim)};
  if (k == dim) {
    const QMat dmat = QMat::from_columns(dim, dom.basis);
    return {dim, images * *inverse(dmat)};
  }

  const int m = dim - k;
  const std::vector<int> u_idx = detail::std_completion(dim, dom.basis);
  const std::vector<int> z_idx = detail::std_completion(dim, image_cols);
  const int big = dim + m;

  const auto lift = [&](const QVec& x) {
    QVec y(big);
    for (int i = 0; i < dim; ++i) y[i] = x[i];
    return y;
  };
  std::vector<QVec> basis_cols, target_cols;
  for (const auto& b : dom.basis) basis_cols.push_back(lift(b));
  for (int i = 0; i < m; ++i) {
    QVec e(dim);
    e[u_idx[i]] = Rat(1);
    basis_cols.push_back(lift(e));
  }
  for (int i = 0; i < m; ++i) {
    QVec w(big);
    w[dim + i] = Rat(1);
    basis_cols.push_back(w);
  }
  for (const auto& f : image_cols) target_cols.push_back(lift(f));
  for (int i = 0; i < m; ++i) {
    QVec w(big);
    w[dim + i] = Rat(1);
    target_cols.push_back(w);
  }
  for (int i = 0; i < m; ++i) {
    QVec e(dim);
    e[z_idx[i]] = Rat(1);
    target_cols.push_back(lift(e));
  }

  const auto binv = inverse(QMat::from_columns(big, basis_cols));
  if (!binv) throw std::logic_error("extension basis must be invertible");
  const QMat g = QMat::from_columns(big, target_cols) * *binv;
  if (!inverse(g)) throw std::logic_error("extension map must be invertible");
  return {big, g};
}

}  // namespace qpoly
