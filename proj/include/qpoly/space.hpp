#pragma once

#include <memory>
#include <mutex>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "polytope.hpp"

namespace qpoly {

/// Matrix viewed as a linear map; rows = codomain dim, cols = domain dim.
using LinearMap = QMat;

struct Subspace {
  int ambient_dim = 0;
  std::vector<QVec> basis;  // linearly independent
  friend bool operator==(const Subspace&, const Subspace&) = default;
};

inline void require_subspace(const Subspace& s) {
  for (const auto& b : s.basis)
    if (static_cast<int>(b.size()) != s.ambient_dim)
      throw precondition_error("subspace: basis vector dimension mismatch");
  if (rank_of_columns(s.ambient_dim, s.basis) != static_cast<int>(s.basis.size()))
    throw precondition_error("subspace: basis vectors are dependent");
}

/**
 * A finite-dimensional space whose unit ball is an origin-symmetric
 * polytope, carried by its two canonical descriptions.
 *
 * Either description determines the other, and converting can be
 * expensive (facet counts grow quickly with dimension), so a space is
 * seeded with whichever side its constructor got and materializes the
 * other on first use. Copies share the cache. Values are immutable.
 */
class PolySpace {
 public:
  PolySpace() : PolySpace(from_vrep({0, {}})) {}

  static PolySpace from_vrep(SymVRep v) {
    SymVRep canon = canonicalize(v);
    auto reps = std::make_shared<Reps>();
    reps->v = std::move(canon);
    return PolySpace(v.dim, std::move(reps));
  }

  static PolySpace from_hrep(SymHRep h) {
    SymHRep canon = canonicalize(h);
    auto reps = std::make_shared<Reps>();
    reps->h = std::move(canon);
    return PolySpace(h.dim, std::move(reps));
  }

  /// Both sides supplied (e.g. read from a file): cross-checked exactly.
  static PolySpace from_both(SymVRep v, SymHRep h) {
    if (v.dim != h.dim) throw precondition_error("space: representation dimensions differ");
    PolySpace s = from_vrep(std::move(v));
    if (s.ball_h() != canonicalize(h))
      throw precondition_error("space: vertex and facet data describe different balls");
    return s;
  }

  int dim() const { return dim_; }

  const SymVRep& ball_v() const {
    std::scoped_lock lk(reps_->m);
    if (!reps_->v) reps_->v = hrep_to_vrep(*reps_->h);
    return *reps_->v;
  }

  const SymHRep& ball_h() const {
    std::scoped_lock lk(reps_->m);
    if (!reps_->h) reps_->h = vrep_to_hrep(*reps_->v);
    return *reps_->h;
  }

  bool v_ready() const {
    std::scoped_lock lk(reps_->m);
    return reps_->v.has_value();
  }
  bool h_ready() const {
    std::scoped_lock lk(reps_->m);
    return reps_->h.has_value();
  }

  /// Exact norm: facet maximum when facets are on hand, else the gauge LP
  /// on the vertex side. The two agree identically.
  Rat norm(const QVec& x) const {
    std::scoped_lock lk(reps_->m);
    if (reps_->h) return norm_h(*reps_->h, x);
    return gauge(*reps_->v, x);
  }

  friend bool operator==(const PolySpace& a, const PolySpace& b) {
    return a.dim_ == b.dim_ && a.ball_v() == b.ball_v();
  }

 private:
  struct Reps {
    mutable std::mutex m;
    std::optional<SymVRep> v;
    std::optional<SymHRep> h;
  };

  PolySpace(int dim, std::shared_ptr<Reps> reps) : dim_(dim), reps_(std::move(reps)) {}

  // Trusted constructor for representations already in canonical form.
  static PolySpace from_canonical(int dim, std::optional<SymVRep> v, std::optional<SymHRep> h) {
    auto reps = std::make_shared<Reps>();
    reps->v = std::move(v);
    reps->h = std::move(h);
    return PolySpace(dim, std::move(reps));
  }

  int dim_;
  std::shared_ptr<Reps> reps_;

  friend PolySpace dual(const PolySpace&);
};

/// Dual space: ball vertices and facet functionals trade places. Whatever
/// side is materialized carries over, so dual() itself costs nothing and
/// dual(dual(s)) == s structurally.
inline PolySpace dual(const PolySpace& s) {
  std::optional<SymVRep> dv;
  std::optional<SymHRep> dh;
  {
    std::scoped_lock lk(s.reps_->m);
    if (s.reps_->h) dv = SymVRep{s.dim(), s.reps_->h->functionals};
    if (s.reps_->v) dh = SymHRep{s.dim(), s.reps_->v->generators};
  }
  return PolySpace::from_canonical(s.dim(), std::move(dv), std::move(dh));
}

/// The subspace spanned by sub.basis with the induced norm, expressed in
/// basis coordinates: functionals pull back along the basis matrix.
inline PolySpace subspace_space(const PolySpace& s, const Subspace& sub) {
  if (sub.ambient_dim != s.dim()) throw precondition_error("subspace_space: ambient dimension mismatch");
  require_subspace(sub);
  const int k = static_cast<int>(sub.basis.size());
  if (k == 0) return PolySpace::from_vrep({0, {}});
  std::vector<QVec> pulled;
  pulled.reserve(s.ball_h().functionals.size());
  for (const auto& u : s.ball_h().functionals) {
    QVec w(k);
    for (int j = 0; j < k; ++j) w[j] = dot(u, sub.basis[j]);
    pulled.push_back(std::move(w));
  }
  return PolySpace::from_hrep({k, std::move(pulled)});
}

namespace detail {

// Projection onto the quotient by span(basis), written in the
// lexicographically first standard coordinates that complete the basis.
// Returns the (dim - r) x dim matrix of the projection.
inline QMat quotient_projection(int dim, const std::vector<QVec>& basis) {
  const int r = static_cast<int>(basis.size());
  std::vector<QVec> cols = basis;
  std::vector<int> complement;
  for (int j = 0; j < dim && static_cast<int>(cols.size()) < dim; ++j) {
    QVec e(dim);
    e[j] = Rat(1);
    cols.push_back(std::move(e));
    if (rank_of_columns(dim, cols) == static_cast<int>(cols.size()))
      complement.push_back(j);
    else
      cols.pop_back();
  }
  const QMat winv = *inverse(QMat::from_columns(dim, cols));
  QMat proj(dim - r, dim);
  for (int i = r; i < dim; ++i)
    for (int j = 0; j < dim; ++j) proj(i - r, j) = winv(i, j);
  return proj;
}

}  // namespace detail

/// Quotient by span(sub.basis): coordinates are the lexicographically
/// first standard coordinates completing the basis; the quotient ball is
/// the image of the ball (projections of the generators). Returns the
/// quotient space together with the projection map.
inline std::pair<PolySpace, LinearMap> quotient_space(const PolySpace& s, const Subspace& sub) {
  if (sub.ambient_dim != s.dim()) throw precondition_error("quotient_space: ambient dimension mismatch");
  require_subspace(sub);
  const QMat proj = detail::quotient_projection(s.dim(), sub.basis);
  if (proj.rows() == 0) return {PolySpace::from_vrep({0, {}}), proj};
  std::vector<QVec> image;
  for (const auto& g : s.ball_v().generators) {
    QVec w = proj * g;
    if (!is_zero(w)) image.push_back(std::move(w));
  }
  return {PolySpace::from_vrep({proj.rows(), std::move(image)}), proj};
}

namespace detail {

inline QVec embed_block(const QVec& x, int offset, int total) {
  QVec y(total);
  for (std::size_t i = 0; i < x.size(); ++i) y[offset + static_cast<int>(i)] = x[i];
  return y;
}

}  // namespace detail

/// Direct sum with norm |x| + |y|: ball vertices are the two vertex sets
/// embedded in their blocks.
inline PolySpace l1_sum(const PolySpace& x, const PolySpace& y) {
  const int d = x.dim() + y.dim();
  std::vector<QVec> gens;
  for (const auto& g : x.ball_v().generators) gens.push_back(detail::embed_block(g, 0, d));
  for (const auto& g : y.ball_v().generators) gens.push_back(detail::embed_block(g, x.dim(), d));
  return PolySpace::from_vrep({d, std::move(gens)});
}

/// Direct sum with norm max(|x|, |y|): facet functionals embed blockwise.
inline PolySpace linf_sum(const PolySpace& x, const PolySpace& y) {
  const int d = x.dim() + y.dim();
  std::vector<QVec> fs;
  for (const auto& u : x.ball_h().functionals) fs.push_back(detail::embed_block(u, 0, d));
  for (const auto& u : y.ball_h().functionals) fs.push_back(detail::embed_block(u, x.dim(), d));
  return PolySpace::from_hrep({d, std::move(fs)});
}

/// True iff map is injective and norm-preserving from src into dst,
/// decided by pulling dst's facet functionals back along map and comparing
/// canonical facet data — never by sampling finitely many points.
inline bool is_isometric_embedding(const PolySpace& src, const PolySpace& dst, const LinearMap& map) {
  if (map.rows() != dst.dim() || map.cols() != src.dim())
    throw precondition_error("is_isometric_embedding: map shape mismatch");
  if (rank(map) != src.dim()) return false;
  std::vector<QVec> pulled;
  for (const auto& u : dst.ball_h().functionals) {
    QVec w(src.dim());
    for (int j = 0; j < src.dim(); ++j) {
      Rat s;
      for (int i = 0; i < dst.dim(); ++i) s += u[i] * map(i, j);
      w[j] = s;
    }
    pulled.push_back(std::move(w));
  }
  return canonicalize(SymHRep{src.dim(), std::move(pulled)}) == src.ball_h();
}

namespace detail {

// Finds which antipodal vertex pair w belongs to; nullopt if none.
inline std::optional<std::size_t> find_pair(const std::vector<QVec>& sorted_gens, const QVec& w) {
  const QVec rep = pair_rep(w);
  const auto it = std::lower_bound(sorted_gens.begin(), sorted_gens.end(), rep, lex_less);
  if (it == sorted_gens.end() || *it != rep) return std::nullopt;
  return static_cast<std::size_t>(it - sorted_gens.begin());
}

}  // namespace detail

/**
 * Every linear isometry permutes the ball's vertex pairs, possibly with
 * sign flips, so the whole group is found by assigning d anchor pairs
 * (a spanning subset) to signed pairs and keeping the maps that biject
 * the vertex set. Candidates are pruned by each pair's multiset of
 * gauge distances to all the others, which any isometry preserves.
 * Deterministic: results sorted by matrix entries.
 */
inline std::vector<LinearMap> isometry_group(const PolySpace& s, std::size_t max_pairs = 16) {
  if (s.dim() < 1) throw precondition_error("isometry_group: dimension must be >= 1");
  const std::vector<QVec>& gens = s.ball_v().generators;
  const std::size_t m = gens.size();
  if (m > max_pairs) throw resource_error("isometry_group: vertex pair count exceeds the cap");
  s.ball_h();  // materialize facets once; the norms below are then cheap

  using Profile = std::vector<std::pair<Rat, Rat>>;
  std::vector<Profile> profile(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      Rat dm = s.norm(gens[i] - gens[j]);
      Rat dp = s.norm(gens[i] + gens[j]);
      profile[i].emplace_back(min(dm, dp), max(dm, dp));
    }
    std::sort(profile[i].begin(), profile[i].end());
  }

  const std::vector<int> anchor = independent_column_subset(s.dim(), gens);
  std::vector<QVec> anchor_cols;
  for (int a : anchor) anchor_cols.push_back(gens[a]);
  const QMat ainv = *inverse(QMat::from_columns(s.dim(), anchor_cols));

  std::vector<LinearMap> group;
  std::vector<QVec> target(anchor.size());
  const auto accept = [&](const QMat& t) {
    std::vector<bool> hit(m, false);
    for (std::size_t i = 0; i < m; ++i) {
      const auto p = detail::find_pair(gens, t * gens[i]);
      if (!p || hit[*p]) return false;
      hit[*p] = true;
    }
    return true;
  };
  const auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == anchor.size()) {
      const QMat t = QMat::from_columns(s.dim(), target) * ainv;
      if (accept(t)) group.push_back(t);
      return;
    }
    for (std::size_t j = 0; j < m; ++j) {
      if (profile[j] != profile[static_cast<std::size_t>(anchor[depth])]) continue;
      for (int sign : {1, -1}) {
        target[depth] = Rat(sign) * gens[j];
        std::vector<QVec> sofar(target.begin(), target.begin() + static_cast<std::ptrdiff_t>(depth) + 1);
        if (rank_of_columns(s.dim(), sofar) != static_cast<int>(sofar.size())) continue;
        self(self, depth + 1);
      }
    }
  };
  recurse(recurse, 0);

  std::sort(group.begin(), group.end(), [](const QMat& a, const QMat& b) {
    for (int i = 0; i < a.rows(); ++i)
      for (int j = 0; j < a.cols(); ++j) {
        if (a(i, j) < b(i, j)) return true;
        if (b(i, j) < a(i, j)) return false;
      }
    return false;
  });
  return group;
}

/// Least n >= 1 with g^n = id, for g an isometry of s. The bound comes
/// from g's signed permutation of the vertex pairs: a pair cycle of length
/// L contributes L when its signs multiply to +1 and 2L otherwise; g^n is
/// determined by that permutation because the vertices span.
inline int isometry_order(const PolySpace& s, const LinearMap& g) {
  if (g.rows() != s.dim() || g.cols() != s.dim() || !is_isometric_embedding(s, s, g))
    throw precondition_error("isometry_order: not an isometry of the space");
  const std::vector<QVec>& gens = s.ball_v().generators;
  const std::size_t m = gens.size();
  std::vector<std::size_t> perm(m);
  std::vector<int> sign(m);
  for (std::size_t i = 0; i < m; ++i) {
    const QVec w = g * gens[i];
    const auto p = detail::find_pair(gens, w);
    if (!p) throw std::logic_error("isometry does not permute the vertex pairs");
    perm[i] = *p;
    sign[i] = (w == gens[*p]) ? 1 : -1;
  }
  long bound = 1;
  std::vector<bool> seen(m, false);
  for (std::size_t i = 0; i < m; ++i) {
    if (seen[i]) continue;
    long len = 0;
    int prod = 1;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
      prod *= sign[j];
    }
    bound = std::lcm(bound, prod == 1 ? len : 2 * len);
  }
  QMat acc = QMat::identity(s.dim());
  for (long n = 1; n <= bound; ++n) {
    acc = acc * g;
    if (acc.is_identity()) return static_cast<int>(n);
  }
  throw std::logic_error("isometry power bound violated");
}

}  // namespace qpoly
