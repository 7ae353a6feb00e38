#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "partiso.hpp"

namespace qpoly {

/**
 * Verdict of the n-link chain inequality for a partial isometry f: A -> B:
 *
 *   for all a_0, ..., a_{n-1} in A:
 *     norm(a_0 - f(a_{n-1}))  <=  sum_{i=0}^{n-2} norm(a_{i+1} - f(a_i))
 *
 * (empty sum = 0 at n = 1, where the condition says f fixes A pointwise).
 * Of the three equivalent formulations of n-step extendability — an
 * ambient extension exists, a certified extension system exists, and this
 * inequality — the inequality is the one that is directly decidable, and
 * the other two are produced from it constructively.
 *
 * When the inequality fails, witness holds a violating chain in
 * domain-basis coordinates and lhs > rhs are the two sides, exactly.
 */
struct Condition3Report {
  int n = 1;
  bool holds = true;
  std::optional<std::vector<QVec>> witness;
  std::optional<Rat> lhs;
  std::optional<Rat> rhs;
};

/**
 * The two sides of the chain inequality for one explicit chain, given in
 * domain-basis coordinates: {norm(a_0 - f(a_{n-1})), sum norm(a_{i+1} - f(a_i))}.
 */
inline std::pair<Rat, Rat> condition3_sides(const PartialIsometry& o, const std::vector<QVec>& chain) {
  if (chain.empty()) throw precondition_error("chain evaluation: need at least one link");
  const int d = o.space.dim();
  const int k = static_cast<int>(o.dom.basis.size());
  for (const auto& link : chain)
    if (static_cast<int>(link.size()) != k)
      throw precondition_error("chain evaluation: links must be in domain-basis coordinates");
  const QMat dmat = QMat::from_columns(d, o.dom.basis);
  const QMat fa = QMat::from_columns(d, o.ran.basis) * o.map;
  const std::size_t n = chain.size();
  const Rat lhs = o.space.norm(dmat * chain[0] - fa * chain[n - 1]);
  Rat rhs;
  for (std::size_t i = 0; i + 1 < n; ++i) rhs += o.space.norm(dmat * chain[i + 1] - fa * chain[i]);
  return {lhs, rhs};
}

namespace detail {

// Shared scaffolding of the n-fold cyclic construction: the l1-sum of n
// copies of the base space, the first-block inclusion, and the relation
// generators (basis vector a_j in block i, minus its image in block
// i+1 mod n) whose span will be quotiented away.
struct CyclicData {
  PolySpace big;
  QMat inclusion;
  QMat relations;
};

inline CyclicData make_cyclic_data(const PartialIsometry& o, int n) {
  const int d = o.space.dim();
  const int k = static_cast<int>(o.dom.basis.size());
  const int nd = n * d;
  SymVRep big{nd, {}};
  for (int i = 0; i < n; ++i)
    for (const auto& g : o.space.ball_v().generators) big.generators.push_back(embed_block(g, i * d, nd));
  QMat incl(nd, d);
  for (int j = 0; j < d; ++j) incl(j, j) = Rat(1);
  const QMat fa = QMat::from_columns(d, o.ran.basis) * o.map;
  QMat rel(nd, n * k);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < k; ++j) {
      const int col = i * k + j;
      for (int t = 0; t < d; ++t) {
        rel(i * d + t, col) += o.dom.basis[j][t];
        rel(((i + 1) % n) * d + t, col) -= fa(t, j);
      }
    }
  return {PolySpace::from_vrep(std::move(big)), std::move(incl), std::move(rel)};
}

inline void require_valid(const PartialIsometry& o, const char* who) {
  const ValidationReport v = validate(o);
  if (!v.ok) throw precondition_error(std::string(who) + ": invalid partial isometry (" + v.violation + ")");
}

}  // namespace detail

/**
 * Decides the chain inequality at a fixed n. The universally quantified
 * inequality is equivalent to "the base space embeds isometrically into
 * the n-fold cyclic quotient", which reduces to one support program per
 * facet of the base ball: the embedding is non-expansive by construction,
 * so it is isometric iff no facet functional attains more than 1 on the
 * pullback of the quotient ball. A maximizer above 1 decodes directly
 * into a violating chain (its relation multipliers are the chain's
 * domain-basis coordinates), and the decoded chain is re-evaluated
 * exactly before it is reported.
 */
inline Condition3Report check_condition3(const PartialIsometry& o, int n) {
  if (n < 1) throw precondition_error("chain condition: n must be positive");
  detail::require_valid(o, "chain condition");
  const int k = static_cast<int>(o.dom.basis.size());
  const detail::CyclicData data = detail::make_cyclic_data(o, n);
  const auto& gens = data.big.ball_v().generators;
  for (const auto& u : o.space.ball_h().functionals) {
    const auto r = detail::max_over_pullback(u, data.inclusion, data.relations, gens);
    if (!(r.value > Rat(1))) continue;
    std::vector<QVec> chain;
    chain.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) chain.emplace_back(r.mu.begin() + i * k, r.mu.begin() + (i + 1) * k);
    const auto sides = condition3_sides(o, chain);
    if (!(sides.first > sides.second)) throw std::logic_error("decoded chain fails to certify the violation");
    Condition3Report rep;
    rep.n = n;
    rep.holds = false;
    rep.witness = std::move(chain);
    rep.lhs = sides.first;
    rep.rhs = sides.second;
    return rep;
  }
  return {n, true, std::nullopt, std::nullopt, std::nullopt};
}

/// A space extending the base space, an automorphism of it with
/// autom^n = id, and the (not necessarily isometric) embedding of the
/// base space into it.
struct CyclicExtension {
  PolySpace space;
  LinearMap autom;
  LinearMap embed;
};

/**
 * The n-fold cyclic quotient construction: take the l1-sum of n copies of
 * the base space, quotient by the span of the relation generators, and
 * induce the block rotation on the quotient. Always succeeds; the induced
 * map is a surjective isometry with autom^n = id, and
 * autom(embed(a)) = embed(f(a)) holds on the domain. The embedding is
 * isometric precisely when the chain inequality holds at this n — so this
 * single construction both certifies extendability and, through
 * check_condition3, refutes it.
 */
inline CyclicExtension cyclic_extension(const PartialIsometry& o, int n) {
  if (n < 1) throw precondition_error("cyclic extension: n must be positive");
  detail::require_valid(o, "cyclic extension");
  const int d = o.space.dim();
  const int nd = n * d;
  const detail::CyclicData data = detail::make_cyclic_data(o, n);

  std::vector<QVec> rel_cols;
  for (int c = 0; c < data.relations.cols(); ++c) rel_cols.push_back(data.relations.col(c));
  Subspace nsub{nd, {}};
  for (int idx : independent_column_subset(nd, rel_cols)) nsub.basis.push_back(rel_cols[idx]);
  const auto quot = quotient_space(data.big, nsub);
  const PolySpace& espace = quot.first;
  const QMat& proj = quot.second;
  const int de = espace.dim();

  // block rotation downward: output block r = input block r+1 (mod n)
  QMat shift(nd, nd);
  for (int r = 0; r < n; ++r)
    for (int t = 0; t < d; ++t) shift(r * d + t, ((r + 1) % n) * d + t) = Rat(1);

  // any right inverse of the projection induces the same quotient map,
  // because the rotation maps the quotiented span onto itself
  QMat sec(nd, de);
  for (int i = 0; i < de; ++i) {
    QVec e(de);
    e[i] = Rat(1);
    const auto s = solve(proj, e);
    if (!s) throw std::logic_error("quotient projection must be onto");
    for (int r = 0; r < nd; ++r) sec(r, i) = (*s)[r];
  }

  CyclicExtension out{espace, proj * shift * sec, proj * data.inclusion};
  QMat power = QMat::identity(de);
  for (int i = 0; i < n; ++i) power = power * out.autom;
  if (!power.is_identity()) throw std::logic_error("cyclic automorphism must have period dividing n");
  return out;
}

/**
 * The cyclic extension packaged as a self-contained certificate: same
 * space, automorphism, and embedding, plus the automorphism's exact order
 * (a divisor of n, computed here so the certificate re-verifies strictly).
 */
inline IsometrySystem extension_certificate(const PartialIsometry& o, int n) {
  CyclicExtension ce = cyclic_extension(o, n);
  int order = 1;
  QMat power = ce.autom;
  while (!power.is_identity()) {
    power = power * ce.autom;
    ++order;
    if (order > n) throw std::logic_error("automorphism order must divide n");
  }
  return {std::move(ce.space), std::move(ce.autom), std::move(ce.embed), order};
}

/**
 * Least n <= n_max at which the chain inequality holds, or nullopt if
 * every n up to the bound fails. A nullopt is a bounded "unknown", not a
 * refutation: no computable bound on n exists, so the search is honest
 * about where it stopped. A returned n converts to a re-checkable
 * certificate via extension_certificate(o, n).
 */
inline std::optional<int> search_extendability(const PartialIsometry& o, int n_max) {
  if (n_max < 1) throw precondition_error("extendability search: n_max must be positive");
  for (int n = 1; n <= n_max; ++n)
    if (check_condition3(o, n).holds) return n;
  return std::nullopt;
}

/**
 * The standard two-dimensional witness that extendability can fail at
 * every n: the sum-norm plane, f halving the first axis onto the
 * diagonal. Each link of the chain a_i = 2^{-i} e_1 loses another factor
 * of 2, so the chain inequality fails at every length.
 */
inline PartialIsometry gurarii_counterexample() {
  PolySpace c = PolySpace::from_vrep({2, {{Rat(1), Rat(0)}, {Rat(0), Rat(1)}}});
  return {std::move(c),
          {2, {{Rat(1), Rat(0)}}},
          {2, {{Rat(1), Rat(1)}}},
          QMat{{Rat(1, 2)}}};
}

namespace detail {

/// Canonical (reduced echelon) basis of the span of the given vectors.
inline std::vector<QVec> canonical_span_basis(int dim, const std::vector<QVec>& vecs) {
  QMat m(static_cast<int>(vecs.size()), dim);
  for (int i = 0; i < static_cast<int>(vecs.size()); ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = vecs[static_cast<std::size_t>(i)][j];
  const auto pivots = rref_inplace(m);
  std::vector<QVec> out;
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    QVec v(dim);
    for (int j = 0; j < dim; ++j) v[j] = m(static_cast<int>(r), j);
    out.push_back(std::move(v));
  }
  return out;
}

/// Canonical basis of span(a) ∩ span(b).
inline std::vector<QVec> intersect_spans(int dim, const std::vector<QVec>& a, const std::vector<QVec>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<QVec> all = a;
  all.insert(all.end(), b.begin(), b.end());
  std::vector<QVec> got;
  for (const auto& w : kernel_basis(QMat::from_columns(dim, all))) {
    QVec x(dim);
    for (std::size_t j = 0; j < a.size(); ++j) x += w[j] * a[j];
    got.push_back(std::move(x));
  }
  return canonical_span_basis(dim, got);
}

}  // namespace detail

/// The stable subspace of the domain recursion, the map's action on it in
/// core-basis coordinates, and how many strict shrinks the recursion took.
struct EventualCore {
  Subspace core;
  LinearMap restricted;
  int steps = 0;
};

/**
 * Runs the shrinking recursion E_0 = whole space, E_{v+1} = f^{-1}(B ∩ E_v)
 * to its fixpoint. Dimensions strictly decrease until stabilization, so the
 * loop ends within dim-many refinements. On the resulting core, f restricts
 * to a surjective isometry (re-verified here): the core is exactly the part
 * of the domain on which f can be iterated forever.
 */
inline EventualCore eventual_core(const PartialIsometry& o) {
  detail::require_valid(o, "eventual core");
  const int d = o.space.dim();
  const int k = static_cast<int>(o.dom.basis.size());
  const QMat dmat = QMat::from_columns(d, o.dom.basis);
  const QMat fa = QMat::from_columns(d, o.ran.basis) * o.map;

  std::vector<QVec> cur;
  for (int j = 0; j < d; ++j) {
    QVec e(d);
    e[j] = Rat(1);
    cur.push_back(std::move(e));
  }
  int steps = 0;
  for (;;) {
    const auto meet = detail::intersect_spans(d, o.ran.basis, cur);
    std::vector<QVec> pre;
    if (meet.empty()) {
      for (const auto& t : kernel_basis(fa)) pre.push_back(dmat * t);
    } else {
      std::vector<QVec> cols;
      for (int j = 0; j < k; ++j) cols.push_back(fa.col(j));
      cols.insert(cols.end(), meet.begin(), meet.end());
      for (const auto& w : kernel_basis(QMat::from_columns(d, cols))) {
        const QVec t(w.begin(), w.begin() + k);
        pre.push_back(dmat * t);
      }
    }
    std::vector<QVec> next = detail::canonical_span_basis(d, pre);
    if (next.size() == cur.size()) break;
    cur = std::move(next);
    ++steps;
  }

  const int kc = static_cast<int>(cur.size());
  const QMat cmat = QMat::from_columns(d, cur);
  QMat restr(kc, kc);
  for (int j = 0; j < kc; ++j) {
    const auto t = solve(dmat, cur[static_cast<std::size_t>(j)]);
    if (!t) throw std::logic_error("core must lie inside the domain");
    const auto x = solve(cmat, fa * *t);
    if (!x) throw std::logic_error("core must be carried into itself");
    for (int i = 0; i < kc; ++i) restr(i, j) = (*x)[i];
  }
  const PartialIsometry on_core{o.space, {d, cur}, {d, cur}, restr};
  if (!validate(on_core).ok) throw std::logic_error("the core restriction must be a surjective isometry");
  return {Subspace{d, std::move(cur)}, std::move(restr), steps};
}

/// A partial isometry on the glued space together with the two isometric
/// inclusions of the input spaces.
struct Amalgam {
  PartialIsometry combined;
  LinearMap left;
  LinearMap right;
};

namespace detail {

inline void require_equivariant(const PolySpace& base, const QMat& autom, const PartialIsometry& o,
                                const QMat& into, const char* side) {
  const int d = o.space.dim();
  const QMat dom = QMat::from_columns(d, o.dom.basis);
  const QMat fa = QMat::from_columns(d, o.ran.basis) * o.map;
  for (int i = 0; i < base.dim(); ++i) {
    const QVec x = into.col(i);
    const auto t = solve(dom, x);
    if (!t)
      throw precondition_error(std::string("amalgamation: embedding error, the ") + side +
                               " image of base vector " + std::to_string(i) + " is outside the domain");
    if (!(fa * *t == into * autom.col(i)))
      throw precondition_error(std::string("amalgamation: embedding error, equivariance fails on the ") + side +
                               " side at base vector " + std::to_string(i));
  }
}

}  // namespace detail

/**
 * Glues two partial isometries along a shared subsystem: a space with a
 * surjective isometry (sys.space, sys.autom) that embeds equivariantly
 * into both via j and k. The glued space is the l1-sum of the two spaces
 * with the two copies of the shared space identified; the glued map acts
 * as each input map on its carried domain (consistent on the overlap by
 * equivariance — re-verified). Both inclusions into the glued space are
 * isometric because the shared map is a surjective isometry, and that too
 * is re-verified rather than assumed.
 */
inline Amalgam amalgamate(const IsometrySystem& sys, const PartialIsometry& o2, const LinearMap& j,
                          const PartialIsometry& o3, const LinearMap& k) {
  detail::require_valid(o2, "amalgamation (left)");
  detail::require_valid(o3, "amalgamation (right)");
  const int de = sys.space.dim();
  const int d2 = o2.space.dim();
  const int d3 = o3.space.dim();
  if (sys.autom.rows() != de || sys.autom.cols() != de)
    throw precondition_error("amalgamation: the shared automorphism must be square of the shared dimension");
  if (j.rows() != d2 || j.cols() != de || k.rows() != d3 || k.cols() != de)
    throw precondition_error("amalgamation: embedding shape mismatch");
  if (!detail::permutes_ball_vertices(sys.space.ball_v(), sys.autom))
    throw precondition_error("amalgamation: the shared map is not a surjective isometry");
  if (!is_isometric_embedding(sys.space, o2.space, j))
    throw precondition_error("amalgamation: the left embedding is not isometric");
  if (!is_isometric_embedding(sys.space, o3.space, k))
    throw precondition_error("amalgamation: the right embedding is not isometric");
  detail::require_equivariant(sys.space, sys.autom, o2, j, "left");
  detail::require_equivariant(sys.space, sys.autom, o3, k, "right");

  const PolySpace big = l1_sum(o2.space, o3.space);
  Subspace rel{d2 + d3, {}};
  for (int i = 0; i < de; ++i) {
    QVec col(d2 + d3);
    const QVec je = j.col(i);
    const QVec ke = k.col(i);
    for (int r = 0; r < d2; ++r) col[r] = je[r];
    for (int r = 0; r < d3; ++r) col[d2 + r] = -ke[r];
    rel.basis.push_back(std::move(col));
  }
  const auto quot = quotient_space(big, rel);
  const PolySpace& space4 = quot.first;
  const QMat& proj = quot.second;
  const int d4 = space4.dim();

  QMat jt(d4, d2), kt(d4, d3);
  for (int i = 0; i < d4; ++i) {
    for (int c = 0; c < d2; ++c) jt(i, c) = proj(i, c);
    for (int c = 0; c < d3; ++c) kt(i, c) = proj(i, d2 + c);
  }
  if (!(jt * j == kt * k)) throw std::logic_error("the two routes into the glued space must agree");
  if (!is_isometric_embedding(o2.space, space4, jt))
    throw std::logic_error("the left inclusion into the glued space must be isometric");
  if (!is_isometric_embedding(o3.space, space4, kt))
    throw std::logic_error("the right inclusion into the glued space must be isometric");

  const QMat fa2 = QMat::from_columns(d2, o2.ran.basis) * o2.map;
  const QMat fa3 = QMat::from_columns(d3, o3.ran.basis) * o3.map;
  std::vector<QVec> dom_cols, dom_imgs, ran_cols;
  for (std::size_t c = 0; c < o2.dom.basis.size(); ++c) {
    dom_cols.push_back(jt * o2.dom.basis[c]);
    dom_imgs.push_back(jt * fa2.col(static_cast<int>(c)));
  }
  for (std::size_t c = 0; c < o3.dom.basis.size(); ++c) {
    dom_cols.push_back(kt * o3.dom.basis[c]);
    dom_imgs.push_back(kt * fa3.col(static_cast<int>(c)));
  }
  for (const auto& b : o2.ran.basis) ran_cols.push_back(jt * b);
  for (const auto& b : o3.ran.basis) ran_cols.push_back(kt * b);

  std::vector<QVec> basis4, img4;
  for (int idx : independent_column_subset(d4, dom_cols)) {
    basis4.push_back(dom_cols[static_cast<std::size_t>(idx)]);
    img4.push_back(dom_imgs[static_cast<std::size_t>(idx)]);
  }
  const QMat a4 = QMat::from_columns(d4, basis4);
  const QMat f4 = QMat::from_columns(d4, img4);
  for (std::size_t c = 0; c < dom_cols.size(); ++c) {
    const auto lam = solve(a4, dom_cols[c]);
    if (!lam || !(f4 * *lam == dom_imgs[c]))
      throw precondition_error("amalgamation: the glued map is inconsistent on carried domain vector " +
                               std::to_string(c));
  }

  std::vector<QVec> rbasis4;
  for (int idx : independent_column_subset(d4, ran_cols)) rbasis4.push_back(ran_cols[static_cast<std::size_t>(idx)]);
  const int k4 = static_cast<int>(basis4.size());
  if (static_cast<int>(rbasis4.size()) != k4)
    throw std::logic_error("glued domain and range must have equal dimension");
  const QMat b4 = QMat::from_columns(d4, rbasis4);
  QMat map4(k4, k4);
  for (int c = 0; c < k4; ++c) {
    const auto x = solve(b4, img4[static_cast<std::size_t>(c)]);
    if (!x) throw std::logic_error("glued images must lie in the glued range");
    for (int i = 0; i < k4; ++i) map4(i, c) = (*x)[i];
  }

  Amalgam out{{space4, {d4, std::move(basis4)}, {d4, std::move(rbasis4)}, std::move(map4)},
              std::move(jt),
              std::move(kt)};
  const ValidationReport vr = validate(out.combined);
  if (!vr.ok) throw std::logic_error("the glued map must be a partial isometry (" + vr.violation + ")");
  return out;
}

}  // namespace qpoly
