#pragma once

#include <map>
#include <string>
#include <vector>

#include "partiso.hpp"

namespace qpoly {

/**
 * A finitely supported two-sided sequence of vectors in one space, with
 * the sum-of-norms metric. Only nonzero values are stored; an absent
 * index reads as the zero vector.
 */
struct FinSupportSeq {
  PolySpace space;
  std::map<int, QVec> entries;
};

/// Total norm: the (finite) sum of the coordinate norms.
inline Rat d_norm(const FinSupportSeq& a) {
  Rat s;
  for (const auto& [idx, v] : a.entries) s += a.space.norm(v);
  return s;
}

/// Every index advanced by one. Norm-preserving by construction.
inline FinSupportSeq shift(const FinSupportSeq& a) {
  FinSupportSeq out{a.space, {}};
  for (const auto& [idx, v] : a.entries) out.entries.emplace(idx + 1, v);
  return out;
}

/**
 * Exact distance from the sequence to the span of the window-supported
 * relation generators (one generator per domain-basis vector v and index
 * r in [k+1, l]: value v at r, value -f(v) at r-1). The window must
 * contain the support of the sequence. Shifting the window with the
 * sequence, or widening it, never changes the value: the generators tie
 * adjacent coordinates together, so mass cannot escape past the support.
 * With a width-one window no generator fits and the value is just the
 * norm of the single coordinate.
 *
 * Computed by one exact linear program: minimize the sum of per-index
 * norm bounds t_r, with every facet functional of the ball applied to
 * every adjusted coordinate held below t_r.
 */
inline Rat windowed_quotient_norm(const FinSupportSeq& a, const PartialIsometry& o, int k, int l) {
  if (k > l) throw precondition_error("windowed norm: the window is empty");
  const ValidationReport vr = validate(o);
  if (!vr.ok) throw precondition_error("windowed norm: invalid partial isometry (" + vr.violation + ")");
  const int d = o.space.dim();
  if (a.space.dim() != d || !(a.space.ball_h() == o.space.ball_h()))
    throw precondition_error("windowed norm: sequence and map live on different spaces");
  for (const auto& [idx, v] : a.entries) {
    if (static_cast<int>(v.size()) != d)
      throw precondition_error("windowed norm: entry dimension mismatch at index " + std::to_string(idx));
    if (idx < k || idx > l)
      throw precondition_error("windowed norm: support outside the window at index " + std::to_string(idx));
  }

  const int w = l - k + 1;
  const int ka = static_cast<int>(o.dom.basis.size());
  const QMat amat = QMat::from_columns(d, o.dom.basis);
  const QMat fmat = QMat::from_columns(d, o.ran.basis) * o.map;
  const auto& facets = a.space.ball_h().functionals;

  // variables: t_0..t_{w-1} (nonnegative), then mu groups for r = k+1..l (free)
  const int nt = w;
  const int nmu = (w - 1) * ka;
  const int nvars = nt + nmu;
  const auto mu_base = [&](int r) { return nt + (r - (k + 1)) * ka; };

  LinearProgram lp;
  lp.num_vars = nvars;
  lp.nonneg.assign(static_cast<std::size_t>(nvars), false);
  for (int i = 0; i < nt; ++i) lp.nonneg[static_cast<std::size_t>(i)] = true;
  lp.objective.assign(static_cast<std::size_t>(nvars), Rat(0));
  for (int i = 0; i < nt; ++i) lp.objective[static_cast<std::size_t>(i)] = Rat(1);

  const QVec zero(d);
  for (int r = k; r <= l; ++r) {
    const auto it = a.entries.find(r);
    const QVec& ar = it == a.entries.end() ? zero : it->second;
    for (const auto& u : facets) {
      for (int sign = 0; sign < 2; ++sign) {
        const Rat s = sign == 0 ? Rat(1) : Rat(-1);
        // s*u . (a(r) + A mu_r - F mu_{r+1}) <= t_{r-k}
        LinConstraint c;
        c.rel = Rel::LE;
        c.a.assign(static_cast<std::size_t>(nvars), Rat(0));
        c.a[static_cast<std::size_t>(r - k)] = Rat(-1);
        if (r >= k + 1) {
          const int base = mu_base(r);
          for (int j = 0; j < ka; ++j) c.a[static_cast<std::size_t>(base + j)] = s * dot(u, amat.col(j));
        }
        if (r + 1 <= l) {
          const int base = mu_base(r + 1);
          for (int j = 0; j < ka; ++j) c.a[static_cast<std::size_t>(base + j)] = -s * dot(u, fmat.col(j));
        }
        c.b = -s * dot(u, ar);
        lp.constraints.push_back(std::move(c));
      }
    }
  }

  const LpOutcome out = lp_min(lp);
  if (out.status != LpStatus::Optimal)
    throw std::logic_error("the windowed norm program is always feasible and bounded");
  return out.value;
}

/**
 * True iff shifting the embedded copy of each sample agrees with embedding
 * its image: the difference sequence (sample at index 1, minus-image at
 * index 0) must have windowed quotient norm zero. For a genuine partial
 * isometry the difference is itself a relation generator, so the check
 * passes; an input that fails validation (for example a map that distorts
 * norms) is rejected up front and reported as false, since no quotient
 * relation set is induced by it. Samples must lie in the span of the
 * domain.
 */
inline bool check_shift_equivariance(const PartialIsometry& o, const std::vector<QVec>& samples) {
  if (!validate(o).ok) return false;
  const int d = o.space.dim();
  const QMat amat = QMat::from_columns(d, o.dom.basis);
  const QMat fmat = QMat::from_columns(d, o.ran.basis) * o.map;
  for (const auto& a : samples) {
    if (static_cast<int>(a.size()) != d)
      throw precondition_error("shift equivariance: sample dimension mismatch");
    const auto t = solve(amat, a);
    if (!t) throw precondition_error("shift equivariance: sample outside the domain");
    const QVec fa = fmat * *t;
    FinSupportSeq delta{o.space, {}};
    if (!is_zero(a)) delta.entries.emplace(1, a);
    if (!is_zero(fa)) delta.entries.emplace(0, -fa);
    if (windowed_quotient_norm(delta, o, 0, 1) != Rat(0)) return false;
  }
  return true;
}

}  // namespace qpoly
