#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "linalg.hpp"

namespace qpoly {

enum class Rel { LE, EQ };

struct LinConstraint {
  QVec a;
  Rat b;
  Rel rel = Rel::LE;
  friend bool operator==(const LinConstraint&, const LinConstraint&) = default;
};

/// min objective . x  subject to the constraints. Variables are free unless
/// flagged in nonneg (empty mask = all free). All data exact rationals.
struct LinearProgram {
  QVec objective;
  std::vector<LinConstraint> constraints;
  int num_vars = 0;
  std::vector<bool> nonneg;  // optional; size num_vars when present
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpOutcome {
  LpStatus status = LpStatus::Infeasible;
  Rat value;   // meaningful for Optimal
  QVec point;  // meaningful for Optimal
};

namespace detail {

/*
 * Two-phase primal simplex on a dense rational tableau.
 *
 * Free variables are split x = x+ - x-; each LE row gets a slack; rows are
 * sign-normalized to b >= 0 and rows whose slack cannot start basic get an
 * artificial. Pivoting uses Bland's least-index rule throughout, which
 * terminates on degenerate programs; with exact arithmetic that makes the
 * whole solve deterministic, so identical inputs give identical outcomes.
 */
class Simplex {
 public:
  explicit Simplex(const LinearProgram& p) : lp_(p) {
    const int n = p.num_vars;
    if (static_cast<int>(p.objective.size()) != n)
      throw precondition_error("lp: objective dimension mismatch");
    if (!p.nonneg.empty() && static_cast<int>(p.nonneg.size()) != n)
      throw precondition_error("lp: nonneg mask dimension mismatch");
    for (const auto& c : p.constraints)
      if (static_cast<int>(c.a.size()) != n) throw precondition_error("lp: constraint dimension mismatch");

    // Column layout: per-variable structural columns, then slacks, then
    // (in phase 1 only) artificials.
    col_of_var_.resize(n);
    for (int j = 0; j < n; ++j) {
      col_of_var_[j] = ncols_;
      ncols_ += is_nonneg(j) ? 1 : 2;
    }
    slack_base_ = ncols_;
    for (const auto& c : lp_.constraints)
      if (c.rel == Rel::LE) ++ncols_;
    build_tableau();
  }

  LpOutcome run() {
    if (!phase1()) return {LpStatus::Infeasible, Rat(), {}};
    if (!phase2()) return {LpStatus::Unbounded, Rat(), {}};
    QVec x(lp_.num_vars);
    QVec colval(struct_cols(), Rat(0));
    for (int i = 0; i < m_; ++i)
      if (basis_[i] >= 0 && basis_[i] < struct_cols()) colval[basis_[i]] = rhs(i);
    for (int j = 0; j < lp_.num_vars; ++j) {
      x[j] = colval[col_of_var_[j]];
      if (!is_nonneg(j)) x[j] -= colval[col_of_var_[j] + 1];
    }
    return {LpStatus::Optimal, dot(lp_.objective, x), std::move(x)};
  }

 private:
  bool is_nonneg(int var) const { return !lp_.nonneg.empty() && lp_.nonneg[var]; }
  int struct_cols() const { return slack_base_ + nslack_; }
  Rat& rhs(int i) { return tab_[i][total_cols_]; }
  const Rat& rhs(int i) const { return tab_[i][total_cols_]; }

  void build_tableau() {
    nslack_ = 0;
    for (const auto& c : lp_.constraints)
      if (c.rel == Rel::LE) ++nslack_;
    m_ = static_cast<int>(lp_.constraints.size());
    // total columns: structural + slacks + one artificial slot per row.
    total_cols_ = struct_cols() + m_;
    tab_.assign(m_, QVec(total_cols_ + 1));
    basis_.assign(m_, -1);

    int slack = 0;
    for (int i = 0; i < m_; ++i) {
      const auto& c = lp_.constraints[i];
      const bool flip = c.b.sign() < 0;
      const Rat s = flip ? Rat(-1) : Rat(1);
      for (int j = 0; j < lp_.num_vars; ++j) {
        if (c.a[j].is_zero()) continue;
        tab_[i][col_of_var_[j]] = s * c.a[j];
        if (!is_nonneg(j)) tab_[i][col_of_var_[j] + 1] = -(s * c.a[j]);
      }
      rhs(i) = s * c.b;
      if (c.rel == Rel::LE) {
        const int sc = slack_base_ + slack++;
        tab_[i][sc] = s;
        if (!flip) basis_[i] = sc;  // slack is a valid starting basic variable
      }
      if (basis_[i] < 0) {
        const int ac = struct_cols() + i;
        tab_[i][ac] = Rat(1);
        basis_[i] = ac;
        artificial_rows_.push_back(i);
      }
    }
  }

  void pivot(int r, int c) {
    const Rat inv = Rat(1) / tab_[r][c];
    for (int j = 0; j <= total_cols_; ++j) tab_[r][j] *= inv;
    for (int i = 0; i < m_; ++i) {
      if (i == r || tab_[i][c].is_zero()) continue;
      const Rat f = tab_[i][c];
      for (int j = 0; j <= total_cols_; ++j) tab_[i][j] -= f * tab_[r][j];
    }
    if (!cost_[c].is_zero()) {
      const Rat f = cost_[c];
      for (int j = 0; j <= total_cols_; ++j) cost_[j] -= f * tab_[r][j];
    }
    basis_[r] = c;
  }

  // Bland: entering = least column with negative reduced cost; leaving =
  // least ratio, ties by least basic column index. Returns false when no
  // entering column remains (optimum reached).
  bool bland_step(int allowed_cols, bool* unbounded) {
    int enter = -1;
    for (int j = 0; j < allowed_cols; ++j)
      if (cost_[j].sign() < 0) {
        enter = j;
        break;
      }
    if (enter < 0) return false;
    int leave = -1;
    Rat best;
    for (int i = 0; i < m_; ++i) {
      if (tab_[i][enter].sign() <= 0) continue;
      const Rat ratio = rhs(i) / tab_[i][enter];
      if (leave < 0 || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave < 0) {
      *unbounded = true;
      return false;
    }
    pivot(leave, enter);
    return true;
  }

  bool phase1() {
    if (artificial_rows_.empty()) return true;
    // Reduced costs of min(sum of artificials) with artificials basic.
    cost_.assign(total_cols_ + 1, Rat(0));
    for (int i : artificial_rows_)
      for (int j = 0; j <= total_cols_; ++j) cost_[j] -= tab_[i][j];
    for (int i : artificial_rows_) cost_[struct_cols() + i] = Rat(0);
    bool unbounded = false;  // cannot happen in phase 1; objective bounded below by 0
    while (bland_step(total_cols_, &unbounded)) {
    }
    if ((-cost_[total_cols_]).sign() > 0) return false;  // positive infeasibility gap
    // Pivot artificials out of the basis; a row with no structural pivot
    // available is a redundant constraint and is cleared.
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < struct_cols()) continue;
      int c = -1;
      for (int j = 0; j < struct_cols(); ++j)
        if (!tab_[i][j].is_zero()) {
          c = j;
          break;
        }
      if (c >= 0) {
        pivot(i, c);
      } else {
        for (int j = 0; j <= total_cols_; ++j) tab_[i][j] = Rat(0);
        basis_[i] = -2;  // dead row
      }
    }
    return true;
  }

  bool phase2() {
    cost_.assign(total_cols_ + 1, Rat(0));
    for (int j = 0; j < lp_.num_vars; ++j) {
      if (lp_.objective[j].is_zero()) continue;
      cost_[col_of_var_[j]] += lp_.objective[j];
      if (!is_nonneg(j)) cost_[col_of_var_[j] + 1] -= lp_.objective[j];
    }
    for (int i = 0; i < m_; ++i) {
      if (basis_[i] < 0) continue;
      const Rat cb = cost_[basis_[i]];
      if (cb.is_zero()) continue;
      for (int j = 0; j <= total_cols_; ++j) cost_[j] -= cb * tab_[i][j];
    }
    bool unbounded = false;
    while (bland_step(struct_cols(), &unbounded)) {
    }
    return !unbounded;
  }

  const LinearProgram& lp_;
  std::vector<QVec> tab_;
  QVec cost_;
  std::vector<int> basis_;
  std::vector<int> col_of_var_;
  std::vector<int> artificial_rows_;
  int m_ = 0, ncols_ = 0, nslack_ = 0, slack_base_ = 0, total_cols_ = 0;
};

}  // namespace detail

inline LpOutcome lp_min(const LinearProgram& p) {
  if (p.num_vars == 0) {
    for (const auto& c : p.constraints) {
      const bool ok = c.rel == Rel::LE ? c.b.sign() >= 0 : c.b.is_zero();
      if (!ok) return {LpStatus::Infeasible, Rat(), {}};
    }
    return {LpStatus::Optimal, Rat(0), {}};
  }
  return detail::Simplex(p).run();
}

namespace detail {

// Positive-scaling canonical form of an inequality a.x <= b: integer
// entries with collective gcd 1. Scaling is by positive rationals only,
// so the halfspace is unchanged.
inline void normalize_ineq(QVec& a, Rat& b) {
  mpz_class l(1);
  for (const auto& x : a) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.den().get_mpz_t());
  mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), b.den().get_mpz_t());
  mpz_class g(0);
  for (const auto& x : a) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(x.num() * l / x.den()).get_mpz_t());
  mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), mpz_class(b.num() * l / b.den()).get_mpz_t());
  if (g == 0) return;  // all-zero row with b = 0
  const Rat s(mpq_class(l, g));
  for (auto& x : a) x *= s;
  b *= s;
}

inline bool ineq_less(const LinConstraint& x, const LinConstraint& y) {
  if (x.a != y.a) return lex_less(x.a, y.a);
  return x.b < y.b;
}

// Drops 0 <= b rows, detects 0 <= b with b < 0, dedupes, sorts.
// Returns false if a contradictory constant row was present.
inline bool tidy_system(std::vector<LinConstraint>& rows) {
  std::vector<LinConstraint> out;
  for (auto& r : rows) {
    normalize_ineq(r.a, r.b);
    if (is_zero(r.a)) {
      if (r.b.sign() < 0) return false;
      continue;
    }
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), ineq_less);
  out.erase(std::unique(out.begin(), out.end(),
                        [](const LinConstraint& x, const LinConstraint& y) {
                          return x.a == y.a && x.b == y.b;
                        }),
            out.end());
  rows = std::move(out);
  return true;
}

// Removes rows implied by the others: row i is redundant iff
// max a_i . x over the remaining system is <= b_i (LP per row).
inline void drop_redundant(std::vector<LinConstraint>& rows, int num_vars) {
  for (std::size_t i = 0; i < rows.size();) {
    LinearProgram probe;
    probe.num_vars = num_vars;
    probe.objective = -rows[i].a;  // maximize a_i . x
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (j != i) probe.constraints.push_back(rows[j]);
    const LpOutcome r = lp_min(probe);
    if (r.status == LpStatus::Optimal && -r.value <= rows[i].b)
      rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(i));
    else
      ++i;  // unbounded or (vacuously) infeasible: keep the row
  }
}

}  // namespace detail

/**
 * Fourier-Motzkin projection of { x : constraints } onto the kept
 * variables. Eliminates the other variables one at a time (positive row x
 * negative row combinations); after every elimination the system is
 * reduced to an irredundant set by one LP per inequality, which keeps the
 * quadratic row blowup in check. Output rows are over the kept variables
 * re-indexed in ascending order, canonically scaled, sorted, deduplicated.
 * An infeasible input projects to the single contradictory row 0 <= -1.
 */
inline std::vector<LinConstraint> fm_project(std::vector<LinConstraint> rows, const std::set<int>& keep) {
  int num_vars = -1;
  for (const auto& r : rows) {
    if (r.rel != Rel::LE) throw precondition_error("fm_project: inequalities only");
    if (num_vars < 0) num_vars = static_cast<int>(r.a.size());
    if (static_cast<int>(r.a.size()) != num_vars) throw precondition_error("fm_project: ragged system");
  }
  if (num_vars < 0) num_vars = keep.empty() ? 0 : *keep.rbegin() + 1;
  for (int k : keep)
    if (k < 0 || k >= num_vars) throw precondition_error("fm_project: keep index out of range");

  std::vector<int> kept(keep.begin(), keep.end());
  const auto contradiction = [&] {
    std::vector<LinConstraint> bad;
    bad.push_back({QVec(kept.size()), Rat(-1), Rel::LE});
    return bad;
  };

  if (!detail::tidy_system(rows)) return contradiction();
  for (int v = num_vars - 1; v >= 0; --v) {
    if (keep.count(v)) continue;
    std::vector<LinConstraint> zero, pos, neg;
    for (auto& r : rows) {
      const int s = r.a[v].sign();
      (s == 0 ? zero : s > 0 ? pos : neg).push_back(std::move(r));
    }
    rows = std::move(zero);
    for (const auto& p : pos)
      for (const auto& n : neg) {
        // p.a[v] > 0 > n.a[v]; the combination cancels variable v.
        const Rat cp = -n.a[v], cn = p.a[v];
        LinConstraint mix;
        mix.a.resize(num_vars);
        for (int j = 0; j < num_vars; ++j) mix.a[j] = cp * p.a[j] + cn * n.a[j];
        mix.b = cp * p.b + cn * n.b;
        rows.push_back(std::move(mix));
      }
    if (!detail::tidy_system(rows)) return contradiction();
    detail::drop_redundant(rows, num_vars);
  }

  std::vector<LinConstraint> out;
  for (const auto& r : rows) {
    LinConstraint pr;
    pr.a.reserve(kept.size());
    for (int k : kept) pr.a.push_back(r.a[k]);
    pr.b = r.b;
    out.push_back(std::move(pr));
  }
  if (!detail::tidy_system(out)) return contradiction();
  detail::drop_redundant(out, static_cast<int>(kept.size()));
  return out;
}

}  // namespace qpoly
