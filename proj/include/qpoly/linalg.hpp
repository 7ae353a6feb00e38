#pragma once

#include <initializer_list>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "rational.hpp"

namespace qpoly {

/// Dense rational vector. Plain std::vector so it composes with the
/// standard library; arithmetic is supplied by the free operators below.
using QVec = std::vector<Rat>;

inline QVec& operator+=(QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw precondition_error("vector dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}
inline QVec& operator-=(QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw precondition_error("vector dimension mismatch");
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}
inline QVec operator+(QVec a, const QVec& b) { return a += b; }
inline QVec operator-(QVec a, const QVec& b) { return a -= b; }
inline QVec operator-(const QVec& a) {
  QVec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
  return r;
}
inline QVec operator*(const Rat& s, QVec a) {
  for (auto& x : a) x *= s;
  return a;
}

inline Rat dot(const QVec& a, const QVec& b) {
  if (a.size() != b.size()) throw precondition_error("vector dimension mismatch");
  Rat r;
  for (std::size_t i = 0; i < a.size(); ++i) r += a[i] * b[i];
  return r;
}

inline bool is_zero(const QVec& a) {
  for (const auto& x : a)
    if (!x.is_zero()) return false;
  return true;
}

/// Strict lexicographic order; the canonical-form tie-breaker everywhere.
inline bool lex_less(const QVec& a, const QVec& b) {
  const std::size_t n = a.size() < b.size() ? a.size() : b.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return true;
    if (b[i] < a[i]) return false;
  }
  return a.size() < b.size();
}

/// Dense rational matrix, row-major.
class QMat {
 public:
  QMat() : rows_(0), cols_(0) {}
  QMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {
    if (rows < 0 || cols < 0) throw precondition_error("negative matrix dimension");
  }
  QMat(std::initializer_list<std::initializer_list<Rat>> rows) {
    rows_ = static_cast<int>(rows.size());
    cols_ = rows_ == 0 ? 0 : static_cast<int>(rows.begin()->size());
    a_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& r : rows) {
      if (static_cast<int>(r.size()) != cols_) throw precondition_error("ragged matrix literal");
      for (const auto& x : r) a_.push_back(x);
    }
  }

  static QMat identity(int n) {
    QMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = Rat(1);
    return m;
  }
  /// Builds a matrix whose columns are the given vectors.
  static QMat from_columns(int dim, const std::vector<QVec>& cols) {
    QMat m(dim, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols_; ++j) {
      if (static_cast<int>(cols[j].size()) != dim) throw precondition_error("column dimension mismatch");
      for (int i = 0; i < dim; ++i) m(i, j) = cols[j][i];
    }
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& operator()(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rat& operator()(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  QVec row(int r) const {
    QVec v(cols_);
    for (int j = 0; j < cols_; ++j) v[j] = (*this)(r, j);
    return v;
  }
  QVec col(int c) const {
    QVec v(rows_);
    for (int i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
    return v;
  }

  QMat transpose() const {
    QMat t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  QVec operator*(const QVec& x) const {
    if (static_cast<int>(x.size()) != cols_) throw precondition_error("matrix*vector dimension mismatch");
    QVec y(rows_);
    for (int i = 0; i < rows_; ++i) {
      Rat s;
      for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
      y[i] = s;
    }
    return y;
  }

  QMat operator*(const QMat& b) const {
    if (cols_ != b.rows_) throw precondition_error("matrix*matrix dimension mismatch");
    QMat c(rows_, b.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Rat& v = (*this)(i, k);
        if (v.is_zero()) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += v * b(k, j);
      }
    return c;
  }

  friend bool operator==(const QMat& a, const QMat& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  bool is_identity() const {
    if (rows_ != cols_) return false;
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j)
        if ((*this)(i, j) != Rat(i == j ? 1 : 0)) return false;
    return true;
  }

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

inline QMat operator*(const Rat& s, const QMat& m) {
  QMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = s * m(i, j);
  return out;
}

namespace detail {

// Reduced row echelon form in place. Returns the pivot columns in order.
// Pivot row selection within a column prefers the entry with the largest
// numerator magnitude; any nonzero entry is correct, this only curbs
// intermediate growth.
inline std::vector<int> rref_inplace(QMat& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int best = -1;
    for (int i = r; i < m.rows(); ++i) {
      if (m(i, c).is_zero()) continue;
      if (best < 0 || mpz_cmpabs(m(i, c).num().get_mpz_t(), m(best, c).num().get_mpz_t()) > 0) best = i;
    }
    if (best < 0) continue;
    if (best != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    const Rat inv = Rat(1) / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      const Rat f = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

}  // namespace detail

inline int rank(QMat m) { return static_cast<int>(detail::rref_inplace(m).size()); }

inline int rank_of_columns(int dim, const std::vector<QVec>& cols) {
  return rank(QMat::from_columns(dim, cols));
}

/// Basis of { x : m x = 0 }. Exactly cols - rank vectors, each nonzero.
inline std::vector<QVec> kernel_basis(QMat m) {
  const int n = m.cols();
  const std::vector<int> pivots = detail::rref_inplace(m);
  std::vector<bool> is_pivot(n, false);
  for (int c : pivots) is_pivot[c] = true;
  std::vector<QVec> basis;
  for (int f = 0; f < n; ++f) {
    if (is_pivot[f]) continue;
    QVec v(n);
    v[f] = Rat(1);
    for (std::size_t pr = 0; pr < pivots.size(); ++pr) v[pivots[pr]] = -m(static_cast<int>(pr), f);
    basis.push_back(std::move(v));
  }
  return basis;
}

/// One solution of m x = b (free coordinates set to 0), or nullopt.
inline std::optional<QVec> solve(const QMat& m, const QVec& b) {
  if (static_cast<int>(b.size()) != m.rows()) throw precondition_error("solve: rhs dimension mismatch");
  QMat aug(m.rows(), m.cols() + 1);
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) aug(i, j) = m(i, j);
    aug(i, m.cols()) = b[i];
  }
  const std::vector<int> pivots = detail::rref_inplace(aug);
  if (!pivots.empty() && pivots.back() == m.cols()) return std::nullopt;  // row (0 ... 0 | 1)
  QVec x(m.cols());
  for (std::size_t pr = 0; pr < pivots.size(); ++pr) x[pivots[pr]] = aug(static_cast<int>(pr), m.cols());
  return x;
}

/// Inverse of a square matrix, or nullopt if singular.
inline std::optional<QMat> inverse(const QMat& m) {
  if (m.rows() != m.cols()) throw precondition_error("inverse: matrix not square");
  const int n = m.rows();
  QMat aug(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = Rat(1);
  }
  const std::vector<int> pivots = detail::rref_inplace(aug);
  if (static_cast<int>(pivots.size()) < n || (n > 0 && pivots[n - 1] >= n)) return std::nullopt;
  QMat inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

/// Greedy left-to-right scan keeping the columns that enlarge the span;
/// the usual deterministic way to extract a basis from a spanning list.
inline std::vector<int> independent_column_subset(int dim, const std::vector<QVec>& cols) {
  std::vector<int> chosen;
  std::vector<QVec> kept;
  for (int j = 0; j < static_cast<int>(cols.size()); ++j) {
    kept.push_back(cols[j]);
    if (rank_of_columns(dim, kept) == static_cast<int>(kept.size()))
      chosen.push_back(j);
    else
      kept.pop_back();
  }
  return chosen;
}

}  // namespace qpoly
