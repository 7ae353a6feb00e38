#pragma once

#include <gmpxx.h>

#include <compare>
#include <ostream>
#include <string>
#include <utility>

#include "errors.hpp"

namespace qpoly {

/**
 * Arbitrary-precision rational scalar.
 *
 * Thin value wrapper around GMP's mpq_class. Values are always stored in
 * lowest terms with a positive denominator (canonicalized on construction),
 * so operator== is plain coefficient comparison and lexicographic sorting
 * of vectors is stable across runs.
 */
class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long n) : q_(n) {}  // NOLINT: implicit by design, mirrors integer literals
  Rat(long num, long den) {
    if (den == 0) throw precondition_error("Rat: zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
  }
  explicit Rat(mpq_class q) : q_(std::move(q)) { q_.canonicalize(); }

  /// Parses "p", "-p", "p/q" or "-p/q" with decimal integer parts, q > 0.
  /// Stricter than GMP's own reader (no whitespace, no signs inside q).
  static Rat parse(const std::string& text) {
    const auto bad = [&] { return parse_error("bad rational literal: '" + text + "'"); };
    const auto digits = [](const std::string& s) {
      if (s.empty()) return false;
      for (char c : s)
        if (c < '0' || c > '9') return false;
      return true;
    };
    std::string body = text;
    bool neg = false;
    if (!body.empty() && body[0] == '-') {
      neg = true;
      body.erase(0, 1);
    }
    const auto slash = body.find('/');
    const std::string p = slash == std::string::npos ? body : body.substr(0, slash);
    const std::string q = slash == std::string::npos ? "1" : body.substr(slash + 1);
    if (!digits(p) || !digits(q)) throw bad();
    mpq_class value{mpz_class(p), mpz_class(q)};
    if (value.get_den() == 0) throw parse_error("zero denominator in '" + text + "'");
    value.canonicalize();
    if (neg) value = -value;
    return Rat(std::move(value));
  }

  /// Renders as "p/q", or just "p" for integers.
  std::string str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
  }

  const mpz_class& num() const { return q_.get_num(); }
  const mpz_class& den() const { return q_.get_den(); }
  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  Rat operator-() const { return Rat(mpq_class(-q_)); }
  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o) {
    if (o.is_zero()) throw precondition_error("Rat: division by zero");
    q_ /= o.q_;
    return *this;
  }

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

  friend bool operator==(const Rat& a, const Rat& b) { return mpq_equal(a.q_.get_mpq_t(), b.q_.get_mpq_t()) != 0; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    const int c = mpq_cmp(a.q_.get_mpq_t(), b.q_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

 private:
  mpq_class q_;
};

inline Rat abs(const Rat& r) { return r.sign() < 0 ? -r : r; }

inline Rat min(const Rat& a, const Rat& b) { return b < a ? b : a; }
inline Rat max(const Rat& a, const Rat& b) { return a < b ? b : a; }

}  // namespace qpoly
