#pragma once

// Exact rational arithmetic on top of GMP. Values are always canonical
// (lowest terms, positive denominator), so equality is structural equality.
// Floats appear only in report summaries; every verdict-bearing comparison
// in the library goes through this type.

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

namespace trn {

class Rat {
 public:
  Rat() : q_(0) {}
  Rat(long v) : q_(v) {}  // NOLINT: implicit on purpose, mirrors integer literals
  Rat(long num, long den);
  explicit Rat(const mpq_class& q) : q_(q) { q_.canonicalize(); }

  // Accepts "p/q" or "p" with optional sign; throws std::invalid_argument.
  static Rat parse(const std::string& s);

  const mpq_class& raw() const { return q_; }

  bool is_zero() const { return sgn(q_) == 0; }
  int sign() const { return sgn(q_); }

  Rat& operator+=(const Rat& o) { q_ += o.q_; return *this; }
  Rat& operator-=(const Rat& o) { q_ -= o.q_; return *this; }
  Rat& operator*=(const Rat& o) { q_ *= o.q_; return *this; }
  Rat& operator/=(const Rat& o);

  friend Rat operator+(Rat a, const Rat& b) { return a += b; }
  friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
  friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
  friend Rat operator/(Rat a, const Rat& b) { return a /= b; }
  friend Rat operator-(const Rat& a) { return Rat(mpq_class(-a.q_)); }

  friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
  friend std::strong_ordering operator<=>(const Rat& a, const Rat& b) {
    int c = cmp(a.q_, b.q_);
    return c < 0   ? std::strong_ordering::less
           : c > 0 ? std::strong_ordering::greater
                   : std::strong_ordering::equal;
  }

  // "p/q", or just "p" when the denominator is 1.
  std::string str() const;

  double to_double() const { return q_.get_d(); }

  // Fixed-point decimal with `places` fractional digits, round half up
  // (half away from zero for negatives).
  std::string decimal(int places) const;

 private:
  mpq_class q_;
};

}  // namespace trn
