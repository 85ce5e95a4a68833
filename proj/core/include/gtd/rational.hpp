#pragma once

#include <cstdint>
#include <compare>
#include <numeric>
#include <stdexcept>
#include <string>

namespace gtd {

// Exact rational on 64-bit numerator / denominator, always normalized
// (gcd 1, denominator > 0). Intermediates go through 128-bit integers;
// a result that does not fit back into 64 bits throws std::overflow_error,
// which callers treat as "keep the tree unsimplified".
class Rational {
 public:
  constexpr Rational() : num_(0), den_(1) {}
  constexpr Rational(std::int64_t value) : num_(value), den_(1) {}
  Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
    normalize();
  }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }
  bool is_integer() const { return den_ == 1; }
  bool is_negative() const { return num_ < 0; }

  double value() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string str() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend Rational operator-(const Rational& r) {
    Rational out;
    out.num_ = checked_negate(r.num_);
    out.den_ = r.den_;
    return out;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    I128 n = I128(a.num_) * b.den_ + I128(b.num_) * a.den_;
    I128 d = I128(a.den_) * b.den_;
    return from_i128(n, d);
  }

  friend Rational operator-(const Rational& a, const Rational& b) {
    I128 n = I128(a.num_) * b.den_ - I128(b.num_) * a.den_;
    I128 d = I128(a.den_) * b.den_;
    return from_i128(n, d);
  }

  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_i128(I128(a.num_) * b.num_, I128(a.den_) * b.den_);
  }

  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw std::domain_error("rational division by zero");
    return from_i128(I128(a.num_) * b.den_, I128(a.den_) * b.num_);
  }

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    I128 lhs = I128(a.num_) * b.den_;
    I128 rhs = I128(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  // this^k with integer k (negative k inverts; 0^0 == 1 by convention).
  Rational pow(std::int64_t k) const {
    if (k < 0) {
      if (num_ == 0) throw std::domain_error("zero to a negative power");
      Rational inv(den_, num_);
      return inv.pow(-k);
    }
    Rational result(1);
    Rational base = *this;
    while (k > 0) {
      if (k & 1) result *= base;
      base = (k > 1) ? base * base : base;
      k >>= 1;
    }
    return result;
  }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

 private:
  using I128 = __int128;

  static std::int64_t checked_negate(std::int64_t v) {
    if (v == INT64_MIN) throw std::overflow_error("rational overflow");
    return -v;
  }

  static Rational from_i128(I128 n, I128 d) {
    if (d == 0) throw std::domain_error("rational division by zero");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    I128 g = gcd_i128(n < 0 ? -n : n, d);
    if (g > 1) {
      n /= g;
      d /= g;
    }
    if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
      throw std::overflow_error("rational overflow");
    Rational out;
    out.num_ = static_cast<std::int64_t>(n);
    out.den_ = static_cast<std::int64_t>(d);
    return out;
  }

  static I128 gcd_i128(I128 a, I128 b) {
    while (b != 0) {
      I128 t = a % b;
      a = b;
      b = t;
    }
    return a == 0 ? 1 : a;
  }

  void normalize() {
    if (den_ == 0) throw std::domain_error("rational with zero denominator");
    if (num_ == INT64_MIN || den_ == INT64_MIN)
      throw std::overflow_error("rational overflow");
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  std::int64_t num_;
  std::int64_t den_;
};

}  // namespace gtd
