#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace lucid {

/// Exact non-overflowing (for the magnitudes used here) rational number with
/// a positive denominator, always kept in lowest terms.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  /// "a/b", or "a" when the denominator is 1.
  std::string str() const;

  /// Accepts "3/200", "0.015", "1e-2", "2".
  static Rational parse(std::string_view text);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  bool operator==(const Rational& o) const noexcept {
    return num_ == o.num_ && den_ == o.den_;
  }
  std::strong_ordering operator<=>(const Rational& o) const noexcept;

  /// Smallest integer k with k >= *this.
  std::int64_t ceil() const noexcept;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace lucid
