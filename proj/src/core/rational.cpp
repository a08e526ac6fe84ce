#include "core/rational.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "core/error.hpp"

namespace lucid {
namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    fail(ErrorKind::kArgument, "rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) fail(ErrorKind::kArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::kArgument, "rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto bad = [&]() -> Rational {
    fail(ErrorKind::kArgument, "not a number: '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) return bad();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t n = 0, d = 0;
    auto a = text.substr(0, slash), b = text.substr(slash + 1);
    auto r1 = std::from_chars(a.data(), a.data() + a.size(), n);
    auto r2 = std::from_chars(b.data(), b.data() + b.size(), d);
    if (r1.ec != std::errc() || r1.ptr != a.data() + a.size() ||
        r2.ec != std::errc() || r2.ptr != b.data() + b.size() || d == 0) {
      return bad();
    }
    return Rational(n, d);
  }

  // Decimal with optional exponent, parsed digit by digit so that "0.01" is
  // exactly 1/100 rather than the nearest double.
  std::size_t i = 0;
  bool neg = false;
  if (text[i] == '+' || text[i] == '-') neg = text[i++] == '-';
  i128 mant = 0;
  int scale = 0;
  bool digits = false, dot = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c >= '0' && c <= '9') {
      digits = true;
      mant = mant * 10 + (c - '0');
      if (mant > (i128(1) << 100)) return bad();
      if (dot) ++scale;
    } else if (c == '.' && !dot) {
      dot = true;
    } else {
      break;
    }
  }
  if (!digits) return bad();
  int exp10 = 0;
  if (i < text.size()) {
    if (text[i] != 'e' && text[i] != 'E') return bad();
    ++i;
    auto rest = text.substr(i);
    if (!rest.empty() && rest.front() == '+') rest.remove_prefix(1);
    auto r = std::from_chars(rest.data(), rest.data() + rest.size(), exp10);
    if (r.ec != std::errc() || r.ptr != rest.data() + rest.size()) return bad();
  }
  int net = scale - exp10;
  i128 num = neg ? -mant : mant;
  i128 den = 1;
  if (net > 0) {
    if (net > 30) return bad();
    for (int k = 0; k < net; ++k) den *= 10;
  } else {
    if (-net > 30) return bad();
    for (int k = 0; k < -net; ++k) num *= 10;
  }
  return make(num, den);
}

Rational Rational::operator+(const Rational& o) const {
  return make(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const {
  return make(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
}

Rational Rational::operator*(const Rational& o) const {
  return make(i128(num_) * o.num_, i128(den_) * o.den_);
}

std::strong_ordering Rational::operator<=>(const Rational& o) const noexcept {
  i128 l = i128(num_) * o.den_;
  i128 r = i128(o.num_) * den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::int64_t Rational::ceil() const noexcept {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

}  // namespace lucid
