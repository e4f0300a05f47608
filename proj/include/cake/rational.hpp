// Exact rational scalar used for every coordinate, density and value.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include "cake/errors.hpp"

namespace cake {

using BigInt = boost::multiprecision::cpp_int;

// Arbitrary precision rational. Always reduced, denominator always positive;
// both invariants are maintained by the backing boost type.
class Rational {
 public:
  Rational() : v_(0) {}
  Rational(std::int64_t n) : v_(n) {}  // NOLINT: implicit by design
  Rational(std::int64_t num, std::int64_t den) : Rational(BigInt(num), BigInt(den)) {}
  Rational(BigInt num, BigInt den) {
    if (den == 0) throw Error("rational with zero denominator");
    if (den < 0) {  // the backing type insists on canonical input
      num = -num;
      den = -den;
    }
    BigInt g = boost::multiprecision::gcd(num, den);
    v_ = Backing(num / g, den / g);
  }

  // Accepts "p", "-p" or "p/q" with optional sign on p; q must be positive.
  static Rational parse(std::string_view text);

  BigInt num() const { return numerator(v_); }
  BigInt den() const { return denominator(v_); }

  bool is_zero() const { return v_.is_zero(); }
  int sign() const { return v_.sign(); }

  // "p/q", or just "p" when the denominator is 1.
  std::string str() const {
    std::string s = num().str();
    if (den() != 1) s += "/" + den().str();
    return s;
  }

  friend Rational operator+(const Rational& a, const Rational& b) { return Rational(a.v_ + b.v_); }
  friend Rational operator-(const Rational& a, const Rational& b) { return Rational(a.v_ - b.v_); }
  friend Rational operator*(const Rational& a, const Rational& b) { return Rational(a.v_ * b.v_); }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw Error("rational division by zero");
    return Rational(a.v_ / b.v_);
  }
  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { *this = *this / o; return *this; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (a.v_ > b.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

 private:
  using Backing = boost::multiprecision::cpp_rational;
  explicit Rational(Backing v) : v_(std::move(v)) {}
  Backing v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }
inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

inline Rational Rational::parse(std::string_view text) {
  auto bad = [&] { throw ParseError("bad rational literal: '" + std::string(text) + "'"); };
  auto digits = [&](std::string_view s) {
    if (s.empty()) bad();
    for (char c : s)
      if (c < '0' || c > '9') bad();
    return BigInt(std::string(s));
  };
  std::string_view num = text, den;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
  }
  bool neg = false;
  if (!num.empty() && (num.front() == '-' || num.front() == '+')) {
    neg = num.front() == '-';
    num.remove_prefix(1);
  }
  BigInt n = digits(num);
  if (neg) n = -n;
  if (den.empty() && text.find('/') == std::string_view::npos) return Rational(n, BigInt(1));
  BigInt d = digits(den);
  if (d == 0) bad();
  return Rational(n, d);
}

}  // namespace cake
