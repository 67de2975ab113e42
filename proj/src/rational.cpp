#include "nbl/rational.hpp"

#include <charconv>
#include <numeric>
#include <system_error>

#include "nbl/errors.hpp"

namespace nbl {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw OverflowError("rational overflow");
  }
  return static_cast<std::int64_t>(v);
}

Ratio make_reduced(i128 num, i128 den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Ratio(narrow(num), narrow(den));
}

}  // namespace

Ratio::Ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) throw ArgumentError("rational with zero denominator");
  if (num == INT64_MIN || den == INT64_MIN) throw OverflowError("rational overflow");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num, den);
  num_ = num / g;
  den_ = den / g;
}

mpq_class Ratio::to_mpq() const {
  mpq_class q;
  mpz_set_si(q.get_num_mpz_t(), num_);
  mpz_set_si(q.get_den_mpz_t(), den_);
  return q;
}

std::string Ratio::str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

std::int64_t Ratio::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

Ratio Ratio::operator-() const { return Ratio(-num_, den_); }

Ratio operator+(const Ratio& a, const Ratio& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.den_ + static_cast<i128>(b.num_) * a.den_,
                      static_cast<i128>(a.den_) * b.den_);
}

Ratio operator-(const Ratio& a, const Ratio& b) { return a + (-b); }

Ratio operator*(const Ratio& a, const Ratio& b) {
  return make_reduced(static_cast<i128>(a.num_) * b.num_, static_cast<i128>(a.den_) * b.den_);
}

Ratio operator/(const Ratio& a, const Ratio& b) {
  if (b.num_ == 0) throw ArgumentError("division by zero rational");
  return make_reduced(static_cast<i128>(a.num_) * b.den_, static_cast<i128>(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
  const i128 lhs = static_cast<i128>(a.num_) * b.den_;
  const i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Ratio Ratio::parse(const std::string& text) {
  const auto slash = text.find('/');
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw ArgumentError("not a rational: '" + text + "'");
    }
    return v;
  };
  const std::string_view sv(text);
  if (slash == std::string::npos) return Ratio(parse_int(sv));
  return Ratio(parse_int(sv.substr(0, slash)), parse_int(sv.substr(slash + 1)));
}

Coeff::Coeff(const mpq_class& q) : value_(q.get_d()), exact_(q) { exact_->canonicalize(); }

Coeff Coeff::inexact(double v) {
  Coeff c;
  c.value_ = v;
  c.exact_.reset();
  return c;
}

bool Coeff::is_zero() const { return exact_ ? sgn(*exact_) == 0 : value_ == 0.0; }

Coeff Coeff::operator-() const {
  if (exact_) return Coeff(mpq_class(-*exact_));
  return inexact(-value_);
}

Coeff operator+(const Coeff& a, const Coeff& b) {
  if (a.exact_ && b.exact_) return Coeff(mpq_class(*a.exact_ + *b.exact_));
  return Coeff::inexact(a.value_ + b.value_);
}

Coeff operator-(const Coeff& a, const Coeff& b) { return a + (-b); }

Coeff operator*(const Coeff& a, const Coeff& b) {
  if (a.exact_ && b.exact_) return Coeff(mpq_class(*a.exact_ * *b.exact_));
  return Coeff::inexact(a.value_ * b.value_);
}

Coeff operator/(const Coeff& a, const Coeff& b) {
  if (b.is_zero()) throw ArgumentError("division by zero coefficient");
  if (a.exact_ && b.exact_) return Coeff(mpq_class(*a.exact_ / *b.exact_));
  return Coeff::inexact(a.value_ / b.value_);
}

std::string Coeff::str() const {
  if (exact_) {
    return exact_->get_num().get_str() + "/" + exact_->get_den().get_str();
  }
  return shortest_repr(value_);
}

Coeff Coeff::parse(const std::string& text) {
  const bool looks_decimal = text.find_first_of(".eEn") != std::string::npos;
  if (!looks_decimal) {
    mpq_class q;
    if (q.set_str(text, 10) != 0) throw ArgumentError("not a coefficient: '" + text + "'");
    if (sgn(q.get_den()) == 0) throw ArgumentError("zero denominator in '" + text + "'");
    return Coeff(q);
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("not a coefficient: '" + text + "'");
  }
  return inexact(v);
}

std::string shortest_repr(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ptr);
  // Keep inexact coefficients visibly decimal so parse() does not take them as exact.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

}  // namespace nbl
