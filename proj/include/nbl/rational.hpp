#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace nbl {

// Exact rational with 64-bit parts, always reduced with den > 0. Every
// operation that could overflow is checked and throws OverflowError.
// Breakpoint arithmetic for theta_k / j relies on these being exact.
class Ratio {
 public:
  constexpr Ratio() = default;
  Ratio(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  mpq_class to_mpq() const;
  std::string str() const;

  bool is_positive() const { return num_ > 0; }
  bool is_integer() const { return den_ == 1; }
  // floor(num / den)
  std::int64_t floor() const;

  Ratio operator-() const;
  friend Ratio operator+(const Ratio& a, const Ratio& b);
  friend Ratio operator-(const Ratio& a, const Ratio& b);
  friend Ratio operator*(const Ratio& a, const Ratio& b);
  friend Ratio operator/(const Ratio& a, const Ratio& b);

  friend bool operator==(const Ratio& a, const Ratio& b) = default;
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b);

  // Parses "p/q" or "p".
  static Ratio parse(const std::string& text);

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// A real coefficient that is exact (rational) whenever its inputs were.
// The double is always populated; the rational only while exact.
class Coeff {
 public:
  Coeff() : value_(0.0), exact_(mpq_class(0)) {}
  Coeff(long v) : value_(static_cast<double>(v)), exact_(mpq_class(v)) {}
  Coeff(int v) : Coeff(static_cast<long>(v)) {}
  Coeff(const mpq_class& q);
  Coeff(const Ratio& r) : Coeff(r.to_mpq()) {}
  static Coeff inexact(double v);

  double value() const { return value_; }
  bool is_exact() const { return exact_.has_value(); }
  // Precondition: is_exact().
  const mpq_class& exact() const { return *exact_; }
  bool is_zero() const;

  Coeff operator-() const;
  friend Coeff operator+(const Coeff& a, const Coeff& b);
  friend Coeff operator-(const Coeff& a, const Coeff& b);
  friend Coeff operator*(const Coeff& a, const Coeff& b);
  friend Coeff operator/(const Coeff& a, const Coeff& b);
  Coeff& operator+=(const Coeff& b) { return *this = *this + b; }

  // "num/den" when exact, otherwise the shortest round-trip decimal.
  std::string str() const;
  // Inverse of str(): a token containing '/' (or a bare integer) is exact.
  static Coeff parse(const std::string& text);

 private:
  double value_;
  std::optional<mpq_class> exact_;
};

// Shortest decimal string that parses back to the same double.
std::string shortest_repr(double v);

}  // namespace nbl
