#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kgkms/errors.hpp"

namespace kgkms {

/// Exact rational on 64-bit words, normalized (gcd 1, positive denominator).
/// Intermediate products run in 128 bits; anything that would not reduce back
/// into 64 bits throws Errc::overflow, which callers treat as "exact mode off".
class Rational {
public:
  Rational() = default;
  Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
  Rational(long long n, long long d);

  long long num() const { return num_; }
  long long den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_negative() const { return num_ < 0; }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  Rational operator-() const { return Rational(-num_, den_); }
  Rational operator+(const Rational& r) const;
  Rational operator-(const Rational& r) const;
  Rational operator*(const Rational& r) const;
  Rational operator/(const Rational& r) const;
  Rational& operator+=(const Rational& r) { return *this = *this + r; }
  Rational& operator-=(const Rational& r) { return *this = *this - r; }
  Rational& operator*=(const Rational& r) { return *this = *this * r; }

  static Rational pow(const Rational& base, int exponent);

  friend bool operator==(const Rational&, const Rational&) = default;
  friend auto operator<=>(const Rational& a, const Rational& b) {
    return (__int128)a.num_ * b.den_ <=> (__int128)b.num_ * a.den_;
  }

  std::string to_string() const;

private:
  static Rational reduced128(__int128 n, __int128 d);
  long long num_ = 0;
  long long den_ = 1;
};

/// Scalar of the form  sum_m  q_m * e^{x_m}  with exact rational q_m and a
/// double exponent x_m. Products and sums stay exact as long as exponent keys
/// coincide bitwise; once exactness is lost the value degrades to a plain
/// double and says so.
///
/// This is the "rational-exact mode" carrier: with normalized dynamics the
/// weight e^{-r.n} splits as (prod_{i in K} rho_i^{-n_i}) * e^{-sum_J r_j n_j},
/// whose first factor is exactly rational whenever the rho_i are integers.
class XReal {
public:
  XReal() = default;
  XReal(Rational q) { if (!q.is_zero()) terms_.push_back({0.0, q}); }  // NOLINT
  static XReal monomial(Rational q, double exponent);
  static XReal approximate(double value);

  bool exact() const { return exact_; }
  bool is_zero() const { return exact_ ? terms_.empty() : approx_ == 0.0; }
  double to_double() const;

  XReal operator+(const XReal& r) const;
  XReal operator-(const XReal& r) const;
  XReal operator*(const XReal& r) const;
  XReal operator-() const;
  XReal& operator+=(const XReal& r) { return *this = *this + r; }
  XReal& operator-=(const XReal& r) { return *this = *this - r; }
  XReal& operator*=(const XReal& r) { return *this = *this * r; }

  /// Exact structural equality (same monomials). False whenever either side
  /// has lost exactness.
  friend bool operator==(const XReal& a, const XReal& b) {
    return a.exact_ && b.exact_ && a.terms_ == b.terms_;
  }

  std::string to_string() const;

private:
  struct Term {
    double x = 0.0;
    Rational q;
    friend bool operator==(const Term&, const Term&) = default;
  };
  void normalize();

  std::vector<Term> terms_;  // sorted by exponent, no zero coefficients
  bool exact_ = true;
  double approx_ = 0.0;  // used only when !exact_
};

/// Exact kernel of (A - p*I) for an integer matrix A given by row-major
/// entries; returns the positive 1-norm-one eigenvector when the kernel is
/// one-dimensional and strictly positive, nullopt otherwise.
std::optional<std::vector<Rational>> rational_perron_vector(
    const std::vector<long long>& a, int n, long long p);

}  // namespace kgkms
