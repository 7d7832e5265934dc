// Copyright 2026 The raqm-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Exact arithmetic used by every certifier: reduced big rationals, angles
// stored as exact fractions of a turn, prime moduli, the Niven table and
// the p-adic valuation/metric. Nothing in here touches floating point
// except the explicit to_double() escape hatches.

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace raqm::exactmath {

using BigInt = mpz_class;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
class Rational {
 public:
  Rational() = default;
  Rational(long value);  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& value);  // NOLINT(google-explicit-constructor)
  Rational(const BigInt& num, const BigInt& den);
  explicit Rational(const mpq_class& q);

  /// Parses "n/d" or a bare integer "n". Throws std::invalid_argument.
  static Rational parse(std::string_view text);

  BigInt num() const { return value_.get_num(); }
  BigInt den() const { return value_.get_den(); }
  const mpq_class& raw() const { return value_; }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  /// Exact square root when both numerator and denominator are perfect
  /// squares; nullopt otherwise (including negative values).
  std::optional<Rational> exact_sqrt() const;

  Rational abs() const;
  Rational floor() const;  // largest integer <= this
  double to_double() const { return value_.get_d(); }

  /// Always "num/den", including integers ("1/1", "-3/1").
  std::string to_string() const;

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const;
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return cmp(a.value_, b.value_) == 0;
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

/// An angle stored as the exact fraction nu = phi / 2pi, normalised to [0, 1).
class RationalAngle {
 public:
  RationalAngle() = default;
  explicit RationalAngle(const Rational& turns);
  RationalAngle(long num, long den) : RationalAngle(Rational(num, den)) {}

  /// Accepts "a/b", "a/b turns" or a bare integer.
  static RationalAngle parse(std::string_view text);

  const Rational& turns() const { return turns_; }

  /// k * nu (mod 1); used for the doubled angle in the triangle argument.
  RationalAngle scaled(long k) const;
  RationalAngle operator+(const RationalAngle& o) const;
  RationalAngle operator-() const;

  double radians() const;
  std::string to_string() const;  // "a/b turns"

  friend bool operator==(const RationalAngle&, const RationalAngle&) = default;

 private:
  Rational turns_;
};

/// A prime p >= 3. Primality is checked at construction by a deterministic
/// Miller-Rabin test (fixed witness set, exact below 3.3e24); larger
/// candidates are rejected rather than trusted to a probabilistic test.
class PrimeModulus {
 public:
  explicit PrimeModulus(const BigInt& p);
  explicit PrimeModulus(std::uint64_t p) : PrimeModulus(BigInt(std::to_string(p))) {}

  const BigInt& value() const { return p_; }
  /// The modulus as a machine integer; throws std::overflow_error if it
  /// does not fit (bit-string ensembles need this).
  std::uint64_t as_u64() const;

  friend bool operator==(const PrimeModulus&, const PrimeModulus&) = default;

 private:
  BigInt p_;
};

bool is_prime(const BigInt& n);

/// cos(2 pi nu) classified exactly. Rational values only occur on the
/// eight Niven angles; everything else is irrational.
struct CosClass {
  std::optional<Rational> value;

  bool is_rational() const { return value.has_value(); }
  static CosClass irrational() { return {}; }
  static CosClass rational(Rational v) { return {std::move(v)}; }
};

CosClass niven_classify(const RationalAngle& nu);

/// Largest k with p^k | n; nullopt stands for +infinity (n == 0).
std::optional<std::uint64_t> padic_valuation(const BigInt& n, const PrimeModulus& p);

/// Valuation of a rational: v(num) - v(den). nullopt for zero.
std::optional<std::int64_t> padic_valuation(const Rational& x, const PrimeModulus& p);

/// p^-v(a-b), or 0 when a == b. Ultrametric.
Rational padic_distance(const BigInt& a, const BigInt& b, const PrimeModulus& p);

/// |x|_p = p^-v(x), |0|_p = 0.
Rational padic_norm(const Rational& x, const PrimeModulus& p);

}  // namespace raqm::exactmath
