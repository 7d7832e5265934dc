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

#include "raqm/exactmath.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace raqm::exactmath {

namespace {

mpq_class make_q(const BigInt& num, const BigInt& den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  mpq_class q(num, den);
  q.canonicalize();
  return q;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

BigInt parse_int(std::string_view s) {
  s = trim(s);
  std::string_view digits = s;
  if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
  if (digits.empty()) throw std::invalid_argument("empty integer in rational literal");
  for (char c : digits) {
    if (c < '0' || c > '9') throw std::invalid_argument("bad integer '" + std::string(s) + "'");
  }
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return BigInt(text, 10);
}

}  // namespace

Rational::Rational(long value) : value_(value) {}
Rational::Rational(const BigInt& value) : value_(value) {}
Rational::Rational(const BigInt& num, const BigInt& den) : value_(make_q(num, den)) {}
Rational::Rational(const mpq_class& q) : value_(q) { value_.canonicalize(); }

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

std::optional<Rational> Rational::exact_sqrt() const {
  if (sign() < 0) return std::nullopt;
  const BigInt n = num();
  const BigInt d = den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) {
    return std::nullopt;
  }
  return Rational(BigInt(sqrt(n)), BigInt(sqrt(d)));
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational Rational::floor() const {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return Rational(q);
}

std::string Rational::to_string() const {
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw std::domain_error("rational division by zero");
  return Rational(mpq_class(a.value_ / b.value_));
}
Rational Rational::operator-() const { return Rational(mpq_class(-value_)); }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

// ---------------------------------------------------------------------------

RationalAngle::RationalAngle(const Rational& turns) : turns_(turns - turns.floor()) {}

RationalAngle RationalAngle::parse(std::string_view text) {
  text = trim(text);
  constexpr std::string_view kSuffix = "turns";
  if (text.size() >= kSuffix.size() && text.substr(text.size() - kSuffix.size()) == kSuffix) {
    text.remove_suffix(kSuffix.size());
  }
  return RationalAngle(Rational::parse(text));
}

RationalAngle RationalAngle::scaled(long k) const { return RationalAngle(turns_ * Rational(k)); }
RationalAngle RationalAngle::operator+(const RationalAngle& o) const { return RationalAngle(turns_ + o.turns_); }
RationalAngle RationalAngle::operator-() const { return RationalAngle(-turns_); }

double RationalAngle::radians() const { return 2.0 * std::numbers::pi * turns_.to_double(); }

std::string RationalAngle::to_string() const { return turns_.to_string() + " turns"; }

// ---------------------------------------------------------------------------

bool is_prime(const BigInt& n) {
  if (n < 2) return false;
  static constexpr std::array<unsigned long, 13> kWitnesses = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  for (unsigned long w : kWitnesses) {
    if (n == w) return true;
    if (mpz_divisible_ui_p(n.get_mpz_t(), w)) return false;
  }
  // These witnesses decide every n < 3.317e24 exactly.
  static const BigInt kDeterministicBound("3317044064679887385961981", 10);
  if (n >= kDeterministicBound) {
    throw std::domain_error("primality of " + n.get_str() + " cannot be decided deterministically");
  }
  BigInt d = n - 1;
  unsigned long s = 0;
  while (mpz_even_p(d.get_mpz_t())) {
    d /= 2;
    ++s;
  }
  const BigInt n_minus_1 = n - 1;
  for (unsigned long w : kWitnesses) {
    BigInt x;
    const BigInt base(w);
    mpz_powm(x.get_mpz_t(), base.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n_minus_1) continue;
    bool composite = true;
    for (unsigned long r = 1; r < s; ++r) {
      x = (x * x) % n;
      if (x == n_minus_1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

PrimeModulus::PrimeModulus(const BigInt& p) : p_(p) {
  if (p_ < 3) throw std::invalid_argument("p must be a prime >= 3");
  if (!is_prime(p_)) throw std::invalid_argument("p must be prime (got " + p_.get_str() + ")");
}

std::uint64_t PrimeModulus::as_u64() const {
  if (!p_.fits_ulong_p()) throw std::overflow_error("modulus too large for a bit-string ensemble");
  return p_.get_ui();
}

// ---------------------------------------------------------------------------

CosClass niven_classify(const RationalAngle& nu) {
  const Rational& t = nu.turns();
  const BigInt den = t.den();
  if (den == 1) return CosClass::rational(Rational(1));
  if (den == 2) return CosClass::rational(Rational(-1));
  if (den == 4) return CosClass::rational(Rational(0));
  if (den == 6) return CosClass::rational(Rational(1, 2));  // 1/6, 5/6
  if (den == 3) return CosClass::rational(Rational(-1, 2));  // 1/3, 2/3
  return CosClass::irrational();
}

std::optional<std::uint64_t> padic_valuation(const BigInt& n, const PrimeModulus& p) {
  if (n == 0) return std::nullopt;
  BigInt rest;
  const auto k = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.value().get_mpz_t());
  return static_cast<std::uint64_t>(k);
}

std::optional<std::int64_t> padic_valuation(const Rational& x, const PrimeModulus& p) {
  if (x.is_zero()) return std::nullopt;
  const auto vn = padic_valuation(x.num(), p);
  const auto vd = padic_valuation(x.den(), p);
  return static_cast<std::int64_t>(*vn) - static_cast<std::int64_t>(*vd);
}

Rational padic_norm(const Rational& x, const PrimeModulus& p) {
  const auto v = padic_valuation(x, p);
  if (!v) return Rational(0);
  BigInt power;
  mpz_pow_ui(power.get_mpz_t(), p.value().get_mpz_t(), static_cast<unsigned long>(*v < 0 ? -*v : *v));
  return *v >= 0 ? Rational(BigInt(1), power) : Rational(power);
}

Rational padic_distance(const BigInt& a, const BigInt& b, const PrimeModulus& p) {
  return padic_norm(Rational(BigInt(a - b)), p);
}

}  // namespace raqm::exactmath
