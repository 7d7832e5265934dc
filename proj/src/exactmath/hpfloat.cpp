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

#include "raqm/hpfloat.hpp"

#include <sstream>

namespace raqm::hp {

using exactmath::BigInt;
using exactmath::Rational;

namespace {

BigFloat from_mpz(const BigInt& z) {
  BigFloat out;
  mpfr_set_z(out.backend().data(), z.get_mpz_t(), MPFR_RNDN);
  return out;
}

BigInt floor_to_mpz(const BigFloat& x) {
  BigInt z;
  mpfr_get_z(z.get_mpz_t(), x.backend().data(), MPFR_RNDD);
  return z;
}

}  // namespace

BigFloat to_big(const Rational& r) {
  BigFloat out;
  mpfr_set_q(out.backend().data(), r.raw().get_mpq_t(), MPFR_RNDN);
  return out;
}

BigFloat cos_turns(const exactmath::RationalAngle& nu) {
  if (auto exact = exactmath::niven_classify(nu); exact.is_rational()) return to_big(*exact.value);
  return cos(2 * boost::math::constants::pi<BigFloat>() * to_big(nu.turns()));
}

BigFloat sin_turns(const exactmath::RationalAngle& nu) {
  return sin(2 * boost::math::constants::pi<BigFloat>() * to_big(nu.turns()));
}

std::string to_decimal(const BigFloat& x, unsigned digits) {
  std::ostringstream os;
  os.precision(static_cast<std::streamsize>(digits));
  os << x;
  return os.str();
}

std::optional<Rational> close_rational(const BigFloat& x, const ApproximationProbe& probe) {
  const BigFloat tolerance = pow(BigFloat(10), probe.tolerance_exponent);
  const BigInt max_den(std::to_string(probe.max_denominator));

  // Convergent recurrences h_n = a_n h_{n-1} + h_{n-2}, k_n likewise.
  BigInt h_prev = 1, h_prev2 = 0;
  BigInt k_prev = 0, k_prev2 = 1;
  BigFloat rest = x;
  for (int iter = 0; iter < 4096; ++iter) {
    const BigInt a = floor_to_mpz(rest);
    const BigInt h = a * h_prev + h_prev2;
    const BigInt k = a * k_prev + k_prev2;
    if (k > max_den) return std::nullopt;
    const BigFloat err = abs(x - from_mpz(h) / from_mpz(k));
    if (err < tolerance) return Rational(h, k);
    const BigFloat frac = rest - from_mpz(a);
    if (frac == 0) return Rational(h, k);
    rest = 1 / frac;
    h_prev2 = h_prev;
    h_prev = h;
    k_prev2 = k_prev;
    k_prev = k;
  }
  return std::nullopt;
}

}  // namespace raqm::hp
