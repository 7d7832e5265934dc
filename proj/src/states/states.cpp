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

#include "raqm/states.hpp"

#include <algorithm>
#include <stdexcept>

namespace raqm::states {

using exactmath::BigInt;
using exactmath::RationalAngle;
using hp::BigFloat;

namespace {

std::uint64_t positive_mod(std::int64_t k, std::uint64_t n) {
  const auto sn = static_cast<std::int64_t>(n);
  return static_cast<std::uint64_t>(((k % sn) + sn) % sn);
}

std::vector<Bit> canonical_bits(std::uint64_t length, std::uint64_t plus) {
  std::vector<Bit> bits(length, Bit{-1});
  std::fill_n(bits.begin(), plus, Bit{+1});
  return bits;
}

// Signed grid step j (mean = j/p) for target sqrt(radicand)/p * trig, with
// |j| <= |target * p|. `trig_sq` is cos^2 or sin^2 of phi, rational when the
// doubled phase is a Niven angle; otherwise we fall back to 230 digits,
// where an irrational product cannot sit on an integer.
std::int64_t toward_zero_step(const BigInt& radicand, const exactmath::CosClass& trig_sq_exact,
                              const BigFloat& trig) {
  if (radicand == 0) return 0;
  BigInt magnitude;
  if (trig_sq_exact.is_rational()) {
    const Rational t = Rational(radicand) * *trig_sq_exact.value;
    const BigInt fl = t.floor().num();
    mpz_sqrt(magnitude.get_mpz_t(), fl.get_mpz_t());
  } else {
    const BigFloat scaled = sqrt(hp::to_big(Rational(radicand))) * abs(trig);
    mpfr_get_z(magnitude.get_mpz_t(), scaled.backend().data(), MPFR_RNDZ);
  }
  if (magnitude == 0) return 0;
  const std::int64_t j = static_cast<std::int64_t>(magnitude.get_si());
  return trig < 0 ? -j : j;
}

}  // namespace

Rational QubitState::cos_theta() const {
  const BigInt pv = p_.value();
  return Rational(BigInt(m1_)) / Rational(pv) - Rational(1);
}

QubitState make_qubit(const PrimeModulus& p, std::int64_t m1, std::int64_t n1) {
  const std::uint64_t pv = p.as_u64();
  if (m1 < 0 || static_cast<std::uint64_t>(m1) > 2 * pv) throw std::out_of_range("m1 must lie in [0, 2p]");
  if (n1 < 0 || static_cast<std::uint64_t>(n1) >= 4 * pv) throw std::out_of_range("n1 must lie in [0, 4p)");
  const std::uint64_t length = 2 * pv;
  std::vector<Bit> bits = canonical_bits(length, static_cast<std::uint64_t>(m1));
  std::rotate(bits.rbegin(), bits.rbegin() + static_cast<std::ptrdiff_t>(static_cast<std::uint64_t>(n1) % length),
              bits.rend());
  return QubitState(p, static_cast<std::uint64_t>(m1), static_cast<std::uint64_t>(n1), std::move(bits));
}

Rational born_frequency(const QubitState& q) {
  return Rational(BigInt(q.m1()), BigInt(q.length()));
}

QubitState phase_permute(const QubitState& q, std::int64_t k) {
  const std::uint64_t length = q.length();
  std::vector<Bit> bits(q.bits().begin(), q.bits().end());
  const std::uint64_t shift = positive_mod(k, length);
  std::rotate(bits.rbegin(), bits.rbegin() + static_cast<std::ptrdiff_t>(shift), bits.rend());
  const std::uint64_t n1 = (q.n1() + positive_mod(k, 2 * length)) % (2 * length);
  return QubitState(q.p(), q.m1(), n1, std::move(bits));
}

SpinStats uncertainty_stats(const QubitState& q) {
  const std::uint64_t pv = q.p().as_u64();
  const auto centered = static_cast<std::int64_t>(q.m1()) - static_cast<std::int64_t>(pv);
  // p^2 sin^2(theta) = p^2 - (m1 - p)^2, an integer.
  const BigInt radicand = BigInt(pv) * BigInt(pv) - BigInt(centered) * BigInt(centered);

  // phi / 2pi = n1 / 4p; cos^2 phi = (1 + cos 2phi) / 2 is rational exactly
  // when 2phi is a Niven angle.
  const RationalAngle phi(Rational(BigInt(q.n1()), BigInt(4 * pv)));
  const auto cos_2phi = exactmath::niven_classify(phi.scaled(2));
  exactmath::CosClass cos_sq, sin_sq;
  if (cos_2phi.is_rational()) {
    cos_sq = exactmath::CosClass::rational((Rational(1) + *cos_2phi.value) / Rational(2));
    sin_sq = exactmath::CosClass::rational((Rational(1) - *cos_2phi.value) / Rational(2));
  }
  const std::int64_t jx = toward_zero_step(radicand, cos_sq, hp::cos_turns(phi));
  const std::int64_t jy = toward_zero_step(radicand, sin_sq, hp::sin_turns(phi));

  SpinStats s;
  const Rational prat{BigInt(pv)};
  s.mean_z = q.cos_theta();
  s.mean_x = Rational(jx) / prat;
  s.mean_y = Rational(jy) / prat;

  const Rational var_x = Rational(1) - s.mean_x * s.mean_x;  // +-1 units
  const Rational var_y = Rational(1) - s.mean_y * s.mean_y;
  s.std_x = sqrt(hp::to_big(var_x)) / 2;
  s.std_y = sqrt(hp::to_big(var_y)) / 2;
  s.product_lhs = s.std_x * s.std_y;
  s.bound_rhs = hp::to_big(s.mean_z.abs()) / 4;

  const Rational lhs_sq = var_x * var_y;
  const Rational rhs_sq = s.mean_z * s.mean_z;
  s.inequality_holds = lhs_sq >= rhs_sq;
  s.equality = lhs_sq == rhs_sq;
  return s;
}

// ---------------------------------------------------------------------------

std::pair<Bit, Bit> singlet_pair_at(std::uint64_t p, std::uint64_t m, std::uint64_t i) {
  const Bit a = i < p ? Bit{+1} : Bit{-1};
  const std::uint64_t anti_plus = m / 2;       // anti positions in the +1 block
  const std::uint64_t anti_minus = m - anti_plus;  // and in the -1 block
  const bool anti = i < p ? (i < anti_plus) : (i - p < anti_minus);
  return {a, anti ? static_cast<Bit>(-a) : a};
}

Rational SingletEnsemble::cos_theta() const {
  return Rational(BigInt(m)) / Rational(p.value()) - Rational(1);
}

Rational SingletEnsemble::correlation() const {
  std::int64_t sum = 0;
  for (std::size_t i = 0; i < alice.size(); ++i) sum += alice[i] * bob[i];
  return Rational(sum) / Rational(BigInt(alice.size()));
}

SingletEnsemble singlet_ensemble(const PrimeModulus& p, std::int64_t m) {
  const std::uint64_t pv = p.as_u64();
  if (m < 0 || static_cast<std::uint64_t>(m) > 2 * pv) throw std::out_of_range("m must lie in [0, 2p]");
  SingletEnsemble out{p, static_cast<std::uint64_t>(m), {}, {}};
  out.alice.resize(2 * pv);
  out.bob.resize(2 * pv);
  for (std::uint64_t i = 0; i < 2 * pv; ++i) {
    std::tie(out.alice[i], out.bob[i]) = singlet_pair_at(pv, out.m, i);
  }
  return out;
}

std::string bits_csv_row(std::span<const Bit> bits) {
  std::string row;
  row.reserve(bits.size() * 3);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) row += ',';
    row += bits[i] > 0 ? "1" : "-1";
  }
  return row;
}

}  // namespace raqm::states
