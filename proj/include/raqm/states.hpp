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

// Qubit and singlet states on a discretised Hilbert space. A qubit with
// cos^2(theta/2) = m1/2p and phi/2pi = n1/4p is a deterministic string of
// 2p entries of +-1; Born frequencies are exact counts and the phase acts
// as a cyclic permutation.

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "raqm/exactmath.hpp"
#include "raqm/hpfloat.hpp"

namespace raqm::states {

using exactmath::PrimeModulus;
using exactmath::Rational;

using Bit = std::int8_t;  // +1 or -1

class QubitState {
 public:
  const PrimeModulus& p() const { return p_; }
  std::uint64_t m1() const { return m1_; }
  std::uint64_t n1() const { return n1_; }
  std::span<const Bit> bits() const { return bits_; }
  std::uint64_t length() const { return bits_.size(); }

  Rational cos_theta() const;  // m1/p - 1

  friend bool operator==(const QubitState&, const QubitState&) = default;

 private:
  friend QubitState make_qubit(const PrimeModulus&, std::int64_t, std::int64_t);
  friend QubitState phase_permute(const QubitState&, std::int64_t);

  QubitState(PrimeModulus p, std::uint64_t m1, std::uint64_t n1, std::vector<Bit> bits)
      : p_(std::move(p)), m1_(m1), n1_(n1), bits_(std::move(bits)) {}

  PrimeModulus p_;
  std::uint64_t m1_ = 0;
  std::uint64_t n1_ = 0;
  std::vector<Bit> bits_;
};

/// Canonical string (m1 entries of +1 first) rotated right by n1 mod 2p.
/// Throws std::out_of_range unless 0 <= m1 <= 2p and 0 <= n1 < 4p.
QubitState make_qubit(const PrimeModulus& p, std::int64_t m1, std::int64_t n1);

Rational born_frequency(const QubitState& q);

/// Rotates the string by k (mod 2p) and advances n1 by k (mod 4p).
QubitState phase_permute(const QubitState& q, std::int64_t k);

/// Spin statistics in units hbar = 1 with components +-1/2. The x and y
/// ensembles are the grid strings whose means are the grid points nearest
/// to sin(theta)cos(phi) and sin(theta)sin(phi) without exceeding them in
/// magnitude.
struct SpinStats {
  Rational mean_z;  // cos(theta), in +-1 units
  Rational mean_x;  // realised x-ensemble mean, +-1 units
  Rational mean_y;
  hp::BigFloat std_x;  // Delta S_x
  hp::BigFloat std_y;
  hp::BigFloat product_lhs;  // Delta S_x * Delta S_y
  hp::BigFloat bound_rhs;    // (1/2) |<S_z>|
  bool inequality_holds = false;  // decided exactly on squares
  bool equality = false;
};

SpinStats uncertainty_stats(const QubitState& q);

/// Two +-1 strings of length 2p with exactly m anti-correlated positions.
/// Alice's string is +1 on [0, p) and -1 on [p, 2p) regardless of m.
struct SingletEnsemble {
  PrimeModulus p;
  std::uint64_t m = 0;
  std::vector<Bit> alice;
  std::vector<Bit> bob;

  Rational cos_theta() const;    // m/p - 1
  Rational correlation() const;  // (1/2p) sum alice * bob, counted exactly
};

SingletEnsemble singlet_ensemble(const PrimeModulus& p, std::int64_t m);

/// Entry i of singlet_ensemble(p, m) without materialising the strings.
std::pair<Bit, Bit> singlet_pair_at(std::uint64_t p, std::uint64_t m, std::uint64_t i);

/// "+1,-1,..." style CSV row.
std::string bits_csv_row(std::span<const Bit> bits);

}  // namespace raqm::states
