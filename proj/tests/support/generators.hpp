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

// Small hand-rolled generators for property tests.

#include <cstdint>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "raqm/exactmath.hpp"

namespace raqm::testing {

using exactmath::BigInt;
using exactmath::Rational;
using exactmath::RationalAngle;

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : eng_(seed) {}

  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(eng_);
  }

  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(eng_); }

  /// Reduced a/b in the open interval (-1, 1), 2 <= b <= max_den.
  Rational open_unit_rational(std::int64_t max_den = 1000) {
    const std::int64_t b = integer(2, max_den);
    const std::int64_t a = integer(-(b - 1), b - 1);
    return Rational(BigInt(std::to_string(a)), BigInt(std::to_string(b)));
  }

  /// Angle whose doubled value has an irrational cosine: the reduced
  /// denominator avoids {1, 2, 3, 4, 6, 8, 12}.
  RationalAngle non_exceptional_angle(std::int64_t max_den = 1000) {
    for (;;) {
      const std::int64_t b = integer(5, max_den);
      if (b == 6 || b == 8 || b == 12) continue;
      const std::int64_t a = integer(1, b - 1);
      if (std::gcd(a, b) != 1) continue;
      return RationalAngle(a, b);
    }
  }

  /// A multiple of 30 or 45 degrees.
  RationalAngle exceptional_angle() {
    return integer(0, 1) ? RationalAngle(integer(0, 11), 12) : RationalAngle(integer(0, 7), 8);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

/// Runs `body(gen, i)` for `cases` generated cases, tagging failures with
/// the case index.
template <typename F>
void for_all(int cases, std::uint64_t seed, F body) {
  Gen gen(seed);
  for (int i = 0; i < cases; ++i) {
    SCOPED_TRACE(::testing::Message() << "case " << i << " (seed " << seed << ")");
    body(gen, i);
    if (::testing::Test::HasFatalFailure()) return;
  }
}

}  // namespace raqm::testing
