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

#include <cmath>

#include <gtest/gtest.h>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"
#include "raqm/states.hpp"

namespace {

using namespace raqm::states;
using raqm::exactmath::BigInt;
using raqm::exactmath::PrimeModulus;
using raqm::exactmath::Rational;
using raqm::testing::for_all;
using raqm::testing::Gen;
using raqm::testing::Mp;

std::int64_t plus_count(const QubitState& q) {
  std::int64_t n = 0;
  for (Bit b : q.bits()) n += b > 0;
  return n;
}

TEST(Qubit, BornFrequencyExhaustiveSmallPrimes) {
  for (std::uint64_t pv : {5ull, 101ull}) {
    const PrimeModulus p(pv);
    for (std::int64_t m1 = 0; m1 <= static_cast<std::int64_t>(2 * pv); ++m1) {
      for (std::int64_t n1 = 0; n1 < static_cast<std::int64_t>(4 * pv); ++n1) {
        const auto q = make_qubit(p, m1, n1);
        ASSERT_EQ(born_frequency(q), Rational(BigInt(m1), BigInt(2 * pv)));
        ASSERT_EQ(plus_count(q), m1);
      }
    }
  }
}

TEST(Qubit, BornFrequencyIsHalfOnePlusCosTheta) {
  for_all(200, 31, [](Gen& g, int) {
    const PrimeModulus p(std::uint64_t{10007});
    const auto q = make_qubit(p, g.integer(0, 20014), g.integer(0, 40027));
    EXPECT_EQ(born_frequency(q), (Rational(1) + q.cos_theta()) / Rational(2));
  });
}

TEST(Qubit, RejectsOutOfRange) {
  const PrimeModulus p(std::uint64_t{5});
  EXPECT_THROW(make_qubit(p, 11, 0), std::out_of_range);
  EXPECT_THROW(make_qubit(p, -1, 0), std::out_of_range);
  EXPECT_THROW(make_qubit(p, 3, 20), std::out_of_range);
  EXPECT_NO_THROW(make_qubit(p, 10, 19));
}

TEST(Qubit, CanonicalStringAndRotation) {
  const PrimeModulus p(std::uint64_t{5});
  const auto q = make_qubit(p, 3, 0);
  EXPECT_EQ(bits_csv_row(q.bits()), "1,1,1,-1,-1,-1,-1,-1,-1,-1");
  const auto r = make_qubit(p, 3, 2);
  EXPECT_EQ(bits_csv_row(r.bits()), "-1,-1,1,1,1,-1,-1,-1,-1,-1");
  // n1 and n1 + 2p describe the same string but different phases.
  EXPECT_EQ(make_qubit(p, 3, 12).bits()[2], 1);
  EXPECT_FALSE(make_qubit(p, 3, 12) == r);
}

TEST(Qubit, PhasePermutationProperties) {
  const PrimeModulus p(std::uint64_t{101});
  for_all(200, 32, [&](Gen& g, int) {
    const auto q = make_qubit(p, g.integer(0, 202), g.integer(0, 403));
    const std::int64_t k = g.integer(-1000, 1000);
    const auto r = phase_permute(q, k);
    EXPECT_EQ(born_frequency(r), born_frequency(q));
    EXPECT_EQ(r, make_qubit(p, static_cast<std::int64_t>(q.m1()), static_cast<std::int64_t>(r.n1())));
    EXPECT_EQ(phase_permute(r, -k), q);
    EXPECT_EQ(phase_permute(q, 404), q);
    const auto full_turn = phase_permute(q, 202);
    EXPECT_TRUE(std::equal(full_turn.bits().begin(), full_turn.bits().end(), q.bits().begin()));
  });
}

void check_uncertainty_exhaustive(std::uint64_t pv) {
  const PrimeModulus p(pv);
  const auto P = static_cast<long>(pv);
  for (long m1 = 0; m1 <= 2 * P; ++m1) {
    for (long n1 = 0; n1 < 4 * P; ++n1) {
      const auto s = uncertainty_stats(make_qubit(p, m1, n1));
      const auto o = raqm::testing::uncertainty_oracle(P, m1, n1);
      ASSERT_EQ(s.mean_x * Rational(P), Rational(o.jx)) << m1 << "," << n1;
      ASSERT_EQ(s.mean_y * Rational(P), Rational(o.jy)) << m1 << "," << n1;
      ASSERT_TRUE(s.inequality_holds) << m1 << "," << n1;
      ASSERT_TRUE(o.holds) << m1 << "," << n1;
    }
  }
}

TEST(Uncertainty, ExhaustiveP5) { check_uncertainty_exhaustive(5); }
TEST(Uncertainty, ExhaustiveP101) { check_uncertainty_exhaustive(101); }

TEST(Uncertainty, EqualityAtZEigenstates) {
  const PrimeModulus p(std::uint64_t{101});
  for (std::int64_t m1 : {0, 202}) {
    const auto s = uncertainty_stats(make_qubit(p, m1, 17));
    EXPECT_TRUE(s.equality);
    EXPECT_EQ(s.mean_x, Rational(0));
    EXPECT_EQ(Mp(s.product_lhs), Mp("0.25"));
    EXPECT_EQ(Mp(s.bound_rhs), Mp("0.25"));
  }
}

TEST(Singlet, CorrelationIdentityP101) {
  const PrimeModulus p(std::uint64_t{101});
  for (std::int64_t m = 0; m <= 202; ++m) {
    const auto e = singlet_ensemble(p, m);
    ASSERT_EQ(e.correlation(), -e.cos_theta()) << m;
    ASSERT_EQ(e.correlation(), -(Rational(m) / Rational(101) - Rational(1)));
  }
}

TEST(Singlet, StructureOfTheEnsemble) {
  const PrimeModulus p(std::uint64_t{101});
  for (std::int64_t m = 0; m <= 202; ++m) {
    const auto e = singlet_ensemble(p, m);
    std::int64_t anti = 0, bob_plus = 0, alice_plus = 0;
    for (std::size_t i = 0; i < e.alice.size(); ++i) {
      anti += e.alice[i] != e.bob[i];
      bob_plus += e.bob[i] > 0;
      alice_plus += e.alice[i] > 0;
      ASSERT_EQ(singlet_pair_at(101, static_cast<std::uint64_t>(m), i), std::make_pair(e.alice[i], e.bob[i]));
    }
    EXPECT_EQ(anti, m);
    EXPECT_EQ(alice_plus, 101);               // Alice's marginal ignores m
    EXPECT_LE(std::abs(bob_plus - 101), 1);   // Bob's is balanced to within one
  }
}

TEST(Singlet, WorkedExample) {
  const auto e = singlet_ensemble(PrimeModulus(std::uint64_t{101}), 151);
  EXPECT_EQ(e.correlation().to_string(), "-50/101");
  EXPECT_THROW(singlet_ensemble(PrimeModulus(std::uint64_t{101}), 203), std::out_of_range);
}

}  // namespace
