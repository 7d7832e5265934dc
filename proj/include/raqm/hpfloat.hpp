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

// 200-digit evaluation of the irrational quantities the certifiers reason
// about, plus the continued-fraction test used as numeric irrationality
// evidence.

#include <cstdint>
#include <optional>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

#include "raqm/exactmath.hpp"

namespace raqm::hp {

/// Working precision carries 30 guard digits over the 200 we report.
inline constexpr unsigned kReportDigits = 200;
inline constexpr unsigned kWorkingDigits = 230;

using BigFloat = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<kWorkingDigits>,
    boost::multiprecision::et_off>;

BigFloat to_big(const exactmath::Rational& r);
BigFloat cos_turns(const exactmath::RationalAngle& nu);  // cos(2 pi nu)
BigFloat sin_turns(const exactmath::RationalAngle& nu);

/// Decimal string with `digits` significant digits (scientific when needed).
std::string to_decimal(const BigFloat& x, unsigned digits = kReportDigits);

struct ApproximationProbe {
  std::uint64_t max_denominator = 1'000'000;
  int tolerance_exponent = -150;  // |x - p/q| < 10^tolerance_exponent
};

/// Searches the continued-fraction convergents of x for p/q with
/// q <= max_denominator and |x - p/q| below the tolerance. Any rational
/// that close must be a convergent (Legendre), so nullopt is conclusive
/// for the probe window.
std::optional<exactmath::Rational> close_rational(const BigFloat& x, const ApproximationProbe& probe = {});

}  // namespace raqm::hp
