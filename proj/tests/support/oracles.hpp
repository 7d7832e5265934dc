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

// Reference computations written independently of the library code paths
// they check: direct MPFR evaluation and a plain continued-fraction scan.

#include <cmath>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

#include <boost/multiprecision/mpfr.hpp>

namespace raqm::testing {

using Mp = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<240>,
                                         boost::multiprecision::et_off>;

inline Mp mp_pi() { return boost::math::constants::pi<Mp>(); }

inline Mp mp_frac(std::int64_t a, std::int64_t b) { return Mp(a) / Mp(b); }

/// True when some p/q with q <= max_q lies within 10^tol_exp of x. Scans
/// continued-fraction convergents with plain long arithmetic on q.
inline bool has_close_rational(const Mp& x, std::int64_t max_q = 1'000'000, int tol_exp = -150) {
  const Mp tol = boost::multiprecision::pow(Mp(10), tol_exp);
  Mp rest = x;
  Mp h_prev = 1, h = boost::multiprecision::floor(rest);
  std::int64_t k_prev = 0, k = 1;
  for (int iter = 0; iter < 200; ++iter) {
    if (boost::multiprecision::abs(x - h / Mp(k)) < tol) return true;
    const Mp f = rest - boost::multiprecision::floor(rest);
    if (f == 0) return true;
    rest = 1 / f;
    const Mp a = boost::multiprecision::floor(rest);
    const long double ad = a.convert_to<long double>();
    if (ad > 1e7L) return false;  // next denominator would exceed the window
    const auto ai = static_cast<std::int64_t>(ad);
    const std::int64_t k_next = ai * k + k_prev;
    if (k_next > max_q) return false;
    const Mp h_next = a * h + h_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return false;
}

/// Euler's totient by direct count.
inline std::int64_t totient(std::int64_t n) {
  std::int64_t count = 0;
  for (std::int64_t k = 1; k <= n; ++k) count += std::gcd(k, n) == 1;
  return count;
}

template <class R>
Mp to_mp(const R& r) {
  return Mp(r.num().get_str()) / Mp(r.den().get_str());
}

/// X . Z for the triangle with |XY| = acos(cos_xy), |YZ| = acos(cos_yz) and
/// vertex angle 2 pi turns at Y, built from explicit vectors: Y at the north
/// pole, X in the xz-plane, Z at the requested azimuth.
inline Mp dot_xz_by_vectors(const Mp& cos_xy, const Mp& cos_yz, const Mp& turns) {
  using boost::multiprecision::acos;
  using boost::multiprecision::cos;
  using boost::multiprecision::sin;
  const Mp a = acos(cos_xy);
  const Mp c = acos(cos_yz);
  const Mp phi = 2 * mp_pi() * turns;
  const std::array<Mp, 3> x{sin(a), Mp(0), cos(a)};
  const std::array<Mp, 3> z{sin(c) * cos(phi), sin(c) * sin(phi), cos(c)};
  return x[0] * z[0] + x[1] * z[1] + x[2] * z[2];
}

struct UncertaintyOracle {
  long jx = 0;  // p * <sigma_x>, truncated toward zero
  long jy = 0;
  bool holds = false;
  bool equality = false;
};

/// Spin uncertainty for the grid state (m1, n1) at modulus p, recomputed in
/// 240-digit arithmetic: truncated ensemble means and
/// sqrt((1 - mx^2)(1 - my^2))/4 >= |cos theta|/4.
inline UncertaintyOracle uncertainty_oracle(long p, long m1, long n1) {
  const Mp P(p);
  const Mp cos_t = Mp(m1) / P - 1;
  const Mp sin_t = boost::multiprecision::sqrt(1 - cos_t * cos_t);
  const Mp phi = 2 * mp_pi() * Mp(n1) / (4 * P);
  // Exact integers can land a hair off in floating point; nudge them.
  auto trunc = [](const Mp& v) {
    const Mp r = boost::multiprecision::round(v);
    return boost::multiprecision::abs(v - r) < Mp(1e-150) ? r : boost::multiprecision::trunc(v);
  };
  const Mp jx = trunc(P * sin_t * boost::multiprecision::cos(phi));
  const Mp jy = trunc(P * sin_t * boost::multiprecision::sin(phi));
  const Mp mx = jx / P, my = jy / P;
  const Mp lhs = boost::multiprecision::sqrt((1 - mx * mx) * (1 - my * my)) / 4;
  const Mp rhs = boost::multiprecision::abs(cos_t) / 4;
  return {jx.convert_to<long>(), jy.convert_to<long>(), lhs + Mp(1e-150) >= rhs,
          boost::multiprecision::abs(lhs - rhs) < Mp(1e-150)};
}

}  // namespace raqm::testing
