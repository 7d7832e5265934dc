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

#include "raqm/chaos.hpp"

#include <cmath>
#include <limits>

namespace raqm::chaos {

namespace {

constexpr double kMinusInf = -std::numeric_limits<double>::infinity();

double safe_log10(double x) { return x > 0.0 ? std::log10(x) : kMinusInf; }

}  // namespace

void ButterflyParams::validate() const {
  for (double v : {l, R, tau, G, m_source, r}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("butterfly parameters must be positive");
  }
  if (!(deltaR >= 0.0)) throw std::invalid_argument("deltaR must be non-negative");
}

double ButterflyParams::log10_ratio() const { return std::log10(l) - std::log10(R); }

GravPerturbation grav_perturbation(const ButterflyParams& p) {
  p.validate();
  // delta a = 2 G m dr / r^3,  dtheta1 = tau^2 delta a / R
  const double log_da = std::log10(2.0) + std::log10(p.G) + std::log10(p.m_source) + safe_log10(p.deltaR) -
                        3.0 * std::log10(p.r);
  const double log_dt = 2.0 * std::log10(p.tau) + log_da - std::log10(p.R);
  return {log_da, log_dt};
}

double collision_growth(const ButterflyParams& p, std::uint64_t M, double log10_delta_theta1) {
  p.validate();
  if (M == 0) return log10_delta_theta1;
  return static_cast<double>(M) * p.log10_ratio() + log10_delta_theta1;
}

std::uint64_t collisions_until(const ButterflyParams& p, double log10_delta_theta1, double log10_target) {
  p.validate();
  const double ratio = p.log10_ratio();
  if (!(ratio > 0.0)) throw NonAmplifying("l/R must exceed 1 for the uncertainty to grow");
  if (!std::isfinite(log10_delta_theta1)) throw std::invalid_argument("initial uncertainty must be positive");
  const double need = (log10_target - log10_delta_theta1) / ratio;
  if (need <= 1e-12) return 0;
  // Tolerance absorbs the rounding in log10 so that exact powers land on
  // the integer.
  return static_cast<std::uint64_t>(std::ceil(need - 1e-12));
}

void LorenzParams::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("dt must be positive");
  if (steps < 1) throw std::invalid_argument("steps must be >= 1");
}

namespace {

State deriv(const State& s, const LorenzParams& p) {
  return {p.sigma * (s[1] - s[0]), s[0] * (p.rho - s[2]) - s[1], s[0] * s[1] - p.beta * s[2]};
}

State axpy(const State& s, double h, const State& k) { return {s[0] + h * k[0], s[1] + h * k[1], s[2] + h * k[2]}; }

double distance(const State& a, const State& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) + (a[2] - b[2]) * (a[2] - b[2]));
}

}  // namespace

State lorenz_step(const State& s, const LorenzParams& p) {
  const double h = p.dt;
  const State k1 = deriv(s, p);
  const State k2 = deriv(axpy(s, h / 2, k1), p);
  const State k3 = deriv(axpy(s, h / 2, k2), p);
  const State k4 = deriv(axpy(s, h, k3), p);
  State out;
  for (int i = 0; i < 3; ++i) out[i] = s[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

std::vector<State> lorenz_integrate(const State& initial, const LorenzParams& params) {
  params.validate();
  for (double v : initial) {
    if (!std::isfinite(v)) throw NonFinite("initial state is not finite");
  }
  std::vector<State> traj;
  traj.reserve(params.steps + 1);
  traj.push_back(initial);
  for (std::uint64_t i = 0; i < params.steps; ++i) {
    const State next = lorenz_step(traj.back(), params);
    for (double v : next) {
      if (!std::isfinite(v)) throw NonFinite("trajectory overflowed at step " + std::to_string(i + 1));
    }
    traj.push_back(next);
  }
  return traj;
}

double lyapunov_exponent(const State& initial, const LorenzParams& params, std::uint64_t transient, double d0,
                         std::uint64_t renorm_every) {
  params.validate();
  if (!(d0 > 0.0) || renorm_every < 1) throw std::invalid_argument("bad renormalisation settings");
  State a = initial;
  for (std::uint64_t i = 0; i < transient; ++i) a = lorenz_step(a, params);
  State b = a;
  b[0] += d0;

  double log_sum = 0.0;
  std::uint64_t done = 0;
  while (done + renorm_every <= params.steps) {
    for (std::uint64_t i = 0; i < renorm_every; ++i) {
      a = lorenz_step(a, params);
      b = lorenz_step(b, params);
    }
    done += renorm_every;
    const double d = distance(a, b);
    if (!std::isfinite(d) || d == 0.0) throw NonFinite("shadow trajectory separation degenerated");
    log_sum += std::log(d / d0);
    for (int k = 0; k < 3; ++k) b[k] = a[k] + (b[k] - a[k]) * (d0 / d);
  }
  if (done == 0) throw std::invalid_argument("steps shorter than one renormalisation interval");
  return log_sum / (static_cast<double>(done) * params.dt);
}

void CoarseGrainSpec::validate() const {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw std::invalid_argument("epsilon must be positive");
}

BinKey CoarseStats::key_of(const State& s) const {
  const double side = 2.0 * spec.epsilon;
  BinKey key;
  for (int i = 0; i < 3; ++i) key[i] = static_cast<std::int64_t>(std::floor((s[i] - spec.origin[i]) / side));
  return key;
}

std::optional<BinStats> CoarseStats::bin(const BinKey& key) const {
  const auto it = bins.find(key);
  if (it == bins.end()) return std::nullopt;
  return it->second;
}

CoarseStats coarse_grain_stats(const std::vector<State>& trajectory, const CoarseGrainSpec& spec) {
  spec.validate();
  if (trajectory.empty()) throw EmptyTrajectory("coarse-graining needs at least one state");
  CoarseStats out;
  out.spec = spec;
  out.samples = trajectory.size();

  // The global mean only uses integer occupancies and bin centres, so it is
  // exactly invariant under reordering the trajectory.
  std::map<BinKey, std::array<long double, 3>> sums;
  for (const State& s : trajectory) {
    const BinKey key = out.key_of(s);
    auto& acc = sums[key];
    for (int i = 0; i < 3; ++i) acc[i] += s[i];
    ++out.bins[key].count;
  }
  const double n = static_cast<double>(trajectory.size());
  const double side = 2.0 * spec.epsilon;
  State global{};
  for (auto& [key, st] : out.bins) {
    st.weight = static_cast<double>(st.count) / n;
    const auto& acc = sums[key];
    for (int i = 0; i < 3; ++i) {
      st.mean[i] = static_cast<double>(acc[i] / static_cast<long double>(st.count));
      const double centre = spec.origin[i] + (static_cast<double>(key[i]) + 0.5) * side;
      global[i] += st.weight * centre;
    }
  }
  out.global_mean = global;
  return out;
}

}  // namespace raqm::chaos
