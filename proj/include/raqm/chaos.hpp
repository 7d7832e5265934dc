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

// Collision-amplification arithmetic (all in log10, the magnitudes involved
// underflow doubles) and the Lorenz system with coarse-grained statistics.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace raqm::chaos {

struct NonAmplifying : std::domain_error {
  using std::domain_error::domain_error;
};
struct NonFinite : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct EmptyTrajectory : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// SI units throughout. Defaults: a 10 micrograms wing moved 1 cm at
/// 10^22 m acting on air molecules (R = 1e-10 m, l = 1e-7 m, tau = 1e-9 s).
struct ButterflyParams {
  double l = 1e-7;
  double R = 1e-10;
  double tau = 1e-9;
  double G = 6.674e-11;
  double m_source = 1e-5;
  double deltaR = 1e-2;
  double r = 1e22;

  void validate() const;
  double log10_ratio() const;  // log10(l / R)
};

/// Quantities as base-10 logarithms; -infinity stands for zero.
struct GravPerturbation {
  double log10_delta_a;
  double log10_delta_theta1;
};

GravPerturbation grav_perturbation(const ButterflyParams& p);

/// log10 of (l/R)^M * dtheta1, given log10(dtheta1).
double collision_growth(const ButterflyParams& p, std::uint64_t M, double log10_delta_theta1);

/// Smallest M with (l/R)^M * dtheta1 >= target (both given as log10).
std::uint64_t collisions_until(const ButterflyParams& p, double log10_delta_theta1, double log10_target);

struct LorenzParams {
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
  double dt = 1e-3;
  std::uint64_t steps = 100000;

  void validate() const;
};

using State = std::array<double, 3>;

/// steps + 1 states, the initial one first. Fixed-step RK4.
std::vector<State> lorenz_integrate(const State& initial, const LorenzParams& params);

State lorenz_step(const State& s, const LorenzParams& params);

/// Largest Lyapunov exponent from a reference/shadow pair renormalised to
/// separation d0 every `renorm_every` steps, after discarding `transient`
/// steps.
double lyapunov_exponent(const State& initial, const LorenzParams& params, std::uint64_t transient = 10000,
                         double d0 = 1e-8, std::uint64_t renorm_every = 10);

struct CoarseGrainSpec {
  double epsilon = 0.5;  // ball radius: cubic bins of side 2 epsilon
  State origin{0.0, 0.0, 0.0};

  void validate() const;
};

using BinKey = std::array<std::int64_t, 3>;

struct BinStats {
  std::uint64_t count = 0;
  double weight = 0.0;  // occupancy measure
  State mean{};
};

struct CoarseStats {
  CoarseGrainSpec spec;
  std::uint64_t samples = 0;
  std::map<BinKey, BinStats> bins;
  State global_mean{};  // occupancy-weighted bin centres

  BinKey key_of(const State& s) const;
  /// nullopt for an unoccupied bin.
  std::optional<BinStats> bin(const BinKey& key) const;
};

CoarseStats coarse_grain_stats(const std::vector<State>& trajectory, const CoarseGrainSpec& spec);

}  // namespace raqm::chaos
