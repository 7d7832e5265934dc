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

// Bell/CHSH experiment harness. Each run draws free nominal choices (x, y)
// from their own streams and a hidden variable lambda from separate
// A/B/shared streams; lambda fixes the exact grid configuration
// cos(theta) = m/p - 1 inside the epsilon band, the counterfactual vertex
// angles and the singlet-ensemble index. Counterfactual cells are marked
// defined or undefined by the irrationality certifiers.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raqm/exactmath.hpp"
#include "raqm/rng.hpp"
#include "raqm/states.hpp"

namespace raqm::bell {

using exactmath::PrimeModulus;
using exactmath::Rational;
using exactmath::RationalAngle;
using states::Bit;

struct NoAdmissibleSetting : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CertifierInconclusive : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateReport : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ExperimentKind { Chsh, Bell1964 };
enum class CountMode { Exact, Sampled };

std::string_view to_string(ExperimentKind k);
std::string_view to_string(CountMode m);

/// A nominal choice: the centre of an epsilon disk on the measurement
/// plane of the Bloch sphere (radians) and the disk radius.
struct NominalSetting {
  int label = 0;
  double center = 0.0;
  double epsilon = 0.0;
};

/// band(eps) = 2 sin(eps) (1 + eps): how far cos(theta) may move when both
/// exact settings wander inside their disks.
double band(double epsilon);

enum class Side { A, B, Shared };

/// lambda for one run. The A and B halves are independent streams; a
/// nonzero perturbation counter yields a perturbed half (lambda'_A,
/// lambda'_B) while leaving the other half untouched.
struct HiddenVariable {
  std::uint64_t master_seed = 0;
  std::uint64_t run_index = 0;
  std::uint32_t perturb_a = 0;
  std::uint32_t perturb_b = 0;

  rng::Stream stream(Side side, std::uint32_t purpose, std::uint32_t attempt = 0) const;

  /// Coarse lambda coordinate in [0, 1): the jitter draw that places the
  /// exact configuration inside its admissible window.
  double coordinate() const;
  std::uint64_t singlet_index(std::uint64_t length) const;

  friend bool operator==(const HiddenVariable&, const HiddenVariable&) = default;
};

struct ExactConfig {
  std::uint64_t m = 0;        // grid index, cos(theta) = m/p - 1
  Rational cos_realized;
  std::uint64_t window_lo = 0;  // admissible grid indices [lo, hi]
  std::uint64_t window_hi = 0;
  /// alpha, beta, gamma, delta relative to the realised cell: alpha at the
  /// realised Alice point, beta at the flipped Alice point, gamma at the
  /// realised Bob point, delta at the flipped Bob point.
  std::array<RationalAngle, 4> vertex;

  friend bool operator==(const ExactConfig&, const ExactConfig&) = default;
};

/// Admissible window of grid indices for a nominal pair. Throws
/// NoAdmissibleSetting when empty.
std::pair<std::uint64_t, std::uint64_t> admissible_window(const NominalSetting& a, const NominalSetting& b,
                                                          std::uint64_t p);

/// Index of the grid point m/p - 1 nearest to `cosine` (ties toward larger m).
std::uint64_t nearest_grid_index(double cosine, std::uint64_t p);

/// Vertex angle a/b turns with 7 <= b <= 1000, gcd(b, 6) = 1 and
/// gcd(a, b) = 1, so that cos of the doubled angle is never rational.
RationalAngle draw_vertex_angle(rng::Stream& s);

ExactConfig exact_config(const HiddenVariable& lambda, const NominalSetting& a, const NominalSetting& b,
                         const PrimeModulus& p, std::uint32_t attempt = 0);

struct Outcomes {
  Bit a = 0;
  Bit b = 0;
};

Outcomes measure_pair(const HiddenVariable& lambda, const ExactConfig& cfg, const PrimeModulus& p);

enum class Definedness : std::uint8_t { Defined, Undefined, NotApplicable, NotEvaluated };
std::string_view to_string(Definedness d);

struct ExperimentSetup {
  ExperimentKind kind = ExperimentKind::Chsh;
  /// CHSH: alice = {x=0, x=1}, bob = {y=0, y=1}. Bell-1964: both hold the
  /// three settings x1, x2, x3 and a run picks an ordered pair of them.
  std::vector<NominalSetting> alice;
  std::vector<NominalSetting> bob;
  PrimeModulus p{std::uint64_t{10007}};
  std::uint64_t seed = 42;
  std::uint64_t runs = 100000;
  CountMode mode = CountMode::Sampled;
  bool certify = true;  // build counterfactual tables
  int threads = 1;

  const NominalSetting& alice_setting(int x) const { return alice.at(static_cast<std::size_t>(x)); }
  const NominalSetting& bob_setting(int y) const { return bob.at(static_cast<std::size_t>(y)); }
};

/// Canonical settings: CHSH Alice {0, 45} Bob {22.5, 67.5} polariser
/// degrees (doubled on the sphere); Bell-1964 {0, 45, 90} sphere degrees.
ExperimentSetup canonical_setup(ExperimentKind kind, std::uint64_t p, double epsilon);

using Cell = std::pair<int, int>;

struct RunRecord {
  HiddenVariable lambda;
  int x = 0;
  int y = 0;
  ExactConfig exact;
  Bit outcome_a = 0;
  Bit outcome_b = 0;
  /// (x,y), (x,y'), (x',y), (x',y'). For Bell-1964 the slots are the
  /// realised pair, Bob switching to the third setting, the pair of the two
  /// remaining settings, and an unused slot.
  std::array<Definedness, 4> definedness{Definedness::NotEvaluated, Definedness::NotEvaluated,
                                         Definedness::NotEvaluated, Definedness::NotEvaluated};
  std::uint32_t attempts = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

/// Absolute cells addressed by the four definedness slots of a run.
std::array<std::optional<Cell>, 4> counterfactual_cells(ExperimentKind kind, int x, int y);

/// Flags for the four cells of `run`. Throws CertifierInconclusive when a
/// single-flip cell cannot be certified.
std::array<Definedness, 4> counterfactual_table(const HiddenVariable& lambda, const RunRecord& run,
                                                const ExperimentSetup& setup);

/// Product of the definedness flags read as {0, 1} over applicable slots.
int counterfactual_product(const RunRecord& run);

/// One complete run, retrying the vertex-angle draw when the certifier is
/// inconclusive.
RunRecord run_single(const ExperimentSetup& setup, std::uint64_t run_index);

/// Reference implementation: runs in index order on the calling thread.
std::vector<RunRecord> run_records_serial(const ExperimentSetup& setup);
/// OpenMP implementation; output is identical to the serial one for any
/// thread count.
std::vector<RunRecord> run_records_parallel(const ExperimentSetup& setup, int threads);

struct CellCorrelation {
  Cell cell;
  /// The correlation as a rational: the window average in exact-count
  /// mode, the empirical ratio in sampled mode (empty for an unsampled cell).
  std::optional<Rational> exact;
  double value = 0.0;
  std::uint64_t samples = 0;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::Chsh;
  CountMode mode = CountMode::Sampled;
  std::vector<CellCorrelation> correlations;
  // CHSH: S = |C(0,0) - C(0,1) + C(1,0) + C(1,1)|.
  std::optional<Rational> s_exact;  // empty if a cell was never sampled
  double s_signed = 0.0;
  double s = 0.0;
  // Bell-1964: |C(x1,x2) - C(x1,x3)| <= 1 + C(x2,x3).
  double lhs = 0.0;
  double rhs = 0.0;
  bool violated = false;
  std::vector<RunRecord> records;

  const CellCorrelation& at(Cell c) const;
};

/// Exact-count correlation of a nominal pair: the uniform average over the
/// admissible window of the full singlet-ensemble correlation 1 - m/p.
Rational exact_count_correlation(const NominalSetting& a, const NominalSetting& b, const PrimeModulus& p);

ExperimentResult run_experiment(const ExperimentSetup& setup);

struct CellHistogram {
  Cell cell;
  std::uint64_t count = 0;
  std::vector<std::uint64_t> bins;
};

struct MIReport {
  double bin_width = 0.0;
  std::vector<CellHistogram> cells;
  double chi2 = 0.0;
  std::uint64_t dof = 0;
  double p_value = 1.0;

  std::uint64_t runs = 0;
  double single_flip_undefined_rate = 0.0;
  double all_defined_fraction = 0.0;
  double product_zero_rate = 0.0;
  /// support[i][j]: runs realised in cells[i] for which cells[j] is a
  /// defined counterfactual.
  std::vector<std::vector<std::uint64_t>> support;
};

MIReport mi_report(const std::vector<RunRecord>& records, ExperimentKind kind, double epsilon_bins);

struct AuditReport {
  std::uint64_t runs = 0;
  std::uint64_t lc1_violations = 0;
  std::uint64_t lc2_events = 0;
  std::uint64_t defined_checked = 0;
};

AuditReport causality_audit(const std::vector<RunRecord>& records, const ExperimentSetup& setup);

}  // namespace raqm::bell
