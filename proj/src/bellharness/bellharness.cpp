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

#include "raqm/bellharness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "raqm/sphgeom.hpp"

namespace raqm::bell {

using exactmath::BigInt;

namespace {

enum Purpose : std::uint32_t {
  kJitter = 1,
  kIndex = 2,
  kAngles = 3,
  kPerturbAngle = 4,
  kChoice = 7,
};

constexpr std::uint32_t kMaxAttempts = 16;

std::uint64_t stream_tag(Side side, std::uint32_t purpose, std::uint32_t attempt, std::uint32_t perturb) {
  return (static_cast<std::uint64_t>(purpose) << 48) | (static_cast<std::uint64_t>(attempt) << 32) |
         (static_cast<std::uint64_t>(perturb) << 2) | static_cast<std::uint64_t>(side);
}

rng::Stream choice_stream(std::uint64_t seed, std::uint64_t run, Side side) {
  return rng::Stream(seed, run, stream_tag(side, kChoice, 0, 0));
}

Rational grid_cos(std::uint64_t m, std::uint64_t p) {
  return Rational(BigInt(m), BigInt(p)) - Rational(1);
}

// Rational stand-in for a counterfactual edge: the grid point nearest to
// the nominal cosine.
Rational hypothesised_cos(const NominalSetting& a, const NominalSetting& b, std::uint64_t p) {
  return grid_cos(nearest_grid_index(std::cos(b.center - a.center), p), p);
}

constexpr std::array<Cell, 3> kBellPairs = {Cell{0, 1}, Cell{0, 2}, Cell{1, 2}};
constexpr std::array<Cell, 4> kChshCells = {Cell{0, 0}, Cell{0, 1}, Cell{1, 0}, Cell{1, 1}};

std::vector<Cell> experiment_cells(ExperimentKind kind) {
  if (kind == ExperimentKind::Chsh) return {kChshCells.begin(), kChshCells.end()};
  return {kBellPairs.begin(), kBellPairs.end()};
}

Cell sorted_cell(int a, int b) { return a < b ? Cell{a, b} : Cell{b, a}; }

Definedness from_single_flip(const sphgeom::Verdict& v) {
  switch (v.kind) {
    case sphgeom::Verdict::Kind::ForcedIrrational: return Definedness::Undefined;
    case sphgeom::Verdict::Kind::Degenerate: return Definedness::Defined;
    default: throw CertifierInconclusive("single-flip cell could not be certified");
  }
}

}  // namespace

std::string_view to_string(ExperimentKind k) { return k == ExperimentKind::Chsh ? "chsh" : "bell1964"; }
std::string_view to_string(CountMode m) { return m == CountMode::Exact ? "exact" : "sampled"; }

std::string_view to_string(Definedness d) {
  switch (d) {
    case Definedness::Defined: return "1";
    case Definedness::Undefined: return "0";
    case Definedness::NotApplicable: return "na";
    case Definedness::NotEvaluated: return "unk";
  }
  return "?";
}

double band(double epsilon) { return 2.0 * std::sin(epsilon) * (1.0 + epsilon); }

rng::Stream HiddenVariable::stream(Side side, std::uint32_t purpose, std::uint32_t attempt) const {
  const std::uint32_t perturb = side == Side::A ? perturb_a : (side == Side::B ? perturb_b : 0);
  return rng::Stream(master_seed, run_index, stream_tag(side, purpose, attempt, perturb));
}

double HiddenVariable::coordinate() const {
  double u = stream(Side::A, kJitter).uniform() + stream(Side::B, kJitter).uniform();
  if (u >= 1.0) u -= 1.0;
  return u;
}

std::uint64_t HiddenVariable::singlet_index(std::uint64_t length) const {
  return stream(Side::Shared, kIndex).below(length);
}

std::pair<std::uint64_t, std::uint64_t> admissible_window(const NominalSetting& a, const NominalSetting& b,
                                                          std::uint64_t p) {
  const double eps = std::min(a.epsilon, b.epsilon);
  if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  const double target = std::cos(b.center - a.center);
  const double w = band(eps);
  const double pd = static_cast<double>(p);
  const double lo = std::max(0.0, std::ceil(pd * (1.0 + target - w)));
  const double hi = std::min(2.0 * pd, std::floor(pd * (1.0 + target + w)));
  if (lo > hi) {
    throw NoAdmissibleSetting("no grid point m/p - 1 within band(epsilon) of the nominal cosine (p * band < 1)");
  }
  return {static_cast<std::uint64_t>(lo), static_cast<std::uint64_t>(hi)};
}

std::uint64_t nearest_grid_index(double cosine, std::uint64_t p) {
  const double pd = static_cast<double>(p);
  const double m = std::clamp(std::round(pd * (1.0 + cosine)), 0.0, 2.0 * pd);
  return static_cast<std::uint64_t>(m);
}

RationalAngle draw_vertex_angle(rng::Stream& s) {
  for (;;) {
    const std::uint64_t den = 7 + s.below(994);
    if (den % 2 == 0 || den % 3 == 0) continue;
    const std::uint64_t num = 1 + s.below(den - 1);
    if (std::gcd(num, den) != 1) continue;
    return RationalAngle(static_cast<long>(num), static_cast<long>(den));
  }
}

ExactConfig exact_config(const HiddenVariable& lambda, const NominalSetting& a, const NominalSetting& b,
                         const PrimeModulus& p, std::uint32_t attempt) {
  const std::uint64_t pv = p.as_u64();
  const auto [lo, hi] = admissible_window(a, b, pv);
  const std::uint64_t count = hi - lo + 1;
  const auto offset = std::min(static_cast<std::uint64_t>(lambda.coordinate() * static_cast<double>(count)), count - 1);

  ExactConfig cfg;
  cfg.window_lo = lo;
  cfg.window_hi = hi;
  cfg.m = lo + offset;
  cfg.cos_realized = grid_cos(cfg.m, pv);
  rng::Stream angles = lambda.stream(Side::Shared, kAngles, attempt);
  for (auto& v : cfg.vertex) v = draw_vertex_angle(angles);
  return cfg;
}

Outcomes measure_pair(const HiddenVariable& lambda, const ExactConfig& cfg, const PrimeModulus& p) {
  const std::uint64_t pv = p.as_u64();
  const auto [a, b] = states::singlet_pair_at(pv, cfg.m, lambda.singlet_index(2 * pv));
  return {a, b};
}

ExperimentSetup canonical_setup(ExperimentKind kind, std::uint64_t p, double epsilon) {
  constexpr double kDeg = std::numbers::pi / 180.0;
  ExperimentSetup setup;
  setup.kind = kind;
  setup.p = PrimeModulus(p);
  if (kind == ExperimentKind::Chsh) {
    // Polariser angles; the Bloch-sphere angle is twice the polariser angle.
    setup.alice = {{0, 2 * 0.0 * kDeg, epsilon}, {1, 2 * 45.0 * kDeg, epsilon}};
    setup.bob = {{0, 2 * 22.5 * kDeg, epsilon}, {1, 2 * 67.5 * kDeg, epsilon}};
  } else {
    setup.alice = {{1, 0.0, epsilon}, {2, 45.0 * kDeg, epsilon}, {3, 90.0 * kDeg, epsilon}};
    setup.bob = setup.alice;
  }
  return setup;
}

std::array<std::optional<Cell>, 4> counterfactual_cells(ExperimentKind kind, int x, int y) {
  if (kind == ExperimentKind::Chsh) {
    return {Cell{x, y}, Cell{x, 1 - y}, Cell{1 - x, y}, Cell{1 - x, 1 - y}};
  }
  const int c = 3 - x - y;
  return {sorted_cell(x, y), sorted_cell(x, c), sorted_cell(y, c), std::nullopt};
}

std::array<Definedness, 4> counterfactual_table(const HiddenVariable& lambda, const RunRecord& run,
                                                const ExperimentSetup& setup) {
  (void)lambda;  // the run's exact configuration already carries everything lambda fixed
  const std::uint64_t pv = setup.p.as_u64();
  const ExactConfig& cfg = run.exact;

  if (setup.kind == ExperimentKind::Chsh) {
    const int x = run.x, y = run.y, xf = 1 - run.x, yf = 1 - run.y;
    sphgeom::QuadSpec quad;
    quad.cos_x0y0 = cfg.cos_realized;
    quad.cos_x0y1 = hypothesised_cos(setup.alice_setting(x), setup.bob_setting(yf), pv);
    quad.cos_x1y0 = hypothesised_cos(setup.alice_setting(xf), setup.bob_setting(y), pv);
    quad.cos_x1y1 = hypothesised_cos(setup.alice_setting(xf), setup.bob_setting(yf), pv);
    quad.alpha = cfg.vertex[0];
    quad.beta = cfg.vertex[1];
    quad.gamma = cfg.vertex[2];
    quad.delta = cfg.vertex[3];
    const auto cert = sphgeom::chsh_certify(quad, sphgeom::Edge::X0Y0);
    if (cert.at(sphgeom::Edge::X0Y0).verdict.kind == sphgeom::Verdict::Kind::Degenerate) {
      return {Definedness::Defined, Definedness::Defined, Definedness::Defined, Definedness::Defined};
    }
    return {Definedness::Defined, from_single_flip(cert.at(sphgeom::Edge::X0Y1).verdict),
            from_single_flip(cert.at(sphgeom::Edge::X1Y0).verdict), Definedness::Defined};
  }

  // Bell-1964: realised (a, b); Bob may switch to c keeping a, after which
  // the remaining pair is the third side of the triangle at X_a.
  const int a = run.x, c = 3 - run.x - run.y;
  const sphgeom::TriangleSpec tri{cfg.cos_realized,
                                  hypothesised_cos(setup.alice_setting(a), setup.bob_setting(c), pv), cfg.vertex[0]};
  return {Definedness::Defined, Definedness::Defined, from_single_flip(sphgeom::impossible_triangle(tri)),
          Definedness::NotApplicable};
}

int counterfactual_product(const RunRecord& run) {
  int product = 1;
  for (Definedness d : run.definedness) {
    if (d == Definedness::NotApplicable) continue;
    if (d != Definedness::Defined) product = 0;
  }
  return product;
}

RunRecord run_single(const ExperimentSetup& setup, std::uint64_t run_index) {
  RunRecord rec;
  rec.lambda = HiddenVariable{setup.seed, run_index, 0, 0};
  if (setup.kind == ExperimentKind::Chsh) {
    rec.x = choice_stream(setup.seed, run_index, Side::A).bit() ? 1 : 0;
    rec.y = choice_stream(setup.seed, run_index, Side::B).bit() ? 1 : 0;
  } else {
    const Cell pair = kBellPairs[choice_stream(setup.seed, run_index, Side::A).below(kBellPairs.size())];
    rec.x = pair.first;
    rec.y = pair.second;
  }
  const NominalSetting& sa = setup.alice_setting(rec.x);
  const NominalSetting& sb = setup.bob_setting(rec.y);

  for (std::uint32_t attempt = 0;; ++attempt) {
    rec.exact = exact_config(rec.lambda, sa, sb, setup.p, attempt);
    rec.attempts = attempt + 1;
    if (attempt == 0) {
      const Outcomes out = measure_pair(rec.lambda, rec.exact, setup.p);
      rec.outcome_a = out.a;
      rec.outcome_b = out.b;
    }
    if (!setup.certify) break;
    try {
      rec.definedness = counterfactual_table(rec.lambda, rec, setup);
      break;
    } catch (const CertifierInconclusive&) {
      if (attempt + 1 >= kMaxAttempts) throw;
    }
  }
  return rec;
}

std::vector<RunRecord> run_records_serial(const ExperimentSetup& setup) {
  std::vector<RunRecord> out;
  out.reserve(setup.runs);
  for (std::uint64_t i = 0; i < setup.runs; ++i) out.push_back(run_single(setup, i));
  return out;
}

std::vector<RunRecord> run_records_parallel(const ExperimentSetup& setup, int threads) {
  const auto n = static_cast<std::int64_t>(setup.runs);
  std::vector<RunRecord> out(setup.runs);
  std::exception_ptr failure;
  std::int64_t failure_index = n;
#pragma omp parallel for schedule(static) num_threads(threads > 0 ? threads : 1)
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = run_single(setup, static_cast<std::uint64_t>(i));
    } catch (...) {
#pragma omp critical(raqm_run_failure)
      {
        // Report the lowest failing index so the error matches the serial path.
        if (i < failure_index) {
          failure_index = i;
          failure = std::current_exception();
        }
      }
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// ---------------------------------------------------------------------------

const CellCorrelation& ExperimentResult::at(Cell c) const {
  for (const auto& cc : correlations) {
    if (cc.cell == c) return cc;
  }
  throw std::out_of_range("no correlation for requested cell");
}

Rational exact_count_correlation(const NominalSetting& a, const NominalSetting& b, const PrimeModulus& p) {
  const std::uint64_t pv = p.as_u64();
  const auto [lo, hi] = admissible_window(a, b, pv);
  // Sum over the window of (#correlated - #anti-correlated) in the 2p-entry
  // ensemble: (2p - m) - m.
  BigInt total = 0;
  for (std::uint64_t m = lo; m <= hi; ++m) total += BigInt(2 * pv) - BigInt(2 * m);
  const BigInt entries = BigInt(2 * pv) * BigInt(hi - lo + 1);
  return Rational(total, entries);
}

ExperimentResult run_experiment(const ExperimentSetup& setup) {
  if (setup.runs < 1) throw std::invalid_argument("runs must be >= 1");
  ExperimentResult result;
  result.kind = setup.kind;
  result.mode = setup.mode;
  result.records = setup.threads > 1 ? run_records_parallel(setup, setup.threads) : run_records_serial(setup);

  for (const Cell& cell : experiment_cells(setup.kind)) {
    CellCorrelation cc;
    cc.cell = cell;
    std::int64_t sum = 0;
    for (const auto& r : result.records) {
      const Cell rc = setup.kind == ExperimentKind::Chsh ? Cell{r.x, r.y} : sorted_cell(r.x, r.y);
      if (rc != cell) continue;
      sum += r.outcome_a * r.outcome_b;
      ++cc.samples;
    }
    if (setup.mode == CountMode::Exact) {
      cc.exact = exact_count_correlation(setup.alice_setting(cell.first), setup.bob_setting(cell.second), setup.p);
    } else if (cc.samples > 0) {
      cc.exact = Rational(BigInt(std::to_string(sum)), BigInt(std::to_string(cc.samples)));
    }
    cc.value = cc.exact ? cc.exact->to_double() : std::numeric_limits<double>::quiet_NaN();
    result.correlations.push_back(std::move(cc));
  }

  if (setup.kind == ExperimentKind::Chsh) {
    const auto& c00 = result.at({0, 0});
    const auto& c01 = result.at({0, 1});
    const auto& c10 = result.at({1, 0});
    const auto& c11 = result.at({1, 1});
    if (c00.exact && c01.exact && c10.exact && c11.exact) {
      const Rational s = *c00.exact - *c01.exact + *c10.exact + *c11.exact;
      result.s_exact = s.abs();
      result.s_signed = s.to_double();
    } else {
      result.s_signed = std::numeric_limits<double>::quiet_NaN();
    }
    result.s = std::abs(result.s_signed);
  } else {
    const double c12 = result.at({0, 1}).value;
    const double c13 = result.at({0, 2}).value;
    const double c23 = result.at({1, 2}).value;
    result.lhs = std::abs(c12 - c13);
    result.rhs = 1.0 + c23;
    result.violated = result.lhs > result.rhs;
  }
  return result;
}

// ---------------------------------------------------------------------------

namespace {

std::vector<std::size_t> single_flip_slots(ExperimentKind kind) {
  if (kind == ExperimentKind::Chsh) return {1, 2};
  return {2};
}

std::size_t cell_index(const std::vector<Cell>& cells, Cell c) {
  const auto it = std::find(cells.begin(), cells.end(), c);
  if (it == cells.end()) throw std::out_of_range("record outside the experiment's cells");
  return static_cast<std::size_t>(it - cells.begin());
}

Cell realised_cell(ExperimentKind kind, const RunRecord& r) {
  return kind == ExperimentKind::Chsh ? Cell{r.x, r.y} : sorted_cell(r.x, r.y);
}

}  // namespace

MIReport mi_report(const std::vector<RunRecord>& records, ExperimentKind kind, double epsilon_bins) {
  if (!(epsilon_bins > 0.0) || epsilon_bins > 1.0) throw std::invalid_argument("bin width must lie in (0, 1]");
  const std::vector<Cell> cells = experiment_cells(kind);
  const auto nbins = static_cast<std::size_t>(std::ceil(1.0 / epsilon_bins));

  MIReport rep;
  rep.bin_width = epsilon_bins;
  rep.runs = records.size();
  for (const Cell& c : cells) rep.cells.push_back({c, 0, std::vector<std::uint64_t>(nbins, 0)});
  rep.support.assign(cells.size(), std::vector<std::uint64_t>(cells.size(), 0));

  std::uint64_t flips = 0, flips_undefined = 0, evaluated = 0, all_defined = 0;
  for (const auto& r : records) {
    const std::size_t row = cell_index(cells, realised_cell(kind, r));
    auto& hist = rep.cells[row];
    const auto bin = std::min(static_cast<std::size_t>(r.lambda.coordinate() / epsilon_bins), nbins - 1);
    ++hist.count;
    ++hist.bins[bin];

    if (r.definedness[0] == Definedness::NotEvaluated) continue;
    ++evaluated;
    if (counterfactual_product(r) == 1) ++all_defined;
    for (std::size_t slot : single_flip_slots(kind)) {
      ++flips;
      if (r.definedness[slot] == Definedness::Undefined) ++flips_undefined;
    }
    const auto cf = counterfactual_cells(kind, r.x, r.y);
    for (std::size_t slot = 0; slot < 4; ++slot) {
      if (cf[slot] && r.definedness[slot] == Definedness::Defined) ++rep.support[row][cell_index(cells, *cf[slot])];
    }
  }
  if (evaluated > 0) {
    rep.single_flip_undefined_rate = static_cast<double>(flips_undefined) / static_cast<double>(flips);
    rep.all_defined_fraction = static_cast<double>(all_defined) / static_cast<double>(evaluated);
    rep.product_zero_rate = 1.0 - rep.all_defined_fraction;
  }

  // Chi-square independence test on the cells x bins table, empty rows and
  // columns dropped.
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < rep.cells.size(); ++i) {
    if (rep.cells[i].count > 0) rows.push_back(i);
  }
  if (rows.size() < 2) throw DegenerateReport("fewer than two populated cells");
  std::vector<std::uint64_t> col_total(nbins, 0);
  for (std::size_t i : rows) {
    for (std::size_t b = 0; b < nbins; ++b) col_total[b] += rep.cells[i].bins[b];
  }
  const double n = static_cast<double>(records.size());
  std::uint64_t cols = 0;
  for (std::size_t b = 0; b < nbins; ++b) {
    if (col_total[b] == 0) continue;
    ++cols;
    for (std::size_t i : rows) {
      const double expected = static_cast<double>(rep.cells[i].count) * static_cast<double>(col_total[b]) / n;
      const double d = static_cast<double>(rep.cells[i].bins[b]) - expected;
      rep.chi2 += d * d / expected;
    }
  }
  rep.dof = (rows.size() - 1) * (cols > 0 ? cols - 1 : 0);
  rep.p_value = rep.dof == 0 ? 1.0
                             : boost::math::cdf(boost::math::complement(
                                   boost::math::chi_squared(static_cast<double>(rep.dof)), rep.chi2));
  return rep;
}

AuditReport causality_audit(const std::vector<RunRecord>& records, const ExperimentSetup& setup) {
  AuditReport rep;
  rep.runs = records.size();
  const auto& p = setup.p;

  for (const auto& r : records) {
    const auto flags =
        r.definedness[0] == Definedness::NotEvaluated ? counterfactual_table(r.lambda, r, setup) : r.definedness;
    const NominalSetting& sa = setup.alice_setting(r.x);
    const NominalSetting& sb = setup.bob_setting(r.y);

    // Bob changes his setting: Alice's outcome must not move.
    {
      const int y2 = setup.kind == ExperimentKind::Chsh ? 1 - r.y : 3 - r.x - r.y;
      if (flags[1] == Definedness::Undefined) {
        ++rep.lc2_events;
      } else if (flags[1] == Definedness::Defined) {
        ++rep.defined_checked;
        const ExactConfig cfg = exact_config(r.lambda, sa, setup.bob_setting(y2), p);
        if (measure_pair(r.lambda, cfg, p).a != r.outcome_a) ++rep.lc1_violations;
      }
    }
    // Alice changes hers (CHSH only): Bob's outcome must not move.
    if (setup.kind == ExperimentKind::Chsh) {
      if (flags[2] == Definedness::Undefined) {
        ++rep.lc2_events;
      } else if (flags[2] == Definedness::Defined) {
        ++rep.defined_checked;
        const ExactConfig cfg = exact_config(r.lambda, setup.alice_setting(1 - r.x), sb, p);
        if (measure_pair(r.lambda, cfg, p).b != r.outcome_b) ++rep.lc1_violations;
      }
    }

    // Perturb one half of lambda with the settings fixed. The new exact
    // configuration must close a triangle with the realised one; if it is
    // forced irrational the perturbed run is undefined, otherwise the far
    // outcome must be unchanged.
    for (Side side : {Side::B, Side::A}) {
      HiddenVariable lp = r.lambda;
      (side == Side::B ? lp.perturb_b : lp.perturb_a) = 1;
      const ExactConfig cfg = exact_config(lp, sa, sb, p);
      rng::Stream angle_stream = lp.stream(side, kPerturbAngle);
      const sphgeom::TriangleSpec tri{r.exact.cos_realized, cfg.cos_realized, draw_vertex_angle(angle_stream)};
      const auto verdict = sphgeom::impossible_triangle(tri);
      if (verdict.kind == sphgeom::Verdict::Kind::ForcedIrrational) {
        ++rep.lc2_events;
        continue;
      }
      ++rep.defined_checked;
      const Outcomes out = measure_pair(lp, cfg, p);
      if (side == Side::B ? out.a != r.outcome_a : out.b != r.outcome_b) ++rep.lc1_violations;
    }
  }
  return rep;
}

}  // namespace raqm::bell
