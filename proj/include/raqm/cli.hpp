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

// Command-line front end: layered key=value configuration, command
// dispatch and deterministic CSV/JSON emission.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "raqm/bellharness.hpp"
#include "raqm/exactmath.hpp"

namespace raqm::cli {

inline constexpr std::string_view kVersion = "0.3.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRuntime = 3;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using KeyValues = std::vector<std::pair<std::string, std::string>>;

/// All subcommand names, in help order.
const std::vector<std::string>& command_names();

/// Keys a command reads, in echo order.
std::vector<std::string> command_keys(const std::string& command);

/// Parses "key = value" lines; '#' starts a comment. Throws ConfigError.
KeyValues parse_config_text(std::string_view text, const std::string& origin = "<config>");
KeyValues read_config_file(const std::filesystem::path& path);

struct ExperimentConfig {
  std::string command;
  /// Every key the command reads, with defaults filled in.
  KeyValues values;

  bool has(std::string_view key) const;
  const std::string& get(std::string_view key) const;
  std::uint64_t get_u64(std::string_view key) const;
  std::int64_t get_i64(std::string_view key) const;
  double get_double(std::string_view key) const;
  bool get_bool(std::string_view key) const;
  std::vector<double> get_list(std::string_view key) const;

  /// epsilon may be given as "K/p"; resolves it for modulus p.
  double epsilon_for(std::uint64_t p) const;

  /// The values that determine the results (execution-only keys such as
  /// thread count and output paths are left out).
  KeyValues provenance() const;
};

/// Layers defaults < file < RAQM_SEED < flags, then validates.
ExperimentConfig resolve_config(const std::string& command, const KeyValues& file_values,
                                const std::optional<std::string>& env_seed, const KeyValues& flag_values);

// --- emission -------------------------------------------------------------

/// 12 significant digits, trailing zeros kept ("-0.495049504950").
std::string format_decimal(double x);
std::string format_rational(const exactmath::Rational& r);

/// Files staged in memory and committed together: each is written to a
/// temporary sibling and renamed into place. On failure nothing staged is
/// left behind.
class ArtifactSet {
 public:
  void add(std::filesystem::path path, std::string content);
  void commit();
  const std::vector<std::pair<std::filesystem::path, std::string>>& staged() const { return files_; }

 private:
  std::vector<std::pair<std::filesystem::path, std::string>> files_;
};

/// Run log: one row per run, header only for an empty set.
std::string run_log_csv(const std::vector<bell::RunRecord>& records);

void write_atomic(const std::filesystem::path& path, std::string_view content);

/// Runs a resolved command, writing human-readable output to `out`.
/// Returns the exit status; module errors propagate as exceptions.
int run_command(const ExperimentConfig& cfg, std::ostream& out);

/// Full entry point: argument parsing, error mapping to exit codes.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace raqm::cli
