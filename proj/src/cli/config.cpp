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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "raqm/cli.hpp"

namespace raqm::cli {

namespace {

enum class Kind { U64, I64, Double, Bool, Text, List };

struct KeySpec {
  std::string_view name;
  Kind kind;
  std::string_view fallback;  // empty: required when the command reads the key
  bool provenance;            // echoed into summaries
};

// clang-format off
const std::vector<KeySpec> kKeys = {
    {"experiment", Kind::Text, "chsh", true},
    {"seed", Kind::U64, "42", true},
    {"p", Kind::U64, "10007", true},
    {"epsilon", Kind::Text, "10/p", true},
    {"runs", Kind::U64, "100000", true},
    {"mode", Kind::Text, "sampled", true},
    {"angles", Kind::Text, "canonical", true},
    {"angle_mode", Kind::Text, "auto", true},
    {"certify", Kind::Bool, "true", true},
    {"bins", Kind::Text, "epsilon", true},
    {"primes", Kind::Text, "101,1009,10007", true},
    {"m1", Kind::I64, "", true},
    {"n1", Kind::I64, "0", true},
    {"m", Kind::I64, "", true},
    {"cos_xy", Kind::Text, "", true},
    {"cos_yz", Kind::Text, "", true},
    {"vertex", Kind::Text, "", true},
    {"c00", Kind::Text, "", true},
    {"c01", Kind::Text, "none", true},
    {"c10", Kind::Text, "none", true},
    {"c11", Kind::Text, "none", true},
    {"cx", Kind::Text, "none", true},
    {"cy", Kind::Text, "none", true},
    {"alpha", Kind::Text, "", true},
    {"beta", Kind::Text, "", true},
    {"gamma", Kind::Text, "", true},
    {"delta", Kind::Text, "", true},
    {"realized", Kind::Text, "X0Y0", true},
    {"l", Kind::Double, "1e-7", true},
    {"R", Kind::Double, "1e-10", true},
    {"tau", Kind::Double, "1e-9", true},
    {"G", Kind::Double, "6.674e-11", true},
    {"m_source", Kind::Double, "1e-5", true},
    {"deltaR", Kind::Double, "1e-2", true},
    {"r", Kind::Double, "1e22", true},
    {"log10_dtheta1", Kind::Text, "auto", true},
    {"log10_target", Kind::Double, "0", true},
    {"sigma", Kind::Double, "10", true},
    {"rho", Kind::Double, "28", true},
    {"lorenz_beta", Kind::Double, "2.6666666666666667", true},
    {"dt", Kind::Double, "1e-3", true},
    {"steps", Kind::U64, "100000", true},
    {"x0", Kind::Double, "1", true},
    {"y0", Kind::Double, "1", true},
    {"z0", Kind::Double, "1", true},
    {"ball", Kind::Double, "0.5", true},
    {"stride", Kind::U64, "1", true},
    {"threads", Kind::U64, "1", false},
    {"out", Kind::Text, "auto", false},
    {"summary", Kind::Text, "auto", false},
};
// clang-format on

const std::vector<std::string> kExperimentKeys = {"seed", "p", "epsilon", "runs", "mode", "angles",
                                                  "angle_mode", "certify", "threads"};

// Command-specific defaults that replace the table's fallback.
std::optional<std::string_view> command_default(const std::string& command, std::string_view key) {
  if (command == "convergence") {
    if (key == "mode") return "exact";
    if (key == "runs") return "1000";
  }
  return std::nullopt;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : kKeys) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
bool parse_int(std::string_view s, T& out) {
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, out);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

void check_type(const KeySpec& k, const std::string& v) {
  bool ok = true;
  switch (k.kind) {
    case Kind::U64: {
      std::uint64_t x;
      ok = parse_int(v, x);
      break;
    }
    case Kind::I64: {
      std::int64_t x;
      ok = parse_int(v, x);
      break;
    }
    case Kind::Double: {
      double x;
      ok = parse_double(v, x);
      break;
    }
    case Kind::Bool:
      ok = v == "true" || v == "false" || v == "1" || v == "0";
      break;
    default:
      break;
  }
  if (!ok) throw ConfigError("invalid value for " + std::string(k.name) + ": '" + v + "'");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) parts.push_back(trim(item));
  return parts;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"chsh",      "bell1964", "mi-report", "audit",
                                                 "triangle",  "chsh-cert", "qubit",    "singlet",
                                                 "butterfly", "lorenz",   "convergence"};
  return names;
}

std::vector<std::string> command_keys(const std::string& command) {
  std::vector<std::string> keys;
  auto add = [&](std::initializer_list<std::string> ks) { keys.insert(keys.end(), ks); };
  if (command == "chsh" || command == "bell1964") {
    keys = kExperimentKeys;
    add({"bins", "out", "summary"});
  } else if (command == "mi-report" || command == "audit") {
    keys = {"experiment"};
    keys.insert(keys.end(), kExperimentKeys.begin(), kExperimentKeys.end());
    if (command == "mi-report") add({"bins"});
    add({"summary"});
  } else if (command == "convergence") {
    add({"primes", "seed", "epsilon", "runs", "mode", "angles", "angle_mode", "threads", "out",
         "summary"});
  } else if (command == "triangle") {
    add({"cos_xy", "cos_yz", "vertex", "summary"});
  } else if (command == "chsh-cert") {
    add({"c00", "c01", "c10", "c11", "cx", "cy", "alpha", "beta", "gamma", "delta", "realized", "summary"});
  } else if (command == "qubit") {
    add({"p", "m1", "n1", "out"});
  } else if (command == "singlet") {
    add({"p", "m", "out"});
  } else if (command == "butterfly") {
    add({"l", "R", "tau", "G", "m_source", "deltaR", "r", "log10_dtheta1", "log10_target", "out"});
  } else if (command == "lorenz") {
    add({"sigma", "rho", "lorenz_beta", "dt", "steps", "x0", "y0", "z0", "ball", "stride", "out", "summary"});
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return keys;
}

KeyValues parse_config_text(std::string_view text, const std::string& origin) {
  KeyValues out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key=value");
    }
    out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
  }
  return out;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

bool ExperimentConfig::has(std::string_view key) const {
  return std::any_of(values.begin(), values.end(), [&](const auto& kv) { return kv.first == key; });
}

const std::string& ExperimentConfig::get(std::string_view key) const {
  for (const auto& [k, v] : values) {
    if (k == key) return v;
  }
  throw ConfigError("key '" + std::string(key) + "' is not used by " + command);
}

std::uint64_t ExperimentConfig::get_u64(std::string_view key) const {
  std::uint64_t v = 0;
  if (!parse_int(get(key), v)) throw ConfigError("invalid integer for " + std::string(key));
  return v;
}

std::int64_t ExperimentConfig::get_i64(std::string_view key) const {
  std::int64_t v = 0;
  if (!parse_int(get(key), v)) throw ConfigError("invalid integer for " + std::string(key));
  return v;
}

double ExperimentConfig::get_double(std::string_view key) const {
  double v = 0;
  if (!parse_double(get(key), v)) throw ConfigError("invalid number for " + std::string(key));
  return v;
}

bool ExperimentConfig::get_bool(std::string_view key) const {
  const auto& v = get(key);
  return v == "true" || v == "1";
}

std::vector<double> ExperimentConfig::get_list(std::string_view key) const {
  std::vector<double> out;
  for (const auto& part : split_list(get(key))) {
    double v = 0;
    if (!parse_double(part, v)) throw ConfigError("invalid list entry for " + std::string(key) + ": '" + part + "'");
    out.push_back(v);
  }
  return out;
}

double ExperimentConfig::epsilon_for(std::uint64_t p) const {
  const std::string& e = get("epsilon");
  double v = 0;
  if (e.size() > 2 && e.ends_with("/p")) {
    if (!parse_double(e.substr(0, e.size() - 2), v)) throw ConfigError("invalid epsilon '" + e + "'");
    v /= static_cast<double>(p);
  } else if (!parse_double(e, v)) {
    throw ConfigError("invalid epsilon '" + e + "'");
  }
  if (!(v > 0.0)) throw ConfigError("epsilon must be positive");
  return v;
}

KeyValues ExperimentConfig::provenance() const {
  KeyValues out;
  for (const auto& kv : values) {
    if (find_key(kv.first)->provenance) out.push_back(kv);
  }
  return out;
}

ExperimentConfig resolve_config(const std::string& command, const KeyValues& file_values,
                                const std::optional<std::string>& env_seed, const KeyValues& flag_values) {
  ExperimentConfig cfg;
  cfg.command = command;
  const std::vector<std::string> keys = command_keys(command);

  // Later layers win.
  std::vector<std::pair<std::string, std::string>> layered;
  auto apply = [&](const KeyValues& kvs, const std::string& origin) {
    for (const auto& [k, v] : kvs) {
      if (find_key(k) == nullptr) throw ConfigError("unknown key '" + k + "' (" + origin + ")");
      layered.emplace_back(k, v);
    }
  };
  apply(file_values, "config file");
  if (env_seed) layered.emplace_back("seed", *env_seed);
  apply(flag_values, "command line");

  for (const auto& key : keys) {
    const KeySpec& spec = *find_key(key);
    std::optional<std::string> value;
    for (const auto& [k, v] : layered) {
      if (k == key) value = v;
    }
    if (!value) {
      const std::string_view fallback = command_default(command, key).value_or(spec.fallback);
      if (fallback.empty()) throw ConfigError("missing required key '" + key + "' for " + command);
      value = std::string(fallback);
    }
    check_type(spec, *value);
    cfg.values.emplace_back(key, *value);
  }

  // Semantic checks.
  if (cfg.has("p")) {
    try {
      exactmath::PrimeModulus(cfg.get_u64("p"));
    } catch (const std::exception&) {
      throw ConfigError("p must be prime (got " + cfg.get("p") + ")");
    }
  }
  if (cfg.has("primes")) {
    for (double v : cfg.get_list("primes")) {
      const auto p = static_cast<std::uint64_t>(v);
      if (static_cast<double>(p) != v || !exactmath::is_prime(exactmath::BigInt(std::to_string(p))) || p < 3) {
        throw ConfigError("primes must be odd primes");
      }
    }
  }
  if (cfg.has("runs") && cfg.get_u64("runs") < 1) throw ConfigError("runs must be >= 1");
  if (cfg.has("threads") && cfg.get_u64("threads") < 1) throw ConfigError("threads must be >= 1");
  if (cfg.has("mode") && cfg.get("mode") != "exact" && cfg.get("mode") != "sampled") {
    throw ConfigError("mode must be exact or sampled");
  }
  if (cfg.has("experiment") && cfg.get("experiment") != "chsh" && cfg.get("experiment") != "bell1964") {
    throw ConfigError("experiment must be chsh or bell1964");
  }
  if (cfg.has("angle_mode")) {
    const auto& m = cfg.get("angle_mode");
    if (m != "auto" && m != "polariser" && m != "spin") throw ConfigError("angle_mode must be auto, polariser or spin");
  }
  if (cfg.has("angles") && cfg.get("angles") != "canonical") (void)cfg.get_list("angles");
  if (cfg.has("epsilon")) (void)cfg.epsilon_for(cfg.has("p") ? cfg.get_u64("p") : 101);
  if (cfg.has("bins") && cfg.get("bins") != "epsilon") {
    double b = 0;
    if (!parse_double(cfg.get("bins"), b) || !(b > 0.0) || b > 1.0) throw ConfigError("bins must lie in (0, 1]");
  }
  if (cfg.has("stride") && cfg.get_u64("stride") < 1) throw ConfigError("stride must be >= 1");
  return cfg;
}

}  // namespace raqm::cli
