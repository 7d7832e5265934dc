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

#include <cstdlib>
#include <map>
#include <ostream>

#include <CLI11.hpp>

#include "raqm/cli.hpp"

namespace raqm::cli {

namespace {

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"chsh", "CHSH experiment: correlations, S, MI summary and causality audit"},
      {"bell1964", "three-setting Bell inequality experiment"},
      {"mi-report", "measurement-independence report (exact definedness and coarse chi-square)"},
      {"audit", "local-causality audit over a run set"},
      {"triangle", "certify cos XZ of a rational spherical triangle: triangle COS_XY COS_YZ VERTEX"},
      {"chsh-cert", "certify the four-point CHSH configuration"},
      {"qubit", "grid qubit state: bit string, Born frequency, uncertainty product"},
      {"singlet", "singlet ensemble and its exact correlation"},
      {"butterfly", "collision amplification of a gravitational perturbation"},
      {"lorenz", "Lorenz trajectory, Lyapunov exponent and coarse-grained means"},
      {"convergence", "exact-count S over a list of primes"},
  };
  return d;
}

bool is_positional(const std::string& command, const std::string& key) {
  return command == "triangle" && (key == "cos_xy" || key == "cos_yz" || key == "vertex");
}

struct SubcommandState {
  CLI::App* app = nullptr;
  std::string config_path;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
};

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact-arithmetic laboratory for a discretised-Hilbert-space hidden-variable model", "raqm"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  std::map<std::string, SubcommandState> subs;
  for (const auto& name : command_names()) {
    auto& st = subs[name];
    st.app = app.add_subcommand(name, descriptions().at(name));
    st.app->add_option("--config", st.config_path, "key=value config file");
    st.app->add_option("--set", st.sets, "override any key: --set key=value");
    for (const auto& key : command_keys(name)) {
      std::string spec = "--" + key;
      if (key.find('_') != std::string::npos) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        spec += ",--" + dashed;
      }
      if (is_positional(name, key)) spec = key + "," + spec;
      st.app->add_option(spec, st.flags[key]);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  SubcommandState& st = subs.at(command);
  ExperimentConfig cfg;
  try {
    const std::vector<std::string> keys = command_keys(command);
    KeyValues flags;
    for (const auto& s : st.sets) {
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
      std::string key = s.substr(0, eq);
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        throw ConfigError("unknown key '" + key + "' for " + command);
      }
      flags.emplace_back(std::move(key), s.substr(eq + 1));
    }
    for (const auto& key : keys) {
      if (st.app->count("--" + key) > 0 || (is_positional(command, key) && !st.flags[key].empty())) {
        flags.emplace_back(key, st.flags[key]);
      }
    }
    const KeyValues file = st.config_path.empty() ? KeyValues{} : read_config_file(st.config_path);
    std::optional<std::string> env_seed;
    if (const char* s = std::getenv("RAQM_SEED"); s != nullptr && std::find(keys.begin(), keys.end(), "seed") != keys.end()) {
      env_seed = s;
    }
    cfg = resolve_config(command, file, env_seed, flags);
  } catch (const ConfigError& e) {
    err << "raqm " << command << ": config error: " << e.what() << "\n";
    return kExitConfig;
  }

  out << "# config:";
  for (const auto& [k, v] : cfg.values) out << " " << k << "=" << v;
  out << "\n";

  try {
    return run_command(cfg, out);
  } catch (const ConfigError& e) {
    err << "raqm " << command << ": config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "raqm " << command << ": " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace raqm::cli
