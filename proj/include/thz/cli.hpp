// Copyright 2026 The thz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "thz/models.hpp"
#include "thz/optimize.hpp"

namespace thz::cli {

enum class Command { Spectrum, Optimize, Map, DrivePlane, Tomography, Validate, Gap };

std::optional<Command> parse_command(std::string_view name);
std::string command_name(Command c);

struct SpectrumConfig {
  std::vector<double> omega_sb_values{0.0, 10.3};  // one regime per value
  std::vector<std::string> channels{"thz", "optical"};
  Axis thz_grid{"thz_grid", 990.0, 1020.0, 3001, false};          // absolute GHz
  Axis optical_grid{"optical_grid", -1050.0, 1050.0, 8401, false};  // GHz from the carrier
};

struct OptimizeConfig {
  std::vector<double> f_thz{1000.0};
  double chi = 35.0;
  double kappa = 20.0;
  double gamma = 0.03979;
  double omega_max = 500.0;
  int n_fock = 6;
  MaximizeOptions opt;
};

struct MapConfig {
  Axis chi{"chi", 15.0, 100.0, 6, false};
  Axis kappa{"kappa", 10.0, 200.0, 6, false};
  double f_thz = 1000.0;
  double gamma = 0.03979;
  double omega_max = 500.0;
  int n_fock = 6;
  bool compute_gap = false;
  MaximizeOptions opt;
};

struct DrivePlaneConfig {
  Axis omega1{"omega1", 479.7, 519.7, 21, false};
  Axis omega2{"omega2", 476.3, 516.3, 21, false};
};

struct TomographyConfig {
  std::string state = "steady";  // steady: GRWA steady state of `system`; bell: |eg> - |ge>
  std::string reference = "prepared";
  std::vector<std::uint64_t> n_shot{100, 1000, 10000, 100000, 1000000};
  std::vector<double> eta_e{0.01, 0.25, 0.5, 0.75, 0.9, 1.0};
  double eta_g = 0.99;
  int n_ave = 50;
  std::string rotation = "ideal";  // ideal, fast, slow
  double singular_offset = 1e-3;
  double smoothing_sigma = 1.5;  // grid cells, report column only
};

struct ValidateConfig {
  int n_fock = 4;
  double tol = 1e-6;
  int samples_per_period = 64;
};

struct GapConfig {
  double omega_r_tilde = 16.0;
  Axis delta{"delta", 0.5, 15.5, 31, false};
  double omega_max = 500.0;
};

struct RunConfig {
  std::string source = "<defaults>";
  std::uint64_t seed = 0;
  int threads = 0;
  std::string out = "out";
  SystemParams system;  // defaults to the reference operating point
  SpectrumConfig spectrum;
  OptimizeConfig optimize;
  MapConfig map;
  DrivePlaneConfig driveplane;
  TomographyConfig tomography;
  ValidateConfig validate;
  GapConfig gap;
  // field path -> "source:line:col" of its value, for error messages
  std::map<std::string, std::string> anchors;
};

using EnvList = std::vector<std::pair<std::string, std::string>>;

// Overrides read from variables named THZCFG_<SECTION>__<KEY> (or THZCFG_<KEY> at top level).
inline constexpr std::string_view kEnvPrefix = "THZCFG_";
EnvList environment_overrides();

// YAML text -> validated config. Unknown keys, type errors and out-of-range values throw
// ConfigError with a "source:line:col:" prefix. A written manifest is accepted as input.
RunConfig load_config(const std::string& text, const std::string& source = "<string>", const EnvList& env = {});
RunConfig load_config_file(const std::string& path, const EnvList& env = {});
RunConfig default_config();
void validate_config(const RunConfig& c);

// Resolved inputs as sorted JSON. Without runtime fields (threads, out) this is what gets hashed.
std::string canonical_json(const RunConfig& c, Command cmd, bool runtime_fields);
// Git blob SHA-1 of the content.
std::string git_blob_hash(const std::string& content);
std::string manifest_hash(const RunConfig& c, Command cmd);

// Floats with 17 significant digits.
std::string format_double(double x);

struct RunOutput {
  std::string hash;
  std::vector<std::string> files;  // relative to the output directory
  std::string summary;
};

// Runs the command and writes data CSV(s), <cmd>_manifest.json and <cmd>_summary.txt into c.out.
RunOutput run(Command cmd, const RunConfig& c);

}  // namespace thz::cli
