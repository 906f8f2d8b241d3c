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

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>

#include "thz/cli.hpp"
#include "thz/errors.hpp"

int main(int argc, char** argv) {
  using namespace thz::cli;
  CLI::App app{"Driven-dissipative two-emitter THz entanglement: simulations and studies"};
  std::string command, config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::optional<std::string> out;
  app.add_option("command", command, "spectrum | optimize | map | driveplane | tomography | validate | gap")
      ->required()
      ->check(CLI::IsMember({"spectrum", "optimize", "map", "driveplane", "tomography", "validate", "gap"}));
  app.add_option("--config", config_path, "YAML config (a written manifest also works)");
  app.add_option("--seed", seed, "base RNG seed");
  app.add_option("--threads", threads, "worker cap, 0 = all cores")->check(CLI::NonNegativeNumber);
  app.add_option("--out", out, "output directory");
  app.footer(std::string("Environment: ") + std::string(kEnvPrefix) +
             "<SECTION>__<KEY>=<value> overrides a config key, e.g. THZCFG_SYSTEM__KAPPA=40.");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(thz::ExitCode::Config);
  }

  try {
    EnvList env = environment_overrides();
    RunConfig cfg = config_path.empty() ? load_config("", "<defaults>", env) : load_config_file(config_path, env);
    if (seed) cfg.seed = *seed;
    if (threads) cfg.threads = *threads;
    if (out) cfg.out = *out;
    RunOutput r = run(*parse_command(command), cfg);
    std::cout << r.summary;
    for (const std::string& f : r.files) std::cout << "wrote " << cfg.out << "/" << f << "\n";
    return 0;
  } catch (const thz::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return static_cast<int>(thz::ExitCode::Numeric);
  }
}
