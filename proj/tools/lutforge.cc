// Copyright 2026 The lutforge Authors.
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

// Command-line driver: lutforge <command> [--config PATH] [--seed U64]
// [--out DIR] [--trials N] [--threads N] [--set key=value ...] [--lut PATH]

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lutforge/commands.h"
#include "lutforge/config.h"

namespace {

constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-tone LUT correction: design, build and evaluate"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::string lut;
  std::uint64_t seed = 0;
  int trials = 0;
  int threads = 0;
  std::vector<std::string> overrides;

  for (const std::string& name : lutforge::CommandNames()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--seed", seed, "master seed");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--trials", trials, "independent trials")
        ->check(CLI::PositiveNumber);
    sub->add_option("--threads", threads, "worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("--set", overrides, "config override key=value");
    sub->add_option("--lut", lut, "LUT file for evaluate / export-hex");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommands().front();

  lutforge::ExperimentConfig config;
  try {
    if (!config_path.empty()) lutforge::LoadConfigFile(config_path, config);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw lutforge::ConfigError("--set expects key=value, got '" + kv +
                                    "'");
      }
      lutforge::SetConfigValue(config, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (sub->count("--seed")) config.seed = seed;
    if (sub->count("--out")) config.out = out;
    if (sub->count("--trials")) config.trials = trials;
    if (sub->count("--threads")) config.threads = threads;
    if (sub->count("--lut")) config.lut = lut;
    lutforge::ValidateConfig(config);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    lutforge::RunCommand(command, config);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  }
  std::cout << command << ": wrote " << config.out << '\n';
  return 0;
}
