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

#ifndef LUTFORGE_CONFIG_H_
#define LUTFORGE_CONFIG_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lutforge/dither.h"
#include "lutforge/hpi.h"
#include "lutforge/mask_search.h"
#include "lutforge/quantizer.h"
#include "lutforge/tone_model.h"

namespace lutforge {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class MaskSearch { kNaive, kGreedy, kBruteForce };

struct ExperimentConfig {
  // Model.
  int bits = 3;
  std::optional<double> amplitude;  // unset: 1 - step/2
  double frequency = kPi / 10.0;
  double phase = 0.0;
  bool random_phase = false;
  double sigma_ratio = 0.16;  // noise sigma in units of the step
  int window = 10;

  // Pipeline.
  Heuristic heuristic = Heuristic::kH3;
  MaskSearch search = MaskSearch::kGreedy;
  int beta = 15;
  std::string mask;  // explicit bit-string; overrides the search
  double epsilon = 1.0;
  HpiMethod hpi_method = HpiMethod::kExact;
  std::int64_t draws = 1000;
  int rho = 8;
  double alpha = 1.0;
  Architecture architecture = Architecture::kPost;
  int tables = 1;

  // Run.
  int samples = 100000;
  std::uint64_t seed = 1;
  int trials = 1;
  int threads = 1;
  int panels = 64;
  int order = 8;
  double support_threshold = 1e-15;
  double exclusion = 1e-3;
  int hpi_cap = 24;
  int brute_force_cap = 12;
  std::string out = "out";
  std::string lut;  // input LUT for evaluate / export-hex

  // Sweeps.
  std::vector<double> alpha_grid = {0.0, 0.25, 0.5, 0.75, 0.9, 1.0};
  std::vector<int> beta_grid = {3, 6, 9, 12, 15};
  std::vector<double> epsilon_grid = {0.5, 0.7, 0.9, 1.0};
  std::vector<int> rho_grid = {4, 6, 8, 10};
  double pareto_alpha = 1.0;

  UniformQuantizer quantizer() const { return UniformQuantizer(bits); }
  ToneModel model() const;
};

std::string MaskSearchName(MaskSearch search);

// Applies one key=value assignment. Unknown keys and malformed values throw
// ConfigError naming the key.
void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value);

// Lines of key=value; '#' starts a comment, blank lines are ignored.
void ParseConfig(std::istream& in, ExperimentConfig& config,
                 const std::string& source = "<config>");
void LoadConfigFile(const std::string& path, ExperimentConfig& config);

// Range and consistency checks; throws ConfigError.
void ValidateConfig(const ExperimentConfig& config);

// Every resolved setting as sorted key=value pairs, including derived
// values (step, amplitude, sigma). Parsing these back reproduces the config.
std::vector<std::pair<std::string, std::string>> ResolvedSettings(
    const ExperimentConfig& config);

}  // namespace lutforge

#endif  // LUTFORGE_CONFIG_H_
