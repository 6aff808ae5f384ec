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

#ifndef LUTFORGE_COMMANDS_H_
#define LUTFORGE_COMMANDS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/config.h"
#include "lutforge/hpi.h"
#include "lutforge/likelihood.h"
#include "lutforge/lut.h"
#include "lutforge/spectral.h"

namespace lutforge {

// Each Run* command writes its artifacts plus manifest.txt into config.out
// and returns the numbers it wrote. Outputs depend only on the config.

struct Envelope {
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

Envelope Summarize(const std::vector<double>& values);

LikelihoodContext MakeContext(const ExperimentConfig& config);

struct MaskDesign {
  BitMask mask;
  std::vector<BitMask> trajectory;  // greedy only: q(0) .. q(beta)
  std::vector<double> scores;
  std::int64_t evaluations = 0;
  bool unstable = false;
};

// Explicit mask if configured, else the configured search at config.beta.
MaskDesign DesignMask(const ExperimentConfig& config,
                      const LikelihoodContext& ctx);

struct SimulateTrialResult {
  double input_sfdr_dbc = 0.0;       // noisy tone, unquantized
  double quantized_mse_db = 0.0;     // vs the clean tone
  double dithered_mse_db = 0.0;
  double quantized_error_db = 0.0;   // vs the quantizer input
  double dithered_error_db = 0.0;
  double quantized_sfdr_dbc = 0.0;
  double dithered_sfdr_dbc = 0.0;
};

std::vector<SimulateTrialResult> RunSimulate(const ExperimentConfig& config);

MaskDesign RunDesignMask(const ExperimentConfig& config);

struct BuildHpiResult {
  std::vector<HpiSet> sets;      // one per trial
  std::vector<double> exact_mass;  // quadrature mass of each set, if known
  double expected_coverage = -1.0;  // Monte-Carlo prediction, if known
};

BuildHpiResult RunBuildHpi(const ExperimentConfig& config);

LutTable RunBuildLut(const ExperimentConfig& config);

struct EvaluateTrialResult {
  MetricReport raw;
  MetricReport stored;
  MetricReport output;
  LookupStats stats;
};

std::vector<EvaluateTrialResult> RunEvaluate(const ExperimentConfig& config);

struct SweepPoint {
  double alpha = 0.0;
  std::vector<double> sfdr_dbc;         // lookup output, per trial
  std::vector<double> sfdr_gain_dbc;    // vs raw input, per trial
  std::vector<double> mse_db;           // lookup output, per trial
  std::vector<double> stored_sfdr_dbc;  // stored estimate, per trial
  std::vector<double> stored_mse_db;
};

std::vector<SweepPoint> RunSweepAlpha(const ExperimentConfig& config);

struct ParetoResult {
  std::vector<MetricReport> grid;  // MSE of the stored rho-bit estimate,
                                   // SFDR of the dithered b-bit output
  std::vector<size_t> mse_front;
  std::vector<size_t> sfdr_front;
};

ParetoResult RunPareto(const ExperimentConfig& config);

void RunExportHex(const ExperimentConfig& config);

// Dispatch by subcommand name; throws ConfigError for an unknown name.
void RunCommand(const std::string& name, const ExperimentConfig& config);

const std::vector<std::string>& CommandNames();

}  // namespace lutforge

#endif  // LUTFORGE_COMMANDS_H_
