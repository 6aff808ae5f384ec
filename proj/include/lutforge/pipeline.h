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

#ifndef LUTFORGE_PIPELINE_H_
#define LUTFORGE_PIPELINE_H_

#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/hpi.h"
#include "lutforge/likelihood.h"
#include "lutforge/lut.h"
#include "lutforge/quantizer.h"
#include "lutforge/tone_model.h"

namespace lutforge {

// Per-trial seed; trial t of a run with seed s always sees the same streams.
std::uint64_t TrialSeed(std::uint64_t seed, int trial);

// Phase drawn uniformly on [0, 2 pi) from the trial's phase stream.
double TrialPhase(std::uint64_t trial_seed);

// A record of `samples` evaluation points. Sample i of the record sits at
// sequence position i + window - 1, so every point has a full window.
struct SimulatedRecord {
  int window = 0;
  ToneSequence sequence;

  int samples() const {
    return static_cast<int>(sequence.codes.size()) - window + 1;
  }
  // Codes of the window ending at evaluation point i, oldest first.
  std::span<const int> Window(int i) const {
    return std::span<const int>(sequence.codes).subspan(i, window);
  }
  std::span<const double> Reference() const {
    return std::span<const double>(sequence.clean).subspan(window - 1);
  }
};

SimulatedRecord SimulateRecord(const ToneModel& model,
                               const UniformQuantizer& quantizer, int samples,
                               std::uint64_t seed, double pre_dither_alpha = 0.0);

// Midpoints of the newest code of each window: the uncorrected input.
std::vector<double> RawStream(const SimulatedRecord& record,
                              const UniformQuantizer& quantizer);

// MMSE estimates for every enumerated index, or only those in `keep`.
std::vector<LutEstimate> EstimateEntries(
    std::span<const IndexStatistics> stats,
    const std::unordered_set<std::uint64_t>* keep = nullptr);

struct LutStreams {
  std::vector<double> output;    // b-bit lookup output midpoints
  std::vector<double> stored;    // stored value at its own precision
  std::vector<double> estimate;  // unquantized estimate
  LookupStats stats;
};

// Runtime randomness comes from the selection stream (inter) or the runtime
// dither stream (post) of `seed`.
LutStreams EvaluateLut(const LutTable& lut, const SimulatedRecord& record,
                       std::uint64_t seed);

// Mean squared error of the unquantized MMSE estimate over the record, for
// a full index set under `mask`.
double EstimateMseDb(const BitMask& mask, const LikelihoodContext& ctx,
                     const SimulatedRecord& record);

}  // namespace lutforge

#endif  // LUTFORGE_PIPELINE_H_
