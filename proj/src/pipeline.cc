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

#include "lutforge/pipeline.h"

#include <stdexcept>
#include <unordered_map>

#include "lutforge/random.h"
#include "lutforge/spectral.h"

namespace lutforge {

std::uint64_t TrialSeed(std::uint64_t seed, int trial) {
  return DeriveSeed(DeriveSeed(seed, kTrialStream),
                    static_cast<std::uint64_t>(trial));
}

double TrialPhase(std::uint64_t trial_seed) {
  RandomStream rng = MakeStream(trial_seed, kPhaseStream);
  return std::uniform_real_distribution<double>(0.0, 2.0 * kPi)(rng);
}

SimulatedRecord SimulateRecord(const ToneModel& model,
                               const UniformQuantizer& quantizer, int samples,
                               std::uint64_t seed, double pre_dither_alpha) {
  if (samples < 1) throw std::invalid_argument("sample count must be >= 1");
  SimulatedRecord record;
  record.window = model.window;
  record.sequence = GenerateSequence(model, quantizer,
                                     samples + model.window - 1, seed,
                                     pre_dither_alpha);
  return record;
}

std::vector<double> RawStream(const SimulatedRecord& record,
                              const UniformQuantizer& quantizer) {
  std::vector<double> out(record.samples());
  for (int i = 0; i < record.samples(); ++i) {
    out[i] = quantizer.midpoint(record.Window(i).back());
  }
  return out;
}

std::vector<LutEstimate> EstimateEntries(
    std::span<const IndexStatistics> stats,
    const std::unordered_set<std::uint64_t>* keep) {
  std::vector<LutEstimate> out;
  out.reserve(keep != nullptr ? keep->size() : stats.size());
  for (const IndexStatistics& s : stats) {
    if (!(s.probability > 0.0)) continue;
    if (keep != nullptr && !keep->contains(s.key)) continue;
    out.push_back({s.key, s.estimate()});
  }
  return out;
}

LutStreams EvaluateLut(const LutTable& lut, const SimulatedRecord& record,
                       std::uint64_t seed) {
  const UniformQuantizer out(lut.bits());
  const StreamId stream = lut.architecture() == Architecture::kInter
                              ? kRuntimeSelectStream
                              : kRuntimeDitherStream;
  RandomStream rng = MakeStream(seed, stream);
  LutStreams streams;
  const int n = record.samples();
  streams.output.resize(n);
  streams.stored.resize(n);
  streams.estimate.resize(n);
  for (int i = 0; i < n; ++i) {
    const auto window = record.Window(i);
    streams.output[i] = out.midpoint(lut.Lookup(window, rng, &streams.stats));
    streams.stored[i] = lut.LookupStored(window);
    streams.estimate[i] = lut.LookupEstimate(window);
  }
  return streams;
}

double EstimateMseDb(const BitMask& mask, const LikelihoodContext& ctx,
                     const SimulatedRecord& record) {
  const std::vector<IndexStatistics> stats =
      EnumerateIndexStatistics(mask, ctx);
  std::unordered_map<std::uint64_t, double> estimate;
  estimate.reserve(stats.size());
  for (const IndexStatistics& s : stats) {
    if (s.probability > 0.0) estimate.emplace(s.key, s.estimate());
  }
  const UniformQuantizer& quantizer = ctx.quantizer();
  std::vector<double> x(record.samples());
  for (int i = 0; i < record.samples(); ++i) {
    const auto window = record.Window(i);
    const auto it =
        estimate.find(PackIndex(ApplyMask(window, mask), quantizer.bits()));
    x[i] = it != estimate.end() ? it->second : quantizer.midpoint(window.back());
  }
  return MseDb(record.Reference(), x);
}

}  // namespace lutforge
