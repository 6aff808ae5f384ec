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

#include "lutforge/hpi.h"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "lutforge/parallel.h"
#include "lutforge/random.h"

namespace lutforge {
namespace {

constexpr std::int64_t kDrawsPerChunk = 4096;

bool ByProbability(const HpiEntry& a, const HpiEntry& b) {
  if (a.probability != b.probability) return a.probability > b.probability;
  return a.key < b.key;
}

std::string FormatDouble(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

std::unordered_set<std::uint64_t> HpiSet::KeySet() const {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(entries.size());
  for (const HpiEntry& e : entries) keys.insert(e.key);
  return keys;
}

HpiSet BuildHpiFromStatistics(double epsilon, const BitMask& mask,
                              std::span<const IndexStatistics> stats) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must be in (0, 1]");
  }
  HpiSet set;
  set.mask = mask;
  set.bits = mask.bits();
  set.window = mask.window();
  set.method = HpiMethod::kExact;
  set.epsilon = epsilon;
  std::vector<HpiEntry> all;
  all.reserve(stats.size());
  for (const IndexStatistics& s : stats) {
    if (!(s.probability > 0.0)) continue;
    all.push_back({UnpackIndex(s.key, set.bits, set.window), s.key,
                   s.probability});
  }
  std::sort(all.begin(), all.end(), ByProbability);
  // Rounding and pruned tails can leave the total a hair below one; full
  // coverage keeps every nonzero entry.
  const double target = epsilon >= 1.0 ? std::numeric_limits<double>::infinity()
                                       : epsilon - 1e-12;
  double mass = 0.0;
  for (HpiEntry& e : all) {
    if (mass >= target && !set.entries.empty()) break;
    mass += e.probability;
    set.entries.push_back(std::move(e));
  }
  set.coverage = mass;
  return set;
}

HpiSet BuildHpiExact(double epsilon, const BitMask& mask,
                     const LikelihoodContext& ctx, int cap_bits) {
  if (mask.popcount() > cap_bits) {
    throw HpiTooLarge("exact HPI construction over 2^" +
                      std::to_string(mask.popcount()) +
                      " indices exceeds the cap of 2^" +
                      std::to_string(cap_bits) +
                      "; use the Monte-Carlo construction instead");
  }
  const std::vector<IndexStatistics> stats =
      EnumerateIndexStatistics(mask, ctx);
  return BuildHpiFromStatistics(epsilon, mask, stats);
}

std::vector<std::uint64_t> DrawMaskedWindows(std::int64_t draws,
                                             const BitMask& mask,
                                             const ToneModel& model,
                                             const UniformQuantizer& quantizer,
                                             std::uint64_t seed,
                                             int threads) {
  if (draws < 1) throw std::invalid_argument("draw count must be >= 1");
  const int window = model.window;
  const std::int64_t chunks = (draws + kDrawsPerChunk - 1) / kDrawsPerChunk;
  const std::uint64_t base = DeriveSeed(seed, kMonteCarloStream);
  std::vector<std::uint64_t> keys(draws);
  ParallelFor(static_cast<int>(chunks), threads, [&](int c) {
    RandomStream rng = MakeStream(base, static_cast<std::uint64_t>(c));
    std::uniform_real_distribution<double> phase_dist(0.0, 2.0 * kPi);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<int> codes(window);
    const std::int64_t lo = c * kDrawsPerChunk;
    const std::int64_t hi = std::min(draws, lo + kDrawsPerChunk);
    for (std::int64_t i = lo; i < hi; ++i) {
      const double phase = phase_dist(rng);
      for (int t = 0; t < window; ++t) {
        const int n = t - (window - 1);
        const double x = SampleTone(model, phase, n) +
                         model.noise_sigma * gauss(rng);
        codes[t] = quantizer.Quantize(x, rng);
      }
      keys[i] = PackIndex(ApplyMask(codes, mask), quantizer.bits());
    }
  });
  return keys;
}

HpiSet BuildHpiMonteCarlo(std::int64_t draws, const BitMask& mask,
                          const LikelihoodContext& ctx, std::uint64_t seed,
                          int threads, int exact_cap_bits) {
  const std::vector<std::uint64_t> keys = DrawMaskedWindows(
      draws, mask, ctx.model(), ctx.quantizer(), seed, threads);
  std::map<std::uint64_t, std::int64_t> counts;
  for (std::uint64_t k : keys) ++counts[k];

  HpiSet set;
  set.mask = mask;
  set.bits = mask.bits();
  set.window = mask.window();
  set.method = HpiMethod::kMonteCarlo;
  set.seed = seed;
  set.draws = draws;
  set.estimated = mask.popcount() > exact_cap_bits;
  std::vector<std::pair<std::uint64_t, std::int64_t>> unique(counts.begin(),
                                                             counts.end());
  set.entries.resize(unique.size());
  ParallelFor(static_cast<int>(unique.size()), threads, [&](int i) {
    HpiEntry& e = set.entries[i];
    e.key = unique[i].first;
    e.digits = UnpackIndex(e.key, set.bits, set.window);
    e.probability = set.estimated
                        ? static_cast<double>(unique[i].second) / draws
                        : IndexProbability(e.digits, mask, ctx);
  });
  std::sort(set.entries.begin(), set.entries.end(), ByProbability);
  if (set.estimated) {
    std::int64_t singletons = 0;
    for (const auto& [key, count] : unique) singletons += (count == 1);
    set.coverage = 1.0 - static_cast<double>(singletons) / draws;
  } else {
    for (const HpiEntry& e : set.entries) set.coverage += e.probability;
  }
  set.epsilon = set.coverage;
  return set;
}

double ExpectedCoverage(double draws, std::span<const double> probabilities) {
  double missed = 0.0;
  for (double p : probabilities) {
    if (p <= 0.0) continue;
    // (1 - p)^draws through log1p to stay accurate for tiny p.
    missed += p * (p >= 1.0 ? (draws == 0.0 ? 1.0 : 0.0)
                            : std::exp(draws * std::log1p(-p)));
  }
  return std::clamp(1.0 - missed, 0.0, 1.0);
}

std::string HpiMethodName(HpiMethod method) {
  return method == HpiMethod::kExact ? "exact" : "monte-carlo";
}

void WriteHpiSet(std::ostream& out, const HpiSet& set) {
  out << "b=" << set.bits << '\n'
      << "N=" << set.window << '\n'
      << "mask=" << set.mask.ToString() << '\n'
      << "epsilon=" << FormatDouble(set.epsilon) << '\n'
      << "method=" << HpiMethodName(set.method) << '\n'
      << "seed=" << set.seed << '\n';
  for (const HpiEntry& e : set.entries) {
    out << FormatIndex(e.digits) << ',' << FormatDouble(e.probability) << '\n';
  }
}

HpiSet ReadHpiSet(std::istream& in) {
  HpiSet set;
  std::string mask_text;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      if (key == "b") {
        set.bits = std::stoi(value);
      } else if (key == "N") {
        set.window = std::stoi(value);
      } else if (key == "mask") {
        mask_text = value;
      } else if (key == "epsilon") {
        set.epsilon = std::stod(value);
      } else if (key == "method") {
        if (value == "exact") {
          set.method = HpiMethod::kExact;
        } else if (value == "monte-carlo") {
          set.method = HpiMethod::kMonteCarlo;
        } else {
          throw std::invalid_argument("unknown HPI method '" + value + "'");
        }
      } else if (key == "seed") {
        set.seed = std::stoull(value);
      } else {
        throw std::invalid_argument("unknown HPI header key '" + key + "'");
      }
      continue;
    }
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != set.window + 1) {
      throw std::invalid_argument("malformed HPI entry line: " + line);
    }
    HpiEntry e;
    for (int t = 0; t < set.window; ++t) e.digits.push_back(std::stoi(fields[t]));
    e.probability = std::stod(fields.back());
    e.key = PackIndex(e.digits, set.bits);
    set.coverage += e.probability;
    set.entries.push_back(std::move(e));
  }
  set.mask = BitMask::FromString(mask_text, set.bits, set.window);
  return set;
}

}  // namespace lutforge
