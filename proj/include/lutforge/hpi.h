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

#ifndef LUTFORGE_HPI_H_
#define LUTFORGE_HPI_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/likelihood.h"

namespace lutforge {

// High-probability index sets: the smallest collection of masked indices
// carrying at least epsilon of the indexing probability p(d | q).

enum class HpiMethod { kExact, kMonteCarlo };

struct HpiEntry {
  IndexVector digits;
  std::uint64_t key = 0;
  double probability = 0.0;
};

struct HpiSet {
  BitMask mask;
  int bits = 0;
  int window = 0;
  HpiMethod method = HpiMethod::kExact;
  double epsilon = 1.0;
  std::uint64_t seed = 0;
  std::int64_t draws = 0;
  // Sorted by descending probability, ties by ascending key.
  std::vector<HpiEntry> entries;
  // Sum of entry probabilities, or a Good-Turing estimate when the entry
  // probabilities are empirical.
  double coverage = 0.0;
  // Entry probabilities are empirical frequencies, not quadrature values.
  bool estimated = false;

  std::unordered_set<std::uint64_t> KeySet() const;
};

class HpiTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact construction: enumerate every supported index, sort by probability
// and keep the shortest prefix with mass >= epsilon. Refuses masks with more
// than `cap_bits` selected bits.
HpiSet BuildHpiExact(double epsilon, const BitMask& mask,
                     const LikelihoodContext& ctx, int cap_bits = 24);

// Same, from precomputed statistics (any order).
HpiSet BuildHpiFromStatistics(double epsilon, const BitMask& mask,
                              std::span<const IndexStatistics> stats);

// Monte-Carlo approximation: the union of the masked indices of `draws`
// independent windows with uniform phase and Gaussian noise. Probabilities
// are attached by quadrature from `ctx` when the mask has at most
// `exact_cap_bits` bits, otherwise empirical frequencies are stored.
HpiSet BuildHpiMonteCarlo(std::int64_t draws, const BitMask& mask,
                          const LikelihoodContext& ctx, std::uint64_t seed,
                          int threads = 1, int exact_cap_bits = 24);

// The masked indices of `draws` Monte-Carlo windows, in draw order.
std::vector<std::uint64_t> DrawMaskedWindows(std::int64_t draws,
                                             const BitMask& mask,
                                             const ToneModel& model,
                                             const UniformQuantizer& quantizer,
                                             std::uint64_t seed,
                                             int threads = 1);

// E[mass of the indices seen in `draws` draws] = 1 - sum_j p_j (1 - p_j)^draws.
double ExpectedCoverage(double draws, std::span<const double> probabilities);

std::string HpiMethodName(HpiMethod method);

// Text format: key=value header (b, N, mask, epsilon, method, seed), then one
// "codes...,probability" line per entry.
void WriteHpiSet(std::ostream& out, const HpiSet& set);
HpiSet ReadHpiSet(std::istream& in);

}  // namespace lutforge

#endif  // LUTFORGE_HPI_H_
