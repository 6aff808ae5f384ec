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

#ifndef LUTFORGE_MASK_SEARCH_H_
#define LUTFORGE_MASK_SEARCH_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/likelihood.h"

namespace lutforge {

// Bit-mask design criteria; lower scores are better.
//   H0: naive sequential mask; score is 0 for every mask.
//   H1: -E[I(x0 | q)], the data term of the Bayesian CRB.
//   H2: E[1 / I(x0 | q)], the averaged CRLB.
//   H3: expected squared error of the MMSE estimator.
enum class Heuristic { kH0, kH1, kH2, kH3 };

std::string HeuristicName(Heuristic h);
Heuristic ParseHeuristic(const std::string& name);

struct HeuristicScore {
  double value = 0.0;
  // Set when H2 meets a node with vanishing information; value is +inf.
  bool unstable = false;
};

HeuristicScore EvaluateHeuristic(Heuristic h, const BitMask& mask,
                                 const LikelihoodContext& ctx);

// Caching front-end to EvaluateHeuristic. Every Score() call counts as one
// heuristic evaluation, whether or not it hits the cache.
class MaskScorer {
 public:
  MaskScorer(const LikelihoodContext& ctx, Heuristic heuristic,
             int threads = 1);

  double Score(const BitMask& mask);
  // Scores several masks, computing cache misses on the worker pool.
  std::vector<double> ScoreAll(const std::vector<BitMask>& masks);

  Heuristic heuristic() const { return heuristic_; }
  const LikelihoodContext& context() const { return ctx_; }
  std::int64_t evaluations() const { return evaluations_; }
  std::int64_t cache_misses() const { return cache_misses_; }
  bool unstable() const { return unstable_; }
  void ResetCounters() { evaluations_ = 0; }

 private:
  const LikelihoodContext& ctx_;
  Heuristic heuristic_;
  int threads_;
  std::unordered_map<std::uint64_t, double> cache_;
  std::int64_t evaluations_ = 0;
  std::int64_t cache_misses_ = 0;
  bool unstable_ = false;
};

struct GreedyResult {
  // trajectory[t] is q^(t), t = 0 .. beta; trajectory[0] is all zeros.
  std::vector<BitMask> trajectory;
  // scores[t] = H(q^(t)); scores[0] is the all-zeros score.
  std::vector<double> scores;
  std::int64_t evaluations = 0;
};

// Greedy bit-by-bit selection. Candidates are visited in ascending position
// and accepted with <=, so ties go to bits nearer n = 0 and nearer the LSB.
GreedyResult GreedyMask(int beta, MaskScorer& scorer);

// -beta^2/2 + (bN + 1/2) beta.
std::int64_t GreedyEvaluationCount(int beta, int mask_length);

struct BruteForceResult {
  BitMask mask;
  double score = 0.0;
  std::int64_t evaluations = 0;
};

// Exhaustive argmin over all masks with popcount beta; ties go to the
// lexicographically smallest bit-string. Refuses masks longer than `cap`.
BruteForceResult BruteForceMask(int beta, MaskScorer& scorer, int cap = 12);

}  // namespace lutforge

#endif  // LUTFORGE_MASK_SEARCH_H_
