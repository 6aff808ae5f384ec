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

#include "lutforge/mask_search.h"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lutforge/parallel.h"

namespace lutforge {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ExpectedSquaredError(const BitMask& mask,
                            const LikelihoodContext& ctx) {
  double total = 0.0;
  for (const IndexStatistics& s : EnumerateIndexStatistics(mask, ctx)) {
    if (s.probability > 0.0) {
      total += s.second_moment - s.first_moment * s.first_moment /
                                      s.probability;
    }
  }
  return total;
}

}  // namespace

std::string HeuristicName(Heuristic h) {
  switch (h) {
    case Heuristic::kH0: return "H0";
    case Heuristic::kH1: return "H1";
    case Heuristic::kH2: return "H2";
    case Heuristic::kH3: return "H3";
  }
  return "?";
}

Heuristic ParseHeuristic(const std::string& name) {
  if (name == "H0" || name == "h0") return Heuristic::kH0;
  if (name == "H1" || name == "h1") return Heuristic::kH1;
  if (name == "H2" || name == "h2") return Heuristic::kH2;
  if (name == "H3" || name == "h3") return Heuristic::kH3;
  throw std::invalid_argument("unknown heuristic '" + name + "'");
}

HeuristicScore EvaluateHeuristic(Heuristic h, const BitMask& mask,
                                 const LikelihoodContext& ctx) {
  HeuristicScore score;
  switch (h) {
    case Heuristic::kH0:
      break;
    case Heuristic::kH1: {
      const std::vector<double> info = FisherInformationAtNodes(mask, ctx);
      for (int j = 0; j < ctx.nodes(); ++j) {
        score.value -= ctx.prior_weight(j) * info[j];
      }
      break;
    }
    case Heuristic::kH2: {
      const std::vector<double> info = FisherInformationAtNodes(mask, ctx);
      for (int j = 0; j < ctx.nodes(); ++j) {
        // A bound more than 1e12 prior variances wide is cancellation noise.
        const double inverse = 1.0 / info[j];
        if (!(info[j] * ctx.prior_second_moment() > 1e-12) ||
            !std::isfinite(inverse)) {
          score.value = kInf;
          score.unstable = true;
          break;
        }
        score.value += ctx.prior_weight(j) * inverse;
      }
      break;
    }
    case Heuristic::kH3:
      score.value = ExpectedSquaredError(mask, ctx);
      break;
  }
  return score;
}

MaskScorer::MaskScorer(const LikelihoodContext& ctx, Heuristic heuristic,
                       int threads)
    : ctx_(ctx), heuristic_(heuristic), threads_(threads) {}

double MaskScorer::Score(const BitMask& mask) {
  return ScoreAll({mask})[0];
}

std::vector<double> MaskScorer::ScoreAll(const std::vector<BitMask>& masks) {
  std::vector<BitMask> missing;
  for (const BitMask& m : masks) {
    if (!cache_.contains(m.raw())) missing.push_back(m);
  }
  std::vector<HeuristicScore> fresh(missing.size());
  ParallelFor(static_cast<int>(missing.size()), threads_, [&](int i) {
    fresh[i] = EvaluateHeuristic(heuristic_, missing[i], ctx_);
  });
  for (size_t i = 0; i < missing.size(); ++i) {
    cache_[missing[i].raw()] = fresh[i].value;
    unstable_ = unstable_ || fresh[i].unstable;
    ++cache_misses_;
  }
  std::vector<double> out;
  out.reserve(masks.size());
  for (const BitMask& m : masks) out.push_back(cache_.at(m.raw()));
  evaluations_ += static_cast<std::int64_t>(masks.size());
  return out;
}

std::int64_t GreedyEvaluationCount(int beta, int mask_length) {
  // sum_{i=0}^{beta-1} (bN - i), kept in integers: beta (2bN + 1 - beta) / 2.
  return static_cast<std::int64_t>(beta) * (2 * mask_length + 1 - beta) / 2;
}

GreedyResult GreedyMask(int beta, MaskScorer& scorer) {
  const LikelihoodContext& ctx = scorer.context();
  const int bits = ctx.quantizer().bits();
  const int window = ctx.window();
  const int length = bits * window;
  if (beta < 0 || beta > length) {
    throw std::invalid_argument("beta outside 0..bits*window");
  }
  const std::int64_t start = scorer.evaluations();
  GreedyResult result;
  BitMask current(bits, window);
  result.trajectory.push_back(current);
  // The all-zeros score is bookkeeping; it is not part of the search count.
  result.scores.push_back(EvaluateHeuristic(scorer.heuristic(), current, ctx).value);
  for (int t = 1; t <= beta; ++t) {
    std::vector<BitMask> candidates;
    std::vector<int> positions;
    for (int j = 0; j < length; ++j) {
      if (current.test(j)) continue;
      BitMask q = current;
      q.set(j);
      candidates.push_back(q);
      positions.push_back(j);
    }
    const std::vector<double> scores = scorer.ScoreAll(candidates);
    double best = std::numeric_limits<double>::infinity();
    int chosen = -1;
    for (size_t c = 0; c < candidates.size(); ++c) {
      if (scores[c] <= best || chosen < 0) {
        best = scores[c];
        chosen = static_cast<int>(c);
      }
    }
    current.set(positions[chosen]);
    result.trajectory.push_back(current);
    result.scores.push_back(best);
  }
  result.evaluations = scorer.evaluations() - start;
  return result;
}

BruteForceResult BruteForceMask(int beta, MaskScorer& scorer, int cap) {
  const LikelihoodContext& ctx = scorer.context();
  const int bits = ctx.quantizer().bits();
  const int window = ctx.window();
  const int length = bits * window;
  if (length > cap) {
    throw std::invalid_argument(
        "brute-force mask search over " + std::to_string(length) +
        " bits exceeds the cap of " + std::to_string(cap) +
        "; use the greedy search instead");
  }
  if (beta < 0 || beta > length) {
    throw std::invalid_argument("beta outside 0..bits*window");
  }
  std::vector<BitMask> candidates;
  for (std::uint64_t raw = 0; raw < (1ULL << length); ++raw) {
    if (std::popcount(raw) != beta) continue;
    BitMask q(bits, window);
    for (int p = 0; p < length; ++p) {
      if ((raw >> p) & 1ULL) q.set(p);
    }
    candidates.push_back(q);
  }
  const std::int64_t start = scorer.evaluations();
  const std::vector<double> scores = scorer.ScoreAll(candidates);
  BruteForceResult result;
  size_t best = 0;
  for (size_t c = 1; c < candidates.size(); ++c) {
    if (scores[c] < scores[best] ||
        (scores[c] == scores[best] &&
         candidates[c].ToString() < candidates[best].ToString())) {
      best = c;
    }
  }
  result.mask = candidates[best];
  result.score = scores[best];
  result.evaluations = scorer.evaluations() - start;
  return result;
}

}  // namespace lutforge
