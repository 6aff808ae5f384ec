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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/likelihood.h"
#include "lutforge/pipeline.h"
#include "lutforge/quadrature.h"
#include "lutforge/tone_model.h"

namespace lutforge {
namespace {

LikelihoodContext Context(int bits, int window) {
  const UniformQuantizer q(bits);
  return LikelihoodContext(q, DefaultToneModel(q, window), ThetaRule());
}

TEST(HeuristicTest, ParseAndName) {
  for (Heuristic h : {Heuristic::kH0, Heuristic::kH1, Heuristic::kH2,
                      Heuristic::kH3}) {
    EXPECT_EQ(ParseHeuristic(HeuristicName(h)), h);
  }
  EXPECT_EQ(ParseHeuristic("h3"), Heuristic::kH3);
  EXPECT_THROW(ParseHeuristic("H4"), std::invalid_argument);
}

TEST(HeuristicTest, H3Bounds) {
  const LikelihoodContext ctx = Context(3, 3);
  const double none = EvaluateHeuristic(Heuristic::kH3, BitMask(3, 3), ctx).value;
  const double all =
      EvaluateHeuristic(Heuristic::kH3, BitMask::AllOnes(3, 3), ctx).value;
  EXPECT_NEAR(none, 0.875 * 0.875 / 2, 1e-6);
  EXPECT_LE(all, none);
  EXPECT_EQ(EvaluateHeuristic(Heuristic::kH0, BitMask::AllOnes(3, 3), ctx).value,
            0.0);
}

TEST(HeuristicTest, H1PrefersMoreBits) {
  const LikelihoodContext ctx = Context(3, 2);
  const double sparse =
      EvaluateHeuristic(Heuristic::kH1, NaiveMask(2, 3, 2), ctx).value;
  const double dense =
      EvaluateHeuristic(Heuristic::kH1, BitMask::AllOnes(3, 2), ctx).value;
  EXPECT_LT(dense, sparse);
  EXPECT_LT(dense, 0.0);
}

TEST(HeuristicTest, H2FlagsZeroInformation) {
  const LikelihoodContext ctx = Context(3, 2);
  const HeuristicScore s = EvaluateHeuristic(Heuristic::kH2, BitMask(3, 2), ctx);
  EXPECT_TRUE(s.unstable);
  EXPECT_TRUE(std::isinf(s.value));
  MaskScorer scorer(ctx, Heuristic::kH2);
  scorer.Score(BitMask(3, 2));
  EXPECT_TRUE(scorer.unstable());
}

TEST(HeuristicTest, H3MatchesSimulatedMse) {
  const LikelihoodContext ctx = Context(3, 4);
  const SimulatedRecord record =
      SimulateRecord(ctx.model(), ctx.quantizer(), 100000, 17);
  for (const char* text : {"111111111111", "000011010111", "000000000111"}) {
    const BitMask mask = BitMask::FromString(text, 3, 4);
    const double h3 = EvaluateHeuristic(Heuristic::kH3, mask, ctx).value;
    EXPECT_NEAR(10 * std::log10(h3), EstimateMseDb(mask, ctx, record), 0.1)
        << text;
  }
}

TEST(BruteForceTest, FullBudgetIsAllOnes) {
  const LikelihoodContext ctx = Context(2, 3);
  MaskScorer scorer(ctx, Heuristic::kH3);
  EXPECT_EQ(BruteForceMask(6, scorer).mask, BitMask::AllOnes(2, 3));
  EXPECT_EQ(BruteForceMask(0, scorer).mask, BitMask(2, 3));
}

TEST(BruteForceTest, MatchesEnumerationAtOneBit) {
  const LikelihoodContext ctx = Context(1, 2);
  for (Heuristic h : {Heuristic::kH1, Heuristic::kH3}) {
    for (int beta = 0; beta <= 2; ++beta) {
      MaskScorer scorer(ctx, h);
      const BruteForceResult r = BruteForceMask(beta, scorer);
      double best = std::numeric_limits<double>::infinity();
      for (const char* text : {"00", "01", "10", "11"}) {
        const BitMask m = BitMask::FromString(text, 1, 2);
        if (m.popcount() != beta) continue;
        best = std::min(best, EvaluateHeuristic(h, m, ctx).value);
      }
      EXPECT_EQ(r.score, best);
      EXPECT_EQ(r.mask.popcount(), beta);
    }
  }
}

TEST(BruteForceTest, RefusesAboveCap) {
  const LikelihoodContext ctx = Context(3, 5);
  MaskScorer scorer(ctx, Heuristic::kH3);
  EXPECT_THROW(BruteForceMask(3, scorer), std::invalid_argument);
}

TEST(GreedyTest, CloseToBruteForceAtTwoBits) {
  const LikelihoodContext ctx = Context(2, 2);
  MaskScorer scorer(ctx, Heuristic::kH3);
  const GreedyResult g = GreedyMask(4, scorer);
  for (int beta = 1; beta <= 4; ++beta) {
    const double brute = BruteForceMask(beta, scorer).score;
    EXPECT_LE(g.scores[beta], 1.05 * brute) << beta;
  }
}

TEST(GreedyTest, TrajectoryIsNested) {
  const LikelihoodContext ctx = Context(3, 3);
  MaskScorer scorer(ctx, Heuristic::kH3);
  const GreedyResult g = GreedyMask(9, scorer);
  ASSERT_EQ(g.trajectory.size(), 10u);
  for (size_t t = 1; t < g.trajectory.size(); ++t) {
    EXPECT_EQ(g.trajectory[t].popcount(), static_cast<int>(t));
    EXPECT_TRUE(g.trajectory[t - 1].IsSubsetOf(g.trajectory[t]));
  }
  EXPECT_EQ(g.trajectory.back(), BitMask::AllOnes(3, 3));
}

TEST(GreedyTest, EvaluationCountFormula) {
  EXPECT_EQ(GreedyEvaluationCount(15, 30), 345);
  for (int bits = 1; bits <= 3; ++bits) {
    for (int window = 1; bits * window <= 12; ++window) {
      const LikelihoodContext ctx = Context(bits, window);
      const int length = bits * window;
      for (int beta = 0; beta <= length; ++beta) {
        MaskScorer scorer(ctx, Heuristic::kH0);
        const GreedyResult g = GreedyMask(beta, scorer);
        // Closed form: -beta^2/2 + (bN + 1/2) beta.
        const double closed = -beta * beta / 2.0 + (length + 0.5) * beta;
        EXPECT_EQ(static_cast<double>(g.evaluations), closed);
        EXPECT_EQ(g.evaluations, GreedyEvaluationCount(beta, length));
      }
    }
  }
}

TEST(GreedyTest, TieBreakFavorsNewestLsb) {
  // H0 scores every candidate equally; the <= rule keeps the last position.
  const LikelihoodContext ctx = Context(3, 2);
  MaskScorer scorer(ctx, Heuristic::kH0);
  EXPECT_EQ(GreedyMask(2, scorer).trajectory.back().ToString(), "000011");
}

TEST(MaskSearchProperty, BruteGreedyNaiveOrdering) {
  for (int bits = 1; bits <= 3; ++bits) {
    for (int window = 2; bits * window <= 12; ++window) {
      const LikelihoodContext ctx = Context(bits, window);
      MaskScorer scorer(ctx, Heuristic::kH3);
      const int length = bits * window;
      const GreedyResult g = GreedyMask(length, scorer);
      for (int beta = 0; beta <= length; ++beta) {
        const double brute = BruteForceMask(beta, scorer).score;
        const double naive = scorer.Score(NaiveMask(beta, bits, window));
        EXPECT_LE(brute, g.scores[beta] + 1e-15)
            << "b=" << bits << " N=" << window << " beta=" << beta;
        EXPECT_LE(g.scores[beta], naive + 1e-15)
            << "b=" << bits << " N=" << window << " beta=" << beta;
      }
    }
  }
}

TEST(GreedyTest, SpreadsLsbsAcrossSamples) {
  const LikelihoodContext ctx = Context(3, 10);
  MaskScorer scorer(ctx, Heuristic::kH3);
  const BitMask mask = GreedyMask(15, scorer).trajectory.back();
  int samples_with_lsb = 0;
  for (int t = 0; t < 10; ++t) samples_with_lsb += mask.test(t, 2) ? 1 : 0;
  EXPECT_GE(samples_with_lsb, 4) << mask.ToString();
  EXPECT_LT(mask.popcount() - samples_with_lsb, 15);
}

}  // namespace
}  // namespace lutforge
