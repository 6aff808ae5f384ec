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

#include "lutforge/likelihood.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/pipeline.h"
#include "lutforge/quadrature.h"
#include "lutforge/quantizer.h"
#include "lutforge/random.h"
#include "lutforge/spectral.h"
#include "lutforge/tone_model.h"

namespace lutforge {
namespace {

LikelihoodContext Context(int bits, int window, double sigma_ratio = 0.16) {
  const UniformQuantizer q(bits);
  ToneModel m = DefaultToneModel(q, window);
  m.noise_sigma = sigma_ratio * q.step();
  return LikelihoodContext(q, m, ThetaRule());
}

// Every masked index vector: digits whose bits lie inside each sample slice.
std::vector<IndexVector> AllIndices(const BitMask& mask) {
  std::vector<IndexVector> out = {{}};
  for (int t = 0; t < mask.window(); ++t) {
    std::vector<IndexVector> next;
    for (const IndexVector& prefix : out) {
      for (int s = 0; s < (1 << mask.bits()); ++s) {
        if ((static_cast<unsigned>(s) & ~mask.sample_bits(t)) != 0) continue;
        IndexVector v = prefix;
        v.push_back(s + 1);
        next.push_back(v);
      }
    }
    out = std::move(next);
  }
  return out;
}

TEST(CellProbabilityTest, Examples) {
  const UniformQuantizer q(3);
  for (double mean : {-1.2, -0.3, 0.0, 0.11, 0.6, 2.0}) {
    double total = 0.0;
    for (int k = 1; k <= 8; ++k) total += CellProbability(q, k, mean, 0.04);
    EXPECT_NEAR(total, 1.0, 1e-12);
  }
  EXPECT_NEAR(CellProbability(q, 5, 0.0, 0.04),
              0.5 * std::erf(0.25 / (0.04 * std::sqrt(2.0))), 1e-15);
  EXPECT_NEAR(CellProbability(q, 5, 0.0, 0.04), 0.49999, 1e-5);
  EXPECT_NEAR(CellProbability(q, 1, -10.0, 0.04), 1.0, 1e-12);
  EXPECT_THROW(CellProbability(q, 1, 0.0, 0.0), std::domain_error);
}

TEST(CellProbabilityTest, DerivativeMatchesFiniteDifference) {
  const UniformQuantizer q(3);
  const double h = 1e-6;
  for (int k = 1; k <= 8; ++k) {
    for (double mean : {-0.7, -0.2, 0.05, 0.4}) {
      const double fd = (CellProbability(q, k, mean + h, 0.04) -
                         CellProbability(q, k, mean - h, 0.04)) /
                        (2 * h);
      EXPECT_NEAR(CellProbabilityDerivative(q, k, mean, 0.04), fd,
                  1e-5 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST(LikelihoodContextTest, Shape) {
  const LikelihoodContext ctx = Context(3, 4);
  double total = 0.0;
  for (int j = 0; j < ctx.nodes(); ++j) {
    EXPECT_GT(ctx.rule().weights[j], 0.0);
    total += ctx.rule().weights[j];
  }
  EXPECT_NEAR(total, kPi, 1e-12);
  EXPECT_NEAR(ctx.prior_second_moment(), 0.875 * 0.875 / 2, 1e-12);
}

TEST(WindowLikelihoodTest, SingleSampleIsCellProbability) {
  const LikelihoodContext ctx = Context(3, 1);
  const BitMask all = BitMask::AllOnes(3, 1);
  for (int k = 1; k <= 8; ++k) {
    for (double x0 : {-0.8, -0.1, 0.3, 0.74}) {
      const std::vector<int> d = {k};
      EXPECT_NEAR(WindowLikelihood(d, all, x0, ctx),
                  CellProbability(ctx.quantizer(), k, x0, 0.04), 1e-15);
    }
  }
}

TEST(WindowLikelihoodTest, SumsToOne) {
  const LikelihoodContext ctx = Context(3, 3);
  for (const char* text : {"111111111", "100110011", "000000101"}) {
    const BitMask mask = BitMask::FromString(text, 3, 3);
    for (double x0 : {-0.87, -0.4, 0.0, 0.52}) {
      double total = 0.0;
      for (const IndexVector& d : AllIndices(mask)) {
        total += WindowLikelihood(d, mask, x0, ctx);
      }
      EXPECT_NEAR(total, 1.0, 1e-9) << text << " at " << x0;
    }
  }
  const std::vector<int> bad = {1, 2};
  EXPECT_THROW(WindowLikelihood(bad, BitMask::AllOnes(3, 3), 0.0, ctx),
               std::invalid_argument);
}

TEST(WindowLikelihoodTest, MatchesMonteCarloFrequency) {
  const LikelihoodContext ctx = Context(2, 2);
  const UniformQuantizer& q = ctx.quantizer();
  const ToneModel& m = ctx.model();
  const BitMask all = BitMask::AllOnes(2, 2);
  const double x0 = 0.31;
  const auto [phi_plus, phi_minus] = PhaseBranches(x0, m.amplitude);
  RandomStream rng(77);
  std::normal_distribution<double> noise(0.0, m.noise_sigma);
  std::bernoulli_distribution branch(0.5);
  const int draws = 1000000;
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < draws; ++i) {
    const double phi = branch(rng) ? phi_plus : phi_minus;
    std::vector<int> y(2);
    for (int t = 0; t < 2; ++t) {
      y[t] = q.Quantize(SampleTone(m, phi, t - 1) + noise(rng), rng);
    }
    ++counts[PackIndex(y, 2)];
  }
  for (const IndexVector& d : AllIndices(all)) {
    const double p = WindowLikelihood(d, all, x0, ctx);
    const double freq = counts[PackIndex(d, 2)] / static_cast<double>(draws);
    const double sigma = std::sqrt(std::max(p * (1 - p), 1e-12) / draws);
    EXPECT_LE(std::abs(freq - p), 3 * sigma + 1e-9) << FormatIndex(d);
  }
}

TEST(WindowLikelihoodTest, SupportFilterExcludesOnlyNegligibleIndices) {
  const LikelihoodContext ctx = Context(3, 2);
  const BitMask all = BitMask::AllOnes(3, 2);
  const double threshold = 1e-6;
  for (double x0 : {-0.6, 0.05, 0.8}) {
    const double theta = std::acos(x0 / ctx.model().amplitude);
    const LaneTable table(ctx.quantizer(), ctx.model(),
                          std::span<const double>(&theta, 1));
    std::set<std::uint64_t> kept;
    EnumerateIndices(table, all, threshold, false, [&](const IndexLeaf& leaf) {
      kept.insert(PackIndex(leaf.digits, 3));
    });
    EXPECT_FALSE(kept.empty());
    for (const IndexVector& d : AllIndices(all)) {
      if (kept.count(PackIndex(d, 3))) continue;
      EXPECT_LE(WindowLikelihood(d, all, x0, ctx), threshold);
    }
  }
}

double DenseMmseSingleSample(int code, double amplitude, double sigma,
                             const UniformQuantizer& q) {
  // Midpoint rule in theta; both phase branches coincide at n = 0.
  const int n = 400000;
  double num = 0.0, den = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = amplitude * std::cos(kPi * (i + 0.5) / n);
    const double lo = code == 1 ? -1e9 : q.threshold(code);
    const double hi = code == q.levels() ? 1e9 : q.threshold(code + 1);
    const double like = 0.5 * (std::erfc((lo - x) / (sigma * std::sqrt(2.0))) -
                               std::erfc((hi - x) / (sigma * std::sqrt(2.0))));
    num += x * like;
    den += like;
  }
  return num / den;
}

TEST(MmseEstimateTest, SingleSampleTopCode) {
  const LikelihoodContext ctx = Context(3, 1);
  const std::vector<int> d = {8};
  const double x = MmseEstimate(d, BitMask::AllOnes(3, 1), ctx);
  EXPECT_GT(x, 0.75);
  EXPECT_LT(x, 0.875);
  const double oracle = DenseMmseSingleSample(8, 0.875, 0.04, ctx.quantizer());
  EXPECT_NEAR(x, oracle, 5e-5 * std::abs(oracle));
  for (int k = 1; k <= 8; ++k) {
    const std::vector<int> dk = {k};
    const double o = DenseMmseSingleSample(k, 0.875, 0.04, ctx.quantizer());
    EXPECT_NEAR(MmseEstimate(dk, BitMask::AllOnes(3, 1), ctx), o, 1e-5) << k;
  }
}

TEST(MmseEstimateTest, MirrorSymmetry) {
  const LikelihoodContext ctx = Context(3, 3);
  std::mt19937 rng(3);
  for (const char* text : {"111111111", "011001111", "000101011"}) {
    const BitMask mask = BitMask::FromString(text, 3, 3);
    for (const IndexVector& d : AllIndices(mask)) {
      if (IndexProbability(d, mask, ctx) < 1e-10) continue;
      const double x = MmseEstimate(d, mask, ctx);
      EXPECT_LE(std::abs(x), 0.875);
      EXPECT_NEAR(MmseEstimate(MirrorMasked(d, mask), mask, ctx), -x, 1e-12);
    }
  }
}

TEST(MmseEstimateTest, UnrealizableIndexThrows) {
  UniformQuantizer q(3);
  ToneModel m = DefaultToneModel(q, 2);
  m.noise_sigma = 1e-5;
  const LikelihoodContext ctx(q, m, ThetaRule());
  // A full-scale jump between adjacent samples is far outside the tone.
  const std::vector<int> d = {1, 8};
  EXPECT_THROW(MmseEstimate(d, BitMask::AllOnes(3, 2), ctx), UnrealizableIndex);
}

TEST(MmseEstimateTest, StatisticsAgreeWithDirectEvaluation) {
  const LikelihoodContext ctx = Context(3, 3);
  const BitMask mask = BitMask::FromString("011011111", 3, 3);
  const std::vector<IndexStatistics> stats = EnumerateIndexStatistics(mask, ctx);
  double p = 0.0, m1 = 0.0, m2 = 0.0;
  for (const IndexStatistics& s : stats) {
    p += s.probability;
    m1 += s.first_moment;
    m2 += s.second_moment;
    if (s.probability < 1e-8) continue;
    const IndexVector d = UnpackIndex(s.key, 3, 3);
    EXPECT_NEAR(s.probability, IndexProbability(d, mask, ctx),
                1e-9 * s.probability);
    EXPECT_NEAR(s.estimate(), MmseEstimate(d, mask, ctx), 1e-9);
  }
  EXPECT_NEAR(p, 1.0, 1e-9);
  EXPECT_NEAR(m1, 0.0, 1e-9);
  EXPECT_NEAR(m2, ctx.prior_second_moment(), 1e-9);
}

TEST(MmseEstimateTest, BeatsMidpointReconstruction) {
  const LikelihoodContext ctx = Context(3, 1);
  const SimulatedRecord record =
      SimulateRecord(ctx.model(), ctx.quantizer(), 100000, 12);
  const BitMask all = BitMask::AllOnes(3, 1);
  const double mmse = EstimateMseDb(all, ctx, record);
  const double raw = MseDb(record.Reference(), RawStream(record, ctx.quantizer()));
  EXPECT_LT(mmse, raw);
}

TEST(BayesProperty, ResidualHasZeroMean) {
  const LikelihoodContext ctx = Context(3, 3);
  const BitMask all = BitMask::AllOnes(3, 3);
  std::map<std::uint64_t, double> estimate;
  for (const IndexStatistics& s : EnumerateIndexStatistics(all, ctx)) {
    if (s.probability > 0.0) estimate[s.key] = s.estimate();
  }
  ToneModel m = ctx.model();
  std::vector<double> residual;
  RandomStream phases(8);
  std::uniform_real_distribution<double> uniform(0.0, 2 * kPi);
  // Independent short records with fresh phase so residuals are uncorrelated.
  for (int r = 0; r < 100000; ++r) {
    m.phase = uniform(phases);
    const SimulatedRecord rec = SimulateRecord(m, ctx.quantizer(), 1, 100 + r);
    residual.push_back(estimate.at(PackIndex(rec.Window(0), 3)) -
                       rec.Reference()[0]);
  }
  double mean = 0.0, sq = 0.0;
  for (double v : residual) mean += v;
  mean /= residual.size();
  for (double v : residual) sq += (v - mean) * (v - mean);
  const double stderr_ = std::sqrt(sq / (residual.size() - 1) / residual.size());
  EXPECT_LT(std::abs(mean), 3 * stderr_);
}

TEST(BayesProperty, NestedMasksNeverHurt) {
  const LikelihoodContext ctx = Context(3, 3);
  const SimulatedRecord record =
      SimulateRecord(ctx.model(), ctx.quantizer(), 100000, 31);
  std::mt19937 rng(2);
  std::vector<int> order(9);
  for (int i = 0; i < 9; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  BitMask mask(3, 3);
  double previous = EstimateMseDb(mask, ctx, record);
  for (int p : order) {
    mask.set(p);
    const double current = EstimateMseDb(mask, ctx, record);
    EXPECT_LE(current, previous + 0.05) << mask.ToString();
    previous = current;
  }
}

TEST(FisherInformationTest, DerivativeMatchesFiniteDifference) {
  const LikelihoodContext ctx = Context(3, 3);
  const double h = 1e-6;
  for (const char* text : {"111111111", "000011111"}) {
    const BitMask mask = BitMask::FromString(text, 3, 3);
    for (double x0 : {-0.7, -0.2, 0.1, 0.55}) {
      double info_fd = 0.0;
      for (const IndexVector& d : AllIndices(mask)) {
        const double p = WindowLikelihood(d, mask, x0, ctx);
        const double fd = (WindowLikelihood(d, mask, x0 + h, ctx) -
                           WindowLikelihood(d, mask, x0 - h, ctx)) /
                          (2 * h);
        const double analytic = WindowLikelihoodDerivative(d, mask, x0, ctx);
        if (p > 1e-6) {
          EXPECT_NEAR(analytic, fd, 1e-4 * std::max(std::abs(fd), 1e-2));
        }
        if (p > 1e-15) info_fd += fd * fd / p;
      }
      const double info = FisherInformation(x0, mask, ctx);
      EXPECT_NEAR(info, info_fd, 1e-4 * info_fd) << text << " at " << x0;
    }
  }
}

TEST(FisherInformationTest, SymmetryAndLimits) {
  const LikelihoodContext ctx = Context(3, 3);
  const BitMask mask = BitMask::FromString("010011111", 3, 3);
  for (double x0 : {0.1, 0.33, 0.7}) {
    const double a = FisherInformation(x0, mask, ctx);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(FisherInformation(-x0, mask, ctx), a, 1e-9 * a);
  }
  EXPECT_THROW(FisherInformation(0.875, mask, ctx), std::domain_error);
  const double sharp = FisherInformation(0.3, mask, ctx);
  double previous = sharp;
  for (double ratio : {1.0, 10.0, 100.0}) {
    const LikelihoodContext noisy = Context(3, 3, ratio);
    const double info = FisherInformation(0.3, mask, noisy);
    EXPECT_LT(info, previous);
    previous = info;
  }
  EXPECT_LT(previous, 1e-3 * sharp);
  const std::vector<double> nodes = FisherInformationAtNodes(mask, ctx);
  EXPECT_EQ(static_cast<int>(nodes.size()), ctx.nodes());
  const int j = ctx.nodes() / 3;
  EXPECT_NEAR(nodes[j], FisherInformation(ctx.x0(j), mask, ctx), 1e-9 * nodes[j]);
}

}  // namespace
}  // namespace lutforge
