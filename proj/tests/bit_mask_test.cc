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

#include "lutforge/bit_mask.h"

#include <gtest/gtest.h>

#include <random>
#include <vector>

namespace lutforge {
namespace {

TEST(BitMaskTest, StringRoundTrip) {
  const BitMask m = BitMask::FromString("100011", 3, 2);
  EXPECT_EQ(m.popcount(), 3);
  EXPECT_TRUE(m.test(0, 0));
  EXPECT_TRUE(m.test(1, 1));
  EXPECT_TRUE(m.test(1, 2));
  EXPECT_FALSE(m.test(1, 0));
  EXPECT_EQ(m.sample_bits(0), 4u);
  EXPECT_EQ(m.sample_bits(1), 3u);
  EXPECT_EQ(m.ToString(), "100011");
  EXPECT_THROW(BitMask::FromString("10001", 3, 2), std::invalid_argument);
  EXPECT_THROW(BitMask::FromString("10001x", 3, 2), std::invalid_argument);
  EXPECT_THROW(BitMask(8, 9), std::invalid_argument);
}

TEST(DyadicExpandTest, Examples) {
  EXPECT_EQ(DyadicExpand(1, 3), (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(DyadicExpand(6, 3), (std::vector<int>{1, 0, 1}));
  EXPECT_EQ(DyadicExpand(8, 3), (std::vector<int>{1, 1, 1}));
  EXPECT_THROW(DyadicExpand(9, 3), std::out_of_range);
  EXPECT_THROW(DyadicExpand(0, 3), std::out_of_range);
}

TEST(ApplyMaskTest, Examples) {
  const std::vector<int> y = {6, 3, 8, 1};
  EXPECT_EQ(ApplyMask(y, BitMask::AllOnes(3, 4)), y);
  EXPECT_EQ(ApplyMask(y, BitMask(3, 4)), (std::vector<int>{1, 1, 1, 1}));
  const std::vector<int> single = {6};
  EXPECT_EQ(ApplyMask(single, BitMask::FromString("100", 3, 1)),
            (std::vector<int>{5}));
  EXPECT_THROW(ApplyMask(single, BitMask(3, 2)), std::invalid_argument);
}

TEST(ApplyMaskTest, MatchesDigitWeightedSum) {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    BitMask mask(3, 3);
    std::vector<int> y(3);
    for (int p = 0; p < mask.length(); ++p) mask.set(p, rng() & 1);
    for (int& c : y) c = 1 + static_cast<int>(rng() % 8);
    const IndexVector d = ApplyMask(y, mask);
    for (int t = 0; t < 3; ++t) {
      const std::vector<int> gamma = DyadicExpand(y[t], 3);
      int expected = 1;
      for (int i = 0; i < 3; ++i) {
        expected += gamma[i] * (mask.test(t, i) ? 1 : 0) * (1 << (2 - i));
      }
      EXPECT_EQ(d[t], expected);
    }
  }
}

TEST(NaiveMaskTest, Examples) {
  EXPECT_EQ(NaiveMask(2, 3, 2).ToString(), "000011");
  EXPECT_EQ(NaiveMask(6, 3, 2), BitMask::AllOnes(3, 2));
  EXPECT_EQ(NaiveMask(0, 3, 2), BitMask(3, 2));
  EXPECT_THROW(NaiveMask(7, 3, 2), std::invalid_argument);
}

TEST(BitMaskProperty, MaskedOutBitsAreIgnored) {
  // Exhaustive over every mask and index vector at b=3, N=2.
  for (int raw = 0; raw < 64; ++raw) {
    BitMask mask(3, 2);
    for (int p = 0; p < 6; ++p) mask.set(p, (raw >> p) & 1);
    for (int a = 1; a <= 8; ++a) {
      for (int b = 1; b <= 8; ++b) {
        const std::vector<int> y = {a, b};
        const IndexVector d = ApplyMask(y, mask);
        for (int p = 0; p < 6; ++p) {
          if (mask.test(p)) continue;
          std::vector<int> flipped = y;
          const int t = p / 3, i = p % 3;
          flipped[t] = 1 + ((flipped[t] - 1) ^ (1 << (2 - i)));
          EXPECT_EQ(ApplyMask(flipped, mask), d);
        }
      }
    }
  }
}

TEST(BitMaskTest, SubsetRelation) {
  const BitMask small = BitMask::FromString("000010", 3, 2);
  const BitMask big = BitMask::FromString("100011", 3, 2);
  EXPECT_TRUE(small.IsSubsetOf(big));
  EXPECT_FALSE(big.IsSubsetOf(small));
  EXPECT_TRUE(BitMask(3, 2).IsSubsetOf(small));
}

TEST(PackIndexTest, OldestSampleIsMostSignificant) {
  const std::vector<int> y = {2, 1, 8};
  EXPECT_EQ(PackIndex(y, 3), (1u << 6) | 7u);
  EXPECT_EQ(UnpackIndex(PackIndex(y, 3), 3, 3), y);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> v(7);
    for (int& c : v) c = 1 + static_cast<int>(rng() % 8);
    EXPECT_EQ(UnpackIndex(PackIndex(v, 3), 3, 7), v);
  }
  EXPECT_EQ(FormatIndex(y), "2,1,8");
}

TEST(MirrorTest, MaskedMirrorCommutesWithApplyMask) {
  std::mt19937 rng(6);
  for (int trial = 0; trial < 200; ++trial) {
    BitMask mask(3, 3);
    std::vector<int> y(3);
    for (int p = 0; p < mask.length(); ++p) mask.set(p, rng() & 1);
    for (int& c : y) c = 1 + static_cast<int>(rng() % 8);
    EXPECT_EQ(ApplyMask(Mirror(y, 3), mask), MirrorMasked(ApplyMask(y, mask), mask));
  }
  EXPECT_EQ(Mirror(std::vector<int>{1, 8, 3}, 3), (std::vector<int>{8, 1, 6}));
}

}  // namespace
}  // namespace lutforge
