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

#ifndef LUTFORGE_BIT_MASK_H_
#define LUTFORGE_BIT_MASK_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lutforge {

// Index vectors hold one 1-based code per window sample; element t is the
// sample at time n = t - (window - 1), so the last element is y_0.
using IndexVector = std::vector<int>;

// Selection over the bits * window index bits. Position p (0-based) is the
// paper-style q_[p + 1]: sample-major from the oldest sample, MSB first
// within each sample.
class BitMask {
 public:
  BitMask() = default;
  BitMask(int bits, int window);

  static BitMask AllOnes(int bits, int window);
  // Parses "0101..." of length bits * window.
  static BitMask FromString(const std::string& text, int bits, int window);

  int bits() const { return bits_; }
  int window() const { return window_; }
  int length() const { return bits_ * window_; }
  int popcount() const;

  bool test(int position) const;
  void set(int position, bool value = true);
  bool test(int sample, int bit) const { return test(sample * bits_ + bit); }

  // b-bit selection for one sample, MSB of the sample in the high bit.
  unsigned sample_bits(int sample) const;

  // Bitwise subset test: every bit set here is also set in `other`.
  bool IsSubsetOf(const BitMask& other) const;

  std::uint64_t raw() const { return raw_; }
  std::string ToString() const;

  friend bool operator==(const BitMask&, const BitMask&) = default;

 private:
  int bits_ = 0;
  int window_ = 0;
  std::uint64_t raw_ = 0;  // bit p <-> position p
};

// Bits gamma_[1..b] of a code, MSB first: code = 1 + sum gamma_i 2^(b - i).
std::vector<int> DyadicExpand(int code, int bits);

// d_n = 1 + sum_i gamma_{n,i} q_{n,i} 2^(b - i).
IndexVector ApplyMask(std::span<const int> codes, const BitMask& mask);

// Keeps the last beta positions of the mask.
BitMask NaiveMask(int beta, int bits, int window);

// Reflects every code k -> 2^b + 1 - k.
IndexVector Mirror(std::span<const int> codes, int bits);

// Mirror in the masked alphabet: complements only the selected bits of each
// digit, so MirrorMasked(ApplyMask(y, q), q) == ApplyMask(Mirror(y), q).
IndexVector MirrorMasked(std::span<const int> digits, const BitMask& mask);

// Packs an index vector into a sortable key (oldest sample most significant).
std::uint64_t PackIndex(std::span<const int> codes, int bits);
IndexVector UnpackIndex(std::uint64_t key, int bits, int window);

std::string FormatIndex(std::span<const int> codes);

}  // namespace lutforge

#endif  // LUTFORGE_BIT_MASK_H_
