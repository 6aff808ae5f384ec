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

#include <bit>
#include <stdexcept>

namespace lutforge {

BitMask::BitMask(int bits, int window) : bits_(bits), window_(window) {
  if (bits < 1 || window < 1 || bits * window > 64) {
    throw std::invalid_argument("bit mask needs 1 <= bits*window <= 64");
  }
}

BitMask BitMask::AllOnes(int bits, int window) {
  BitMask mask(bits, window);
  const int n = mask.length();
  mask.raw_ = n == 64 ? ~0ULL : ((1ULL << n) - 1);
  return mask;
}

BitMask BitMask::FromString(const std::string& text, int bits, int window) {
  BitMask mask(bits, window);
  if (static_cast<int>(text.size()) != mask.length()) {
    throw std::invalid_argument("mask string '" + text + "' must have length " +
                                std::to_string(mask.length()));
  }
  for (int p = 0; p < mask.length(); ++p) {
    if (text[p] == '1') {
      mask.set(p);
    } else if (text[p] != '0') {
      throw std::invalid_argument("mask string may only contain 0 and 1");
    }
  }
  return mask;
}

int BitMask::popcount() const { return std::popcount(raw_); }

bool BitMask::test(int position) const {
  if (position < 0 || position >= length()) {
    throw std::out_of_range("mask position out of range");
  }
  return (raw_ >> position) & 1ULL;
}

void BitMask::set(int position, bool value) {
  if (position < 0 || position >= length()) {
    throw std::out_of_range("mask position out of range");
  }
  if (value) {
    raw_ |= 1ULL << position;
  } else {
    raw_ &= ~(1ULL << position);
  }
}

unsigned BitMask::sample_bits(int sample) const {
  unsigned out = 0;
  for (int i = 0; i < bits_; ++i) {
    out = (out << 1) | (test(sample, i) ? 1U : 0U);
  }
  return out;
}

bool BitMask::IsSubsetOf(const BitMask& other) const {
  return (raw_ & ~other.raw_) == 0;
}

std::string BitMask::ToString() const {
  std::string out(length(), '0');
  for (int p = 0; p < length(); ++p) {
    if (test(p)) out[p] = '1';
  }
  return out;
}

std::vector<int> DyadicExpand(int code, int bits) {
  if (bits < 1 || code < 1 || code > (1 << bits)) {
    throw std::out_of_range("code " + std::to_string(code) +
                            " outside 1..2^" + std::to_string(bits));
  }
  std::vector<int> gamma(bits);
  const int value = code - 1;
  for (int i = 0; i < bits; ++i) gamma[i] = (value >> (bits - 1 - i)) & 1;
  return gamma;
}

IndexVector ApplyMask(std::span<const int> codes, const BitMask& mask) {
  if (static_cast<int>(codes.size()) != mask.window()) {
    throw std::invalid_argument("index vector length does not match mask");
  }
  IndexVector out(codes.size());
  for (int t = 0; t < mask.window(); ++t) {
    const int bits = mask.bits();
    if (codes[t] < 1 || codes[t] > (1 << bits)) {
      throw std::out_of_range("code outside quantizer range");
    }
    out[t] = 1 + static_cast<int>((codes[t] - 1) & mask.sample_bits(t));
  }
  return out;
}

BitMask NaiveMask(int beta, int bits, int window) {
  BitMask mask(bits, window);
  if (beta < 0 || beta > mask.length()) {
    throw std::invalid_argument("beta outside 0..bits*window");
  }
  for (int p = mask.length() - beta; p < mask.length(); ++p) mask.set(p);
  return mask;
}

IndexVector Mirror(std::span<const int> codes, int bits) {
  IndexVector out(codes.size());
  for (size_t t = 0; t < codes.size(); ++t) {
    out[t] = (1 << bits) + 1 - codes[t];
  }
  return out;
}

IndexVector MirrorMasked(std::span<const int> digits, const BitMask& mask) {
  IndexVector out(digits.size());
  for (int t = 0; t < mask.window(); ++t) {
    out[t] = 1 + static_cast<int>(mask.sample_bits(t) ^ (digits[t] - 1));
  }
  return out;
}

std::uint64_t PackIndex(std::span<const int> codes, int bits) {
  std::uint64_t key = 0;
  for (int code : codes) {
    key = (key << bits) | static_cast<std::uint64_t>(code - 1);
  }
  return key;
}

IndexVector UnpackIndex(std::uint64_t key, int bits, int window) {
  IndexVector out(window);
  const std::uint64_t low = (1ULL << bits) - 1;
  for (int t = window - 1; t >= 0; --t) {
    out[t] = 1 + static_cast<int>(key & low);
    key >>= bits;
  }
  return out;
}

std::string FormatIndex(std::span<const int> codes) {
  std::string out;
  for (size_t t = 0; t < codes.size(); ++t) {
    if (t) out += ',';
    out += std::to_string(codes[t]);
  }
  return out;
}

}  // namespace lutforge
