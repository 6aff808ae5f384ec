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

#ifndef LUTFORGE_QUANTIZER_H_
#define LUTFORGE_QUANTIZER_H_

#include "lutforge/random.h"

namespace lutforge {

// Uniform mid-riser quantizer with 2^bits cells and step 2^(1 - bits).
//
// Codes are 1-based: code k covers (T_k, T_{k+1}) with T_1 = -inf and
// T_{2^b + 1} = +inf. The finite thresholds T_2 .. T_{2^b} are spaced by one
// step and T_{2^(b-1) + 1} = 0, so there is no dead zone. The two saturation
// cells extend to infinity; their midpoints sit half a step beyond the last
// finite threshold.
class UniformQuantizer {
 public:
  explicit UniformQuantizer(int bits);

  int bits() const { return bits_; }
  int levels() const { return levels_; }
  double step() const { return step_; }

  // T_k for k in 1 .. levels() + 1; the outer two are -inf / +inf.
  double threshold(int k) const;
  // m_k for k in 1 .. levels().
  double midpoint(int code) const;

  // Returns k with T_k < x < T_{k+1}. An exact hit on an interior threshold
  // T_k realizes k or k - 1 with probability 1/2 each (meta-stable comparator).
  int Quantize(double x, RandomStream& rng) const;

  double Reconstruct(int code) const { return midpoint(code); }

 private:
  int bits_;
  int levels_;
  int half_;
  double step_;
};

// Quantizes x at a (possibly different) output depth.
int Requantize(double x, int bits_out, RandomStream& rng);

}  // namespace lutforge

#endif  // LUTFORGE_QUANTIZER_H_
