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

#include "lutforge/quantizer.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace lutforge {

UniformQuantizer::UniformQuantizer(int bits) : bits_(bits) {
  if (bits < 1 || bits > 30) {
    throw std::domain_error("quantizer bits must be in 1..30, got " +
                            std::to_string(bits));
  }
  levels_ = 1 << bits;
  half_ = levels_ / 2;
  step_ = std::ldexp(1.0, 1 - bits);
}

double UniformQuantizer::threshold(int k) const {
  if (k < 1 || k > levels_ + 1) {
    throw std::domain_error("threshold index out of range: " +
                            std::to_string(k));
  }
  if (k == 1) return -std::numeric_limits<double>::infinity();
  if (k == levels_ + 1) return std::numeric_limits<double>::infinity();
  return (k - 1 - half_) * step_;
}

double UniformQuantizer::midpoint(int code) const {
  if (code < 1 || code > levels_) {
    throw std::domain_error("code out of range: " + std::to_string(code));
  }
  return (code - 1 - half_ + 0.5) * step_;
}

int UniformQuantizer::Quantize(double x, RandomStream& rng) const {
  if (!std::isfinite(x)) {
    throw std::domain_error("cannot quantize a non-finite value");
  }
  // step_ is a power of two, so the division and floor are exact.
  const double scaled = x / step_;
  const double cell = std::floor(scaled);
  if (cell >= half_) return levels_;
  if (cell < -half_) return 1;
  int k = static_cast<int>(cell) + half_ + 1;
  if (scaled == cell && k >= 2) {
    // x == T_k exactly.
    if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) --k;
  }
  return k;
}

int Requantize(double x, int bits_out, RandomStream& rng) {
  return UniformQuantizer(bits_out).Quantize(x, rng);
}

}  // namespace lutforge
