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

#include "lutforge/dither.h"

#include <cmath>
#include <stdexcept>

namespace lutforge {
namespace {

// Positive-side count of rho-bit levels inside the support.
int HalfSupport(double alpha, double step, int rho) {
  const double pitch = std::ldexp(1.0, 1 - rho);
  // (j + 1/2) pitch <= alpha step / 2, j >= 0.
  return static_cast<int>(
      std::floor(alpha * step / (2.0 * pitch) + 0.5 + 1e-12));
}

}  // namespace

std::string ArchitectureName(Architecture arch) {
  switch (arch) {
    case Architecture::kIntra: return "intra";
    case Architecture::kInter: return "inter";
    case Architecture::kPost: return "post";
  }
  return "?";
}

Architecture ParseArchitecture(const std::string& name) {
  if (name == "intra") return Architecture::kIntra;
  if (name == "inter") return Architecture::kInter;
  if (name == "post") return Architecture::kPost;
  throw std::invalid_argument("unknown dither architecture '" + name + "'");
}

void ValidateDitherSpec(const DitherSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw std::invalid_argument("alpha must be in [0, 1]");
  }
  if (spec.bits < 1) throw std::invalid_argument("output bits must be >= 1");
  if (spec.tables < 1) throw std::invalid_argument("table count must be >= 1");
  if (spec.architecture == Architecture::kPost && spec.rho < spec.bits) {
    throw std::invalid_argument("post-table precision rho must be >= b");
  }
}

double SampleDither(double alpha, double step, RandomStream& rng) {
  if (alpha == 0.0) return 0.0;
  const double half = 0.5 * alpha * step;
  return std::uniform_real_distribution<double>(-half, half)(rng);
}

std::vector<double> DiscreteDitherSupport(double alpha, double step, int rho) {
  const double pitch = std::ldexp(1.0, 1 - rho);
  const int half = HalfSupport(alpha, step, rho);
  std::vector<double> out;
  out.reserve(2 * half);
  for (int j = -half; j < half; ++j) out.push_back((j + 0.5) * pitch);
  return out;
}

double SampleDiscreteDither(double alpha, double step, int rho,
                            RandomStream& rng, bool* empty) {
  const int half = HalfSupport(alpha, step, rho);
  if (empty != nullptr) *empty = half == 0;
  if (half == 0) return 0.0;
  const double pitch = std::ldexp(1.0, 1 - rho);
  const int j = std::uniform_int_distribution<int>(-half, half - 1)(rng);
  return (j + 0.5) * pitch;
}

}  // namespace lutforge
