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

#ifndef LUTFORGE_RANDOM_H_
#define LUTFORGE_RANDOM_H_

#include <cstdint>
#include <random>

namespace lutforge {

// All stochastic stages draw from caller-owned streams of this type.
using RandomStream = std::mt19937_64;

// Child seed for a named sub-stream or chunk index:
// child = splitmix64(parent ^ splitmix64(index)).
std::uint64_t DeriveSeed(std::uint64_t parent, std::uint64_t index);

inline RandomStream MakeStream(std::uint64_t parent, std::uint64_t index) {
  return RandomStream(DeriveSeed(parent, index));
}

// Well-known stream indices so every stage of an experiment is independently
// reproducible from one top-level seed.
enum StreamId : std::uint64_t {
  kPhaseStream = 1,
  kNoiseStream = 2,
  kPreDitherStream = 3,
  kThresholdStream = 4,
  kDesignDitherStream = 5,
  kRuntimeSelectStream = 6,
  kRuntimeDitherStream = 7,
  kMonteCarloStream = 8,
  kTrialStream = 9,
};

}  // namespace lutforge

#endif  // LUTFORGE_RANDOM_H_
