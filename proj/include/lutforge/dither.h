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

#ifndef LUTFORGE_DITHER_H_
#define LUTFORGE_DITHER_H_

#include <string>
#include <vector>

#include "lutforge/random.h"

namespace lutforge {

// Where the dither enters the table:
//   intra: one hard-coded realization per entry (inter with one table),
//   inter: `tables` hard-coded realizations, one picked at random per lookup,
//   post:  a rho-bit estimate is stored and fresh dither is added on lookup.
enum class Architecture { kIntra, kInter, kPost };

std::string ArchitectureName(Architecture arch);
Architecture ParseArchitecture(const std::string& name);

struct DitherSpec {
  double alpha = 1.0;  // peak amplitude as a fraction of the step
  Architecture architecture = Architecture::kPost;
  int tables = 1;  // Xi; forced to 1 for intra
  int rho = 8;     // stored precision for post-table
  int bits = 3;    // output precision

  int table_count() const {
    return architecture == Architecture::kInter ? tables : 1;
  }
};

// Throws std::invalid_argument on out-of-range fields.
void ValidateDitherSpec(const DitherSpec& spec);

// Uniform on [-alpha*step/2, alpha*step/2]; exactly 0 when alpha == 0.
double SampleDither(double alpha, double step, RandomStream& rng);

// The rho-bit reconstruction levels (odd multiples of half the rho-bit
// pitch) that lie inside [-alpha*step/2, alpha*step/2]. Symmetric, so the
// pmf has zero mean. May be empty for small alpha.
std::vector<double> DiscreteDitherSupport(double alpha, double step, int rho);

// Uniform over DiscreteDitherSupport. Returns 0 and sets *empty when the
// support is empty.
double SampleDiscreteDither(double alpha, double step, int rho,
                            RandomStream& rng, bool* empty = nullptr);

}  // namespace lutforge

#endif  // LUTFORGE_DITHER_H_
