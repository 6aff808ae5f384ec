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

#ifndef LUTFORGE_LUT_H_
#define LUTFORGE_LUT_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <unordered_map>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/dither.h"
#include "lutforge/quantizer.h"
#include "lutforge/random.h"

namespace lutforge {

struct LutEstimate {
  std::uint64_t key = 0;  // PackIndex of the masked digits
  double value = 0.0;     // high-precision estimate
};

struct LookupStats {
  std::int64_t lookups = 0;
  std::int64_t fallbacks = 0;
  std::int64_t empty_dither = 0;
};

// Immutable after construction. Keys are masked index vectors; a window
// whose masked index is absent passes its newest code through unchanged.
class LutTable {
 public:
  LutTable() = default;

  int bits() const { return spec_.bits; }
  int rho() const { return spec_.rho; }
  int window() const { return mask_.window(); }
  const BitMask& mask() const { return mask_; }
  const DitherSpec& spec() const { return spec_; }
  Architecture architecture() const { return spec_.architecture; }
  int tables() const { return spec_.table_count(); }
  double epsilon() const { return epsilon_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t entries() const { return static_cast<std::int64_t>(keys_.size()); }

  std::span<const std::uint64_t> keys() const { return keys_; }
  // Stored code (1-based) for a row of a table; rho-bit for post-table.
  int value(int table, int row) const {
    return values_[static_cast<size_t>(table) * keys_.size() + row];
  }
  // Row of a masked key, -1 when absent.
  int Row(std::uint64_t key) const;

  // Output code for the window `codes` (oldest first, newest last).
  int Lookup(std::span<const int> codes, RandomStream& rng,
             LookupStats* stats = nullptr) const;

  // Unquantized estimate behind the entry (the stored value after ReadLut).
  // Misses return the midpoint of the newest code.
  double LookupEstimate(std::span<const int> codes) const;

  // Midpoint of the stored value at its own precision: rho bits for
  // post-table, table 0 for intra/inter. Misses as above.
  double LookupStored(std::span<const int> codes) const;

  std::int64_t MemoryBits() const;

  friend LutTable BuildLut(std::span<const LutEstimate> estimates,
                           const DitherSpec& spec, const BitMask& mask,
                           double epsilon, std::uint64_t seed);
  friend LutTable ReadLut(std::istream& in);

 private:
  void Index();
  double StoredMidpoint(int row) const;

  DitherSpec spec_;
  BitMask mask_;
  double epsilon_ = 1.0;
  std::uint64_t seed_ = 0;
  std::vector<std::uint64_t> keys_;  // ascending
  std::vector<int> values_;          // table-major
  std::vector<double> estimates_;    // empty after ReadLut
  std::unordered_map<std::uint64_t, int> rows_;
};

// Intra/inter: table i, row r holds Q_b(x + v) with v drawn from the design
// stream of table i. Post: each row holds the rho-bit requantization of x.
LutTable BuildLut(std::span<const LutEstimate> estimates,
                  const DitherSpec& spec, const BitMask& mask, double epsilon,
                  std::uint64_t seed);

// Text format: header lines b=, rho=, N=, arch=, xi=, alpha=, mask=,
// epsilon=, seed=, then `INDEX c1,..,cN TABLE i VALUE v` per stored entry
// (table and value 1-based).
void WriteLut(std::ostream& out, const LutTable& lut);
LutTable ReadLut(std::istream& in);

// Memory image: one hex word (stored code - 1) per line, address
// table * L + row.
void WriteHex(std::ostream& out, const LutTable& lut);

}  // namespace lutforge

#endif  // LUTFORGE_LUT_H_
