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

#include "lutforge/lut.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "lutforge/spectral.h"

namespace lutforge {
namespace {

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<int> ParseCodes(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  return out;
}

}  // namespace

int LutTable::Row(std::uint64_t key) const {
  const auto it = rows_.find(key);
  return it == rows_.end() ? -1 : it->second;
}

void LutTable::Index() {
  rows_.clear();
  rows_.reserve(keys_.size());
  for (size_t r = 0; r < keys_.size(); ++r) {
    rows_.emplace(keys_[r], static_cast<int>(r));
  }
}

int LutTable::Lookup(std::span<const int> codes, RandomStream& rng,
                     LookupStats* stats) const {
  const IndexVector digits = ApplyMask(codes, mask_);
  const int row = Row(PackIndex(digits, spec_.bits));
  if (stats != nullptr) ++stats->lookups;
  if (row < 0) {
    if (stats != nullptr) ++stats->fallbacks;
    return codes.back();
  }
  switch (spec_.architecture) {
    case Architecture::kIntra:
      return value(0, row);
    case Architecture::kInter: {
      const int table =
          std::uniform_int_distribution<int>(0, spec_.tables - 1)(rng);
      return value(table, row);
    }
    case Architecture::kPost: {
      const UniformQuantizer out(spec_.bits);
      const double stored = UniformQuantizer(spec_.rho).midpoint(value(0, row));
      bool empty = false;
      const double v =
          SampleDiscreteDither(spec_.alpha, out.step(), spec_.rho, rng, &empty);
      if (empty && stats != nullptr) ++stats->empty_dither;
      return out.Quantize(stored + v, rng);
    }
  }
  return codes.back();
}

double LutTable::LookupEstimate(std::span<const int> codes) const {
  const IndexVector digits = ApplyMask(codes, mask_);
  const int row = Row(PackIndex(digits, spec_.bits));
  if (row < 0) return UniformQuantizer(spec_.bits).midpoint(codes.back());
  if (!estimates_.empty()) return estimates_[row];
  return StoredMidpoint(row);
}

double LutTable::LookupStored(std::span<const int> codes) const {
  const IndexVector digits = ApplyMask(codes, mask_);
  const int row = Row(PackIndex(digits, spec_.bits));
  if (row < 0) return UniformQuantizer(spec_.bits).midpoint(codes.back());
  return StoredMidpoint(row);
}

double LutTable::StoredMidpoint(int row) const {
  const int precision =
      spec_.architecture == Architecture::kPost ? spec_.rho : spec_.bits;
  return UniformQuantizer(precision).midpoint(value(0, row));
}

std::int64_t LutTable::MemoryBits() const {
  const int precision =
      spec_.architecture == Architecture::kPost ? spec_.rho : spec_.bits;
  return lutforge::MemoryBits(precision, entries(), spec_.architecture,
                              spec_.table_count());
}

LutTable BuildLut(std::span<const LutEstimate> estimates,
                  const DitherSpec& spec, const BitMask& mask, double epsilon,
                  std::uint64_t seed) {
  ValidateDitherSpec(spec);
  if (mask.bits() != spec.bits) {
    throw std::invalid_argument("mask bit width differs from output bits");
  }
  LutTable lut;
  lut.spec_ = spec;
  if (spec.architecture == Architecture::kIntra) lut.spec_.tables = 1;
  lut.mask_ = mask;
  lut.epsilon_ = epsilon;
  lut.seed_ = seed;

  std::vector<LutEstimate> sorted(estimates.begin(), estimates.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const LutEstimate& a, const LutEstimate& b) {
              return a.key < b.key;
            });
  for (size_t r = 1; r < sorted.size(); ++r) {
    if (sorted[r].key == sorted[r - 1].key) {
      throw std::invalid_argument("duplicate LUT key");
    }
  }
  const size_t rows = sorted.size();
  lut.keys_.resize(rows);
  lut.estimates_.resize(rows);
  for (size_t r = 0; r < rows; ++r) {
    lut.keys_[r] = sorted[r].key;
    lut.estimates_[r] = sorted[r].value;
  }

  const int tables = lut.spec_.table_count();
  lut.values_.resize(static_cast<size_t>(tables) * rows);
  const std::uint64_t design_seed = DeriveSeed(seed, kDesignDitherStream);
  if (spec.architecture == Architecture::kPost) {
    RandomStream rng = MakeStream(design_seed, 0);
    for (size_t r = 0; r < rows; ++r) {
      lut.values_[r] = Requantize(sorted[r].value, spec.rho, rng);
    }
  } else {
    const UniformQuantizer out(spec.bits);
    for (int i = 0; i < tables; ++i) {
      RandomStream rng = MakeStream(design_seed, static_cast<std::uint64_t>(i));
      for (size_t r = 0; r < rows; ++r) {
        const double v = SampleDither(spec.alpha, out.step(), rng);
        lut.values_[static_cast<size_t>(i) * rows + r] =
            out.Quantize(sorted[r].value + v, rng);
      }
      // Without dither every realization is the same table; copying keeps
      // threshold ties from splitting them.
      if (spec.alpha == 0.0 && i == 0) {
        for (int j = 1; j < tables; ++j) {
          std::copy_n(lut.values_.begin(), rows,
                      lut.values_.begin() + static_cast<size_t>(j) * rows);
        }
        break;
      }
    }
  }
  lut.Index();
  return lut;
}

void WriteLut(std::ostream& out, const LutTable& lut) {
  const DitherSpec& s = lut.spec();
  out << "b=" << s.bits << '\n'
      << "rho=" << s.rho << '\n'
      << "N=" << lut.window() << '\n'
      << "arch=" << ArchitectureName(s.architecture) << '\n'
      << "xi=" << s.table_count() << '\n'
      << "alpha=" << FormatDouble(s.alpha) << '\n'
      << "mask=" << lut.mask().ToString() << '\n'
      << "epsilon=" << FormatDouble(lut.epsilon()) << '\n'
      << "seed=" << lut.seed() << '\n';
  const auto keys = lut.keys();
  for (int i = 0; i < lut.tables(); ++i) {
    for (size_t r = 0; r < keys.size(); ++r) {
      out << "INDEX "
          << FormatIndex(UnpackIndex(keys[r], s.bits, lut.window()))
          << " TABLE " << i + 1 << " VALUE "
          << lut.value(i, static_cast<int>(r)) << '\n';
    }
  }
}

LutTable ReadLut(std::istream& in) {
  std::map<std::string, std::string> header;
  std::string line;
  const char* const kKeys[] = {"b",    "rho",  "N",       "arch", "xi",
                               "alpha", "mask", "epsilon", "seed"};
  for (const char* key : kKeys) {
    if (!std::getline(in, line)) {
      throw std::invalid_argument("LUT file truncated in header");
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || line.substr(0, eq) != key) {
      throw std::invalid_argument("LUT header expected '" + std::string(key) +
                                  "=', got '" + line + "'");
    }
    header[key] = line.substr(eq + 1);
  }
  LutTable lut;
  lut.spec_.bits = std::stoi(header["b"]);
  lut.spec_.rho = std::stoi(header["rho"]);
  lut.spec_.architecture = ParseArchitecture(header["arch"]);
  lut.spec_.tables = std::stoi(header["xi"]);
  lut.spec_.alpha = std::stod(header["alpha"]);
  ValidateDitherSpec(lut.spec_);
  const int window = std::stoi(header["N"]);
  lut.mask_ = BitMask::FromString(header["mask"], lut.spec_.bits, window);
  lut.epsilon_ = std::stod(header["epsilon"]);
  lut.seed_ = std::stoull(header["seed"]);

  const int tables = lut.spec_.table_count();
  const int precision = lut.spec_.architecture == Architecture::kPost
                            ? lut.spec_.rho
                            : lut.spec_.bits;
  std::vector<std::map<std::uint64_t, int>> content(tables);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tag_index, codes, tag_table, tag_value;
    int table = 0;
    long long value = 0;
    if (!(ls >> tag_index >> codes >> tag_table >> table >> tag_value >>
          value) ||
        tag_index != "INDEX" || tag_table != "TABLE" || tag_value != "VALUE") {
      throw std::invalid_argument("malformed LUT entry '" + line + "'");
    }
    const std::vector<int> digits = ParseCodes(codes);
    if (static_cast<int>(digits.size()) != window) {
      throw std::invalid_argument("LUT entry has wrong window length");
    }
    if (ApplyMask(digits, lut.mask_) != digits) {
      throw std::invalid_argument("LUT entry index is not masked");
    }
    if (table < 1 || table > tables || value < 1 ||
        value > (1LL << precision)) {
      throw std::invalid_argument("LUT entry out of range '" + line + "'");
    }
    if (!content[table - 1]
             .emplace(PackIndex(digits, lut.spec_.bits),
                      static_cast<int>(value))
             .second) {
      throw std::invalid_argument("duplicate LUT entry '" + line + "'");
    }
  }
  for (const auto& [key, v] : content[0]) lut.keys_.push_back(key);
  lut.values_.reserve(static_cast<size_t>(tables) * lut.keys_.size());
  for (int i = 0; i < tables; ++i) {
    if (content[i].size() != lut.keys_.size()) {
      throw std::invalid_argument("LUT tables have different index sets");
    }
    size_t r = 0;
    for (const auto& [key, v] : content[i]) {
      if (key != lut.keys_[r++]) {
        throw std::invalid_argument("LUT tables have different index sets");
      }
      lut.values_.push_back(v);
    }
  }
  lut.Index();
  return lut;
}

void WriteHex(std::ostream& out, const LutTable& lut) {
  const int precision =
      lut.architecture() == Architecture::kPost ? lut.rho() : lut.bits();
  const int width = (precision + 3) / 4;
  char buf[24];
  for (int i = 0; i < lut.tables(); ++i) {
    for (std::int64_t r = 0; r < lut.entries(); ++r) {
      std::snprintf(buf, sizeof buf, "%0*x", width,
                    static_cast<unsigned>(lut.value(i, static_cast<int>(r)) - 1));
      out << buf << '\n';
    }
  }
}

}  // namespace lutforge
