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

#ifndef LUTFORGE_SPECTRAL_H_
#define LUTFORGE_SPECTRAL_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lutforge/dither.h"

namespace lutforge {

inline constexpr double kMseFloorDb = -300.0;
inline constexpr double kSfdrCeilingDbc = 300.0;

// 10 log10(mean squared difference); exact matches report kMseFloorDb.
double MseDb(std::span<const double> reference, std::span<const double> test);

// One-sided periodogram |sum_n x_n exp(-j 2 pi f n)|^2 on f = k / length,
// k = 0 .. length/2, rectangular window, no normalization: a unit cosine at
// a bin center peaks at (length / 2)^2.
struct PowerSpectrum {
  std::vector<double> frequency;
  std::vector<double> power;
};

PowerSpectrum Periodogram(std::span<const double> x);

// Carrier power is the largest bin within [f - exclusion, f + exclusion];
// the spur is the largest bin in (0, 0.5] outside that band. DC is never a
// spur.
double SfdrDbc(const PowerSpectrum& spectrum, double tone_frequency,
               double exclusion = 1e-3);
double SfdrDbc(std::span<const double> x, double tone_frequency,
               double exclusion = 1e-3);

// Table memory: b * L (intra), tables * b * L (inter), rho * L (post).
std::int64_t MemoryBits(int precision_bits, std::int64_t entries,
                        Architecture arch, int tables = 1);

enum class MetricOrientation { kLowerIsBetter, kHigherIsBetter };

struct ParetoPoint {
  std::int64_t memory_bits = 0;
  double metric = 0.0;
};

// Indices of the non-dominated points (less memory and better metric),
// ordered by memory then metric. Identical points are all kept.
std::vector<size_t> ParetoFront(std::span<const ParetoPoint> points,
                                MetricOrientation orientation);

// `frequency,power_db` rows.
void WritePsdCsv(std::ostream& out, const PowerSpectrum& spectrum);

struct MetricReport {
  std::string label;
  double mse_db = 0.0;
  double sfdr_dbc = 0.0;
  double mse_gain_db = 0.0;     // raw quantized input MSE minus mse_db
  double sfdr_gain_dbc = 0.0;   // sfdr_dbc minus raw quantized input SFDR
  std::int64_t entries = 0;
  std::int64_t memory_bits = 0;
  int beta = 0;
  double epsilon = 1.0;
  int rho = 0;
  double alpha = 0.0;
  std::string architecture;
  int window = 0;
  std::uint64_t seed = 0;
};

void WriteMetricCsvHeader(std::ostream& out);
void WriteMetricCsvRow(std::ostream& out, const MetricReport& report);

}  // namespace lutforge

#endif  // LUTFORGE_SPECTRAL_H_
