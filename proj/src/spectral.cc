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

#include "lutforge/spectral.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <ostream>
#include <stdexcept>

namespace lutforge {
namespace {

// The FFTW planner is not re-entrant.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

bool Better(double a, double b, MetricOrientation orientation) {
  return orientation == MetricOrientation::kLowerIsBetter ? a < b : a > b;
}


}  // namespace

double MseDb(std::span<const double> reference, std::span<const double> test) {
  if (reference.size() != test.size() || reference.empty()) {
    throw std::invalid_argument("MSE needs equal, non-empty sequences");
  }
  double sum = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    const double e = reference[i] - test[i];
    sum += e * e;
  }
  if (sum == 0.0) return kMseFloorDb;
  return std::max(kMseFloorDb, 10.0 * std::log10(sum / reference.size()));
}

PowerSpectrum Periodogram(std::span<const double> x) {
  const int n = static_cast<int>(x.size());
  if (n < 16) throw std::invalid_argument("periodogram needs >= 16 samples");
  const int bins = n / 2 + 1;
  double* in = fftw_alloc_real(n);
  fftw_complex* out = fftw_alloc_complex(bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  }
  std::copy(x.begin(), x.end(), in);
  fftw_execute(plan);
  PowerSpectrum spectrum;
  spectrum.frequency.resize(bins);
  spectrum.power.resize(bins);
  for (int k = 0; k < bins; ++k) {
    spectrum.frequency[k] = static_cast<double>(k) / n;
    spectrum.power[k] = out[k][0] * out[k][0] + out[k][1] * out[k][1];
  }
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return spectrum;
}

double SfdrDbc(const PowerSpectrum& spectrum, double tone_frequency,
               double exclusion) {
  if (!(tone_frequency > 0.0 && tone_frequency < 0.5) || exclusion < 0.0) {
    throw std::invalid_argument("SFDR needs 0 < f < 0.5 and exclusion >= 0");
  }
  double carrier = -1.0;
  double spur = -1.0;
  for (size_t k = 1; k < spectrum.power.size(); ++k) {
    const double f = spectrum.frequency[k];
    const double p = spectrum.power[k];
    if (std::abs(f - tone_frequency) <= exclusion) {
      carrier = std::max(carrier, p);
    } else {
      spur = std::max(spur, p);
    }
  }
  if (spur < 0.0) {
    throw std::invalid_argument("SFDR exclusion band covers the spectrum");
  }
  if (carrier < 0.0) {
    throw std::invalid_argument("SFDR carrier band contains no bins");
  }
  if (spur == 0.0) return kSfdrCeilingDbc;
  if (carrier == 0.0) return -kSfdrCeilingDbc;
  return std::clamp(10.0 * std::log10(carrier / spur), -kSfdrCeilingDbc,
                    kSfdrCeilingDbc);
}

double SfdrDbc(std::span<const double> x, double tone_frequency,
               double exclusion) {
  return SfdrDbc(Periodogram(x), tone_frequency, exclusion);
}

std::int64_t MemoryBits(int precision_bits, std::int64_t entries,
                        Architecture arch, int tables) {
  if (precision_bits < 1 || entries < 0 || tables < 1) {
    throw std::invalid_argument("memory accounting needs positive arguments");
  }
  const std::int64_t per_table = precision_bits * entries;
  return arch == Architecture::kInter ? tables * per_table : per_table;
}

std::vector<size_t> ParetoFront(std::span<const ParetoPoint> points,
                                MetricOrientation orientation) {
  std::vector<size_t> order(points.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    if (points[a].memory_bits != points[b].memory_bits) {
      return points[a].memory_bits < points[b].memory_bits;
    }
    return Better(points[a].metric, points[b].metric, orientation);
  });
  // Sweep by memory: a point survives when no cheaper-or-equal point beats
  // or matches it with strictly less memory, and nothing at the same memory
  // is strictly better.
  std::vector<size_t> front;
  bool have_best = false;
  double best = 0.0;
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j < order.size() &&
           points[order[j]].memory_bits == points[order[i]].memory_bits) {
      ++j;
    }
    // order[i] holds the best metric of this memory group.
    const double group_best = points[order[i]].metric;
    if (!have_best || Better(group_best, best, orientation)) {
      for (size_t k = i; k < j && points[order[k]].metric == group_best; ++k) {
        front.push_back(order[k]);
      }
      best = group_best;
      have_best = true;
    }
    i = j;
  }
  return front;
}

void WritePsdCsv(std::ostream& out, const PowerSpectrum& spectrum) {
  out << "frequency,power_db\n";
  out.precision(10);
  for (size_t k = 0; k < spectrum.power.size(); ++k) {
    const double p = spectrum.power[k];
    const double db = p > 0.0 ? std::max(-300.0, 10.0 * std::log10(p)) : -300.0;
    out << spectrum.frequency[k] << ',' << db << '\n';
  }
}

void WriteMetricCsvHeader(std::ostream& out) {
  out << "label,mse_db,sfdr_dbc,mse_gain_db,sfdr_gain_dbc,entries,"
         "memory_bits,beta,epsilon,rho,alpha,arch,N,seed\n";
}

void WriteMetricCsvRow(std::ostream& out, const MetricReport& r) {
  const auto old = out.precision(10);
  out << r.label << ',' << r.mse_db << ',' << r.sfdr_dbc << ','
      << r.mse_gain_db << ',' << r.sfdr_gain_dbc << ',' << r.entries << ','
      << r.memory_bits << ',' << r.beta << ',' << r.epsilon << ',' << r.rho
      << ',' << r.alpha << ',' << r.architecture << ',' << r.window << ','
      << r.seed << '\n';
  out.precision(old);
}

}  // namespace lutforge
