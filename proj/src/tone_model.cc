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

#include "lutforge/tone_model.h"

#include "lutforge/dither.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace lutforge {

ToneModel DefaultToneModel(const UniformQuantizer& quantizer, int window) {
  ToneModel model;
  model.amplitude = 1.0 - quantizer.step() / 2.0;
  model.frequency = kPi / 10.0;
  model.noise_sigma = 0.16 * quantizer.step();
  model.window = window;
  return model;
}

bool LooksRational(double frequency, int max_denominator) {
  for (int q = 1; q <= max_denominator; ++q) {
    const double p = std::round(frequency * q);
    if (std::abs(frequency - p / q) < 1e-12) return true;
  }
  return false;
}

double SampleTone(const ToneModel& model, double phase, int n) {
  return model.amplitude * std::cos(model.angular_frequency() * n + phase);
}

ToneSequence GenerateSequence(const ToneModel& model,
                              const UniformQuantizer& quantizer, int length,
                              std::uint64_t seed, double pre_dither_alpha) {
  if (length < 1) throw std::invalid_argument("sequence length must be >= 1");
  RandomStream noise = MakeStream(seed, kNoiseStream);
  RandomStream ties = MakeStream(seed, kThresholdStream);
  RandomStream dither = MakeStream(seed, kPreDitherStream);
  std::normal_distribution<double> gauss(0.0, 1.0);
  ToneSequence out;
  out.clean.resize(length);
  out.noisy.resize(length);
  out.codes.resize(length);
  for (int n = 0; n < length; ++n) {
    out.clean[n] = SampleTone(model, model.phase, n);
    const double w = model.noise_sigma > 0.0 ? model.noise_sigma * gauss(noise)
                                             : 0.0;
    out.noisy[n] = out.clean[n] + w;
    const double v = SampleDither(pre_dither_alpha, quantizer.step(), dither);
    out.codes[n] = quantizer.Quantize(out.noisy[n] + v, ties);
  }
  return out;
}

double PriorX0(double x0, double amplitude) {
  if (amplitude <= 0.0) throw std::domain_error("amplitude must be positive");
  const double ax = std::abs(x0);
  if (ax > amplitude) return 0.0;
  if (ax == amplitude) return std::numeric_limits<double>::infinity();
  return 1.0 / (kPi * std::sqrt(amplitude * amplitude - x0 * x0));
}

std::pair<double, double> PhaseBranches(double x0, double amplitude) {
  if (std::abs(x0) > amplitude) {
    throw std::domain_error("|x0| exceeds the tone amplitude");
  }
  const double phi = std::acos(x0 / amplitude);
  return {phi, -phi};
}

}  // namespace lutforge
