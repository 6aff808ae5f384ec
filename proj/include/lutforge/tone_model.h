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

#ifndef LUTFORGE_TONE_MODEL_H_
#define LUTFORGE_TONE_MODEL_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "lutforge/quantizer.h"

namespace lutforge {

inline constexpr double kPi = 3.14159265358979323846;

// x_n = A cos(2 pi F n + phase) + w_n, w_n ~ N(0, sigma^2).
//
// Amplitude and frequency are known design-time hyper-parameters; the phase
// is uniform on [0, 2 pi) for design and fixed per simulation run.
struct ToneModel {
  double amplitude = 0.875;
  double frequency = kPi / 10.0;
  double phase = 0.0;
  double noise_sigma = 0.04;
  int window = 4;

  double angular_frequency() const { return 2.0 * kPi * frequency; }
};

// Defaults used throughout: A = 1 - step/2, F = pi/10, sigma = 0.16 step.
ToneModel DefaultToneModel(const UniformQuantizer& quantizer, int window);

// True when F is within 1e-12 of p/q for some q <= max_denominator, in which
// case the sequence is periodic and the arcsine prior no longer holds exactly.
bool LooksRational(double frequency, int max_denominator = 1000);

double SampleTone(const ToneModel& model, double phase, int n);

struct ToneSequence {
  std::vector<double> clean;
  std::vector<double> noisy;
  std::vector<int> codes;
};

// Samples n = 0 .. length-1 at model.phase. Noise is drawn from the stream
// derived from `seed`; identical seeds give bit-identical sequences. With
// pre_dither_alpha > 0, uniform dither of that relative amplitude is added
// ahead of the quantizer only; `noisy` stays dither-free.
ToneSequence GenerateSequence(const ToneModel& model,
                              const UniformQuantizer& quantizer, int length,
                              std::uint64_t seed,
                              double pre_dither_alpha = 0.0);

// Arcsine prior of the instantaneous sample x0. Infinite at |x0| == A.
double PriorX0(double x0, double amplitude);

// The two phases consistent with x_0 = x0: (+acos(x0/A), -acos(x0/A)).
std::pair<double, double> PhaseBranches(double x0, double amplitude);

}  // namespace lutforge

#endif  // LUTFORGE_TONE_MODEL_H_
