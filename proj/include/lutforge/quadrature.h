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

#ifndef LUTFORGE_QUADRATURE_H_
#define LUTFORGE_QUADRATURE_H_

#include <vector>

namespace lutforge {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  int size() const { return static_cast<int>(nodes.size()); }
};

// Gauss-Legendre nodes and weights of the given order on [-1, 1].
QuadratureRule GaussLegendre(int order);

// `panels` equal sub-intervals of [a, b], each with an order-point rule.
QuadratureRule CompositeGaussLegendre(double a, double b, int panels,
                                      int order);

// Rule over the phase variable theta in (0, pi) used for every integral
// over x0 = A cos(theta). Weights sum to pi.
QuadratureRule ThetaRule(int panels = 64, int order = 8);

}  // namespace lutforge

#endif  // LUTFORGE_QUADRATURE_H_
