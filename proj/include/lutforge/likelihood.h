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

#ifndef LUTFORGE_LIKELIHOOD_H_
#define LUTFORGE_LIKELIHOOD_H_

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "lutforge/bit_mask.h"
#include "lutforge/quadrature.h"
#include "lutforge/quantizer.h"
#include "lutforge/tone_model.h"

namespace lutforge {

// Thrown when an index has (numerically) zero posterior mass.
class UnrealizableIndex : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// P(code | mean, sigma) for Gaussian noise, computed from erfc on the tail
// side so saturated cells keep full relative precision.
double CellProbability(const UniformQuantizer& quantizer, int code,
                       double mean, double sigma);
// d/d(mean) of CellProbability.
double CellProbabilityDerivative(const UniformQuantizer& quantizer, int code,
                                 double mean, double sigma);

// Cell probabilities and their theta-derivatives over the window, for a set
// of phase lanes. Lane 2j follows phase +theta_j, lane 2j+1 phase -theta_j;
// both give x_0 = A cos(theta_j).
class LaneTable {
 public:
  LaneTable(const UniformQuantizer& quantizer, const ToneModel& model,
            std::span<const double> thetas);

  int lanes() const { return lanes_; }
  int window() const { return window_; }
  int levels() const { return levels_; }

  // Arrays of `levels()` entries indexed by code - 1.
  const double* cells(int t, int lane) const {
    return &cells_[(static_cast<size_t>(t) * lanes_ + lane) * levels_];
  }
  const double* cell_derivatives(int t, int lane) const {
    return &derivs_[(static_cast<size_t>(t) * lanes_ + lane) * levels_];
  }

 private:
  int lanes_;
  int window_;
  int levels_;
  std::vector<double> cells_;
  std::vector<double> derivs_;
};

// One leaf of a masked-index enumeration: the digits of d and the per-lane
// window likelihoods p(d | lane) that exceed the support threshold.
struct IndexLeaf {
  std::span<const int> digits;
  std::span<const int> lanes;
  std::span<const double> values;
  // d/dtheta of `values`, empty unless derivatives were requested.
  std::span<const double> derivatives;
};

// Depth-first walk over every masked index d reachable under `mask`, in
// lexicographic digit order. A lane is dropped from a prefix once its partial
// product falls below `threshold`; prefixes with no live lane are pruned.
void EnumerateIndices(const LaneTable& table, const BitMask& mask,
                      double threshold, bool with_derivatives,
                      const std::function<void(const IndexLeaf&)>& visit);

// Quantizer, tone model and the shared theta quadrature used by every
// estimator and heuristic. Immutable after construction.
class LikelihoodContext {
 public:
  LikelihoodContext(const UniformQuantizer& quantizer, const ToneModel& model,
                    QuadratureRule theta_rule,
                    double support_threshold = 1e-15);

  const UniformQuantizer& quantizer() const { return quantizer_; }
  const ToneModel& model() const { return model_; }
  const QuadratureRule& rule() const { return rule_; }
  const LaneTable& table() const { return table_; }
  int window() const { return model_.window; }
  int nodes() const { return rule_.size(); }
  double support_threshold() const { return support_threshold_; }

  double theta(int node) const { return rule_.nodes[node]; }
  double x0(int node) const { return x0_[node]; }
  // Prior mass of the node: w_j / pi.
  double prior_weight(int node) const { return prior_weight_[node]; }
  // Quadrature value of E[x0^2].
  double prior_second_moment() const { return prior_second_moment_; }

 private:
  UniformQuantizer quantizer_;
  ToneModel model_;
  QuadratureRule rule_;
  double support_threshold_;
  LaneTable table_;
  std::vector<double> x0_;
  std::vector<double> prior_weight_;
  double prior_second_moment_ = 0.0;
};

// p(d | x0, q): average over the two phase branches of the product of masked
// per-sample probabilities.
double WindowLikelihood(std::span<const int> digits, const BitMask& mask,
                        double x0, const LikelihoodContext& ctx);

// d/dx0 of WindowLikelihood, through the phase branches. |x0| < A.
double WindowLikelihoodDerivative(std::span<const int> digits,
                                  const BitMask& mask, double x0,
                                  const LikelihoodContext& ctx);

// Posterior mean of x0 given d. Throws UnrealizableIndex when the evidence
// integral is below 1e-300.
double MmseEstimate(std::span<const int> digits, const BitMask& mask,
                    const LikelihoodContext& ctx);

// p(d | q) = E_x0[p(d | x0, q)].
double IndexProbability(std::span<const int> digits, const BitMask& mask,
                        const LikelihoodContext& ctx);

// Fisher information of x0 carried by d under mask q. |x0| < A.
double FisherInformation(double x0, const BitMask& mask,
                         const LikelihoodContext& ctx);

// Fisher information at every quadrature node of ctx.
std::vector<double> FisherInformationAtNodes(const BitMask& mask,
                                             const LikelihoodContext& ctx);

// Posterior integrals of one masked index.
struct IndexStatistics {
  std::uint64_t key = 0;  // PackIndex of the digits
  double probability = 0.0;    // p(d | q)
  double first_moment = 0.0;   // E[x0 ; d]
  double second_moment = 0.0;  // E[x0^2 ; d]

  double estimate() const { return first_moment / probability; }
};

// Statistics for every index with support under mask, in key order.
std::vector<IndexStatistics> EnumerateIndexStatistics(
    const BitMask& mask, const LikelihoodContext& ctx);

}  // namespace lutforge

#endif  // LUTFORGE_LIKELIHOOD_H_
