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

#include "lutforge/likelihood.h"

#include <cmath>
#include <string>
#include <utility>

namespace lutforge {
namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// P(lo < Z < hi) for a standard normal Z, lo <= hi.
double StandardNormalMass(double lo, double hi) {
  if (lo >= 0.0) {
    return 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
  }
  if (hi <= 0.0) {
    return 0.5 * (std::erfc(-hi * kInvSqrt2) - std::erfc(-lo * kInvSqrt2));
  }
  return 1.0 - 0.5 * std::erfc(hi * kInvSqrt2) -
         0.5 * std::erfc(-lo * kInvSqrt2);
}

double StandardNormalDensity(double z) {
  if (std::isinf(z)) return 0.0;
  return kInvSqrt2Pi * std::exp(-0.5 * z * z);
}

// Noiseless path: the cell containing `mean` has probability one, with the
// threshold tie split evenly.
double CellIndicator(const UniformQuantizer& quantizer, int code,
                     double mean) {
  const double lo = quantizer.threshold(code);
  const double hi = quantizer.threshold(code + 1);
  if (mean > lo && mean < hi) return 1.0;
  if (mean == lo || mean == hi) return 0.5;
  return 0.0;
}

void CheckDigits(std::span<const int> digits, const BitMask& mask,
                 const LikelihoodContext& ctx) {
  if (static_cast<int>(digits.size()) != ctx.window() ||
      mask.window() != ctx.window() ||
      mask.bits() != ctx.quantizer().bits()) {
    throw std::invalid_argument(
        "index vector / mask shape does not match the likelihood context");
  }
}

struct SampleFactors {
  std::vector<int> digits;
  std::vector<double> values;       // [k * lanes + lane]
  std::vector<double> derivatives;  // same layout
};

std::vector<SampleFactors> BuildFactors(const LaneTable& table,
                                        const BitMask& mask,
                                        bool with_derivatives) {
  const int lanes = table.lanes();
  std::vector<SampleFactors> out(table.window());
  for (int t = 0; t < table.window(); ++t) {
    const unsigned sel = mask.sample_bits(t);
    SampleFactors& f = out[t];
    for (int s = 0; s < table.levels(); ++s) {
      if ((static_cast<unsigned>(s) & ~sel) == 0) f.digits.push_back(s + 1);
    }
    const size_t count = f.digits.size();
    f.values.assign(count * lanes, 0.0);
    if (with_derivatives) f.derivatives.assign(count * lanes, 0.0);
    for (int lane = 0; lane < lanes; ++lane) {
      const double* cells = table.cells(t, lane);
      const double* dcells = table.cell_derivatives(t, lane);
      for (int y = 0; y < table.levels(); ++y) {
        const unsigned digit = static_cast<unsigned>(y) & sel;
        // Digits are the ascending submasks of sel; locate by scan (<= 2^b).
        size_t k = 0;
        while (static_cast<unsigned>(f.digits[k] - 1) != digit) ++k;
        f.values[k * lanes + lane] += cells[y];
        if (with_derivatives) f.derivatives[k * lanes + lane] += dcells[y];
      }
    }
  }
  return out;
}

class IndexWalker {
 public:
  IndexWalker(const LaneTable& table, const BitMask& mask, double threshold,
              bool with_derivatives,
              const std::function<void(const IndexLeaf&)>& visit)
      : window_(table.window()),
        threshold_(threshold),
        with_derivatives_(with_derivatives),
        visit_(visit),
        factors_(BuildFactors(table, mask, with_derivatives)),
        digits_(table.window()),
        levels_(table.window() + 1) {
    const int lanes = table.lanes();
    for (Level& level : levels_) {
      level.lanes.resize(lanes);
      level.values.resize(lanes);
      if (with_derivatives) level.derivatives.resize(lanes);
    }
    Level& root = levels_[0];
    for (int lane = 0; lane < lanes; ++lane) {
      root.lanes[lane] = lane;
      root.values[lane] = 1.0;
      if (with_derivatives) root.derivatives[lane] = 0.0;
    }
    root.count = lanes;
  }

  void Run() {
    if (levels_[0].count > 0) Walk(0);
  }

 private:
  struct Level {
    std::vector<int> lanes;
    std::vector<double> values;
    std::vector<double> derivatives;
    int count = 0;
  };

  void Walk(int t) {
    const Level& parent = levels_[t];
    Level& child = levels_[t + 1];
    const SampleFactors& f = factors_[t];
    const size_t lanes = levels_[0].lanes.size();
    for (size_t k = 0; k < f.digits.size(); ++k) {
      digits_[t] = f.digits[k];
      const double* fv = &f.values[k * lanes];
      const double* fd = with_derivatives_ ? &f.derivatives[k * lanes] : nullptr;
      int count = 0;
      for (int i = 0; i < parent.count; ++i) {
        const int lane = parent.lanes[i];
        const double v = parent.values[i] * fv[lane];
        if (!(v > threshold_)) continue;
        child.lanes[count] = lane;
        child.values[count] = v;
        if (fd != nullptr) {
          child.derivatives[count] =
              parent.derivatives[i] * fv[lane] + parent.values[i] * fd[lane];
        }
        ++count;
      }
      if (count == 0) continue;
      child.count = count;
      if (t + 1 == window_) {
        IndexLeaf leaf;
        leaf.digits = digits_;
        leaf.lanes = std::span<const int>(child.lanes.data(), count);
        leaf.values = std::span<const double>(child.values.data(), count);
        if (with_derivatives_) {
          leaf.derivatives =
              std::span<const double>(child.derivatives.data(), count);
        }
        visit_(leaf);
      } else {
        Walk(t + 1);
      }
    }
  }

  int window_;
  double threshold_;
  bool with_derivatives_;
  const std::function<void(const IndexLeaf&)>& visit_;
  std::vector<SampleFactors> factors_;
  std::vector<int> digits_;
  std::vector<Level> levels_;
};

// Per-node accumulation of Fisher information from lane-level leaves.
class FisherAccumulator {
 public:
  FisherAccumulator(std::span<const double> thetas, double amplitude,
                    double threshold)
      : threshold_(threshold),
        inv_slope_(thetas.size()),
        mass_(thetas.size(), 0.0),
        slope_(thetas.size(), 0.0),
        touched_flag_(thetas.size(), 0),
        information_(thetas.size(), 0.0) {
    for (size_t j = 0; j < thetas.size(); ++j) {
      // dtheta/dx0 = -1 / (A sin theta)
      inv_slope_[j] = -1.0 / (amplitude * std::sin(thetas[j]));
    }
  }

  void Add(const IndexLeaf& leaf) {
    for (size_t i = 0; i < leaf.lanes.size(); ++i) {
      const int node = leaf.lanes[i] / 2;
      if (!touched_flag_[node]) {
        touched_flag_[node] = 1;
        touched_.push_back(node);
      }
      mass_[node] += 0.5 * leaf.values[i];
      slope_[node] += 0.5 * leaf.derivatives[i];
    }
    for (int node : touched_) {
      const double p = mass_[node];
      if (p > threshold_) {
        const double dp = slope_[node] * inv_slope_[node];
        information_[node] += dp * dp / p;
      }
      mass_[node] = 0.0;
      slope_[node] = 0.0;
      touched_flag_[node] = 0;
    }
    touched_.clear();
  }

  const std::vector<double>& information() const { return information_; }

 private:
  double threshold_;
  std::vector<double> inv_slope_;
  std::vector<double> mass_;
  std::vector<double> slope_;
  std::vector<char> touched_flag_;
  std::vector<int> touched_;
  std::vector<double> information_;
};

// Per-lane masked window product and its theta-derivative, by direct
// evaluation from the cell tables.
std::pair<double, double> LaneProduct(const LaneTable& table, int lane,
                                      std::span<const int> digits,
                                      const BitMask& mask) {
  double value = 1.0;
  double derivative = 0.0;
  for (int t = 0; t < table.window(); ++t) {
    const unsigned sel = mask.sample_bits(t);
    const unsigned want = static_cast<unsigned>(digits[t] - 1);
    const double* cells = table.cells(t, lane);
    const double* dcells = table.cell_derivatives(t, lane);
    double f = 0.0;
    double df = 0.0;
    for (int y = 0; y < table.levels(); ++y) {
      if ((static_cast<unsigned>(y) & sel) == want) {
        f += cells[y];
        df += dcells[y];
      }
    }
    derivative = derivative * f + value * df;
    value *= f;
  }
  return {value, derivative};
}

}  // namespace

double CellProbability(const UniformQuantizer& quantizer, int code,
                       double mean, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("cell probability needs sigma > 0");
  }
  const double lo = (quantizer.threshold(code) - mean) / sigma;
  const double hi = (quantizer.threshold(code + 1) - mean) / sigma;
  return StandardNormalMass(lo, hi);
}

double CellProbabilityDerivative(const UniformQuantizer& quantizer, int code,
                                 double mean, double sigma) {
  if (!(sigma > 0.0)) {
    throw std::domain_error("cell probability needs sigma > 0");
  }
  const double lo = (quantizer.threshold(code) - mean) / sigma;
  const double hi = (quantizer.threshold(code + 1) - mean) / sigma;
  return (StandardNormalDensity(lo) - StandardNormalDensity(hi)) / sigma;
}

LaneTable::LaneTable(const UniformQuantizer& quantizer, const ToneModel& model,
                     std::span<const double> thetas)
    : lanes_(2 * static_cast<int>(thetas.size())),
      window_(model.window),
      levels_(quantizer.levels()) {
  if (window_ < 1) throw std::invalid_argument("window must be >= 1");
  const size_t total = static_cast<size_t>(window_) * lanes_ * levels_;
  cells_.assign(total, 0.0);
  derivs_.assign(total, 0.0);
  const double omega = model.angular_frequency();
  const double a = model.amplitude;
  const double sigma = model.noise_sigma;
  for (int t = 0; t < window_; ++t) {
    const int n = t - (window_ - 1);
    for (int lane = 0; lane < lanes_; ++lane) {
      const double sign = (lane % 2 == 0) ? 1.0 : -1.0;
      const double phase = omega * n + sign * thetas[lane / 2];
      const double mean = a * std::cos(phase);
      const double dmean = -sign * a * std::sin(phase);
      double* cells = &cells_[(static_cast<size_t>(t) * lanes_ + lane) * levels_];
      double* dcells =
          &derivs_[(static_cast<size_t>(t) * lanes_ + lane) * levels_];
      for (int y = 0; y < levels_; ++y) {
        if (sigma > 0.0) {
          cells[y] = CellProbability(quantizer, y + 1, mean, sigma);
          dcells[y] =
              CellProbabilityDerivative(quantizer, y + 1, mean, sigma) * dmean;
        } else {
          cells[y] = CellIndicator(quantizer, y + 1, mean);
        }
      }
    }
  }
}

void EnumerateIndices(const LaneTable& table, const BitMask& mask,
                      double threshold, bool with_derivatives,
                      const std::function<void(const IndexLeaf&)>& visit) {
  if (mask.window() != table.window() ||
      (1 << mask.bits()) != table.levels()) {
    throw std::invalid_argument("mask shape does not match the lane table");
  }
  IndexWalker walker(table, mask, threshold, with_derivatives, visit);
  walker.Run();
}

LikelihoodContext::LikelihoodContext(const UniformQuantizer& quantizer,
                                     const ToneModel& model,
                                     QuadratureRule theta_rule,
                                     double support_threshold)
    : quantizer_(quantizer),
      model_(model),
      rule_(std::move(theta_rule)),
      support_threshold_(support_threshold),
      table_(quantizer, model, rule_.nodes) {
  if (model.amplitude <= 0.0) {
    throw std::domain_error("tone amplitude must be positive");
  }
  x0_.resize(rule_.size());
  prior_weight_.resize(rule_.size());
  for (int j = 0; j < rule_.size(); ++j) {
    if (!(rule_.weights[j] > 0.0)) {
      throw std::invalid_argument("quadrature weights must be positive");
    }
    x0_[j] = model.amplitude * std::cos(rule_.nodes[j]);
    prior_weight_[j] = rule_.weights[j] / kPi;
    prior_second_moment_ += prior_weight_[j] * x0_[j] * x0_[j];
  }
}

double WindowLikelihood(std::span<const int> digits, const BitMask& mask,
                        double x0, const LikelihoodContext& ctx) {
  CheckDigits(digits, mask, ctx);
  const ToneModel& model = ctx.model();
  const UniformQuantizer& quantizer = ctx.quantizer();
  const auto [phi_plus, phi_minus] = PhaseBranches(x0, model.amplitude);
  double total = 0.0;
  for (double phi : {phi_plus, phi_minus}) {
    double product = 1.0;
    for (int t = 0; t < ctx.window(); ++t) {
      const int n = t - (ctx.window() - 1);
      const double mean = SampleTone(model, phi, n);
      const unsigned sel = mask.sample_bits(t);
      const unsigned want = static_cast<unsigned>(digits[t] - 1);
      double f = 0.0;
      for (int y = 1; y <= quantizer.levels(); ++y) {
        if ((static_cast<unsigned>(y - 1) & sel) != want) continue;
        f += model.noise_sigma > 0.0
                 ? CellProbability(quantizer, y, mean, model.noise_sigma)
                 : CellIndicator(quantizer, y, mean);
      }
      product *= f;
    }
    total += 0.5 * product;
  }
  return total;
}

double WindowLikelihoodDerivative(std::span<const int> digits,
                                  const BitMask& mask, double x0,
                                  const LikelihoodContext& ctx) {
  CheckDigits(digits, mask, ctx);
  const double a = ctx.model().amplitude;
  if (!(std::abs(x0) < a)) {
    throw std::domain_error("likelihood derivative needs |x0| < A");
  }
  const double theta = std::acos(x0 / a);
  const LaneTable table(ctx.quantizer(), ctx.model(),
                        std::span<const double>(&theta, 1));
  double slope = 0.0;
  for (int lane = 0; lane < 2; ++lane) {
    slope += 0.5 * LaneProduct(table, lane, digits, mask).second;
  }
  return slope * (-1.0 / (a * std::sin(theta)));
}

double MmseEstimate(std::span<const int> digits, const BitMask& mask,
                    const LikelihoodContext& ctx) {
  CheckDigits(digits, mask, ctx);
  double num = 0.0;
  double den = 0.0;
  for (int j = 0; j < ctx.nodes(); ++j) {
    const double like =
        0.5 * (LaneProduct(ctx.table(), 2 * j, digits, mask).first +
               LaneProduct(ctx.table(), 2 * j + 1, digits, mask).first);
    num += ctx.prior_weight(j) * ctx.x0(j) * like;
    den += ctx.prior_weight(j) * like;
  }
  if (!(den >= 1e-300)) {
    throw UnrealizableIndex("index " + FormatIndex(digits) +
                            " has no posterior mass");
  }
  return num / den;
}

double IndexProbability(std::span<const int> digits, const BitMask& mask,
                        const LikelihoodContext& ctx) {
  CheckDigits(digits, mask, ctx);
  double total = 0.0;
  for (int j = 0; j < ctx.nodes(); ++j) {
    const double like =
        0.5 * (LaneProduct(ctx.table(), 2 * j, digits, mask).first +
               LaneProduct(ctx.table(), 2 * j + 1, digits, mask).first);
    total += ctx.prior_weight(j) * like;
  }
  return total;
}

double FisherInformation(double x0, const BitMask& mask,
                         const LikelihoodContext& ctx) {
  const double a = ctx.model().amplitude;
  if (!(std::abs(x0) < a)) {
    throw std::domain_error("Fisher information needs |x0| < A");
  }
  if (!(ctx.model().noise_sigma > 0.0)) {
    throw std::domain_error("Fisher information needs sigma > 0");
  }
  const double theta = std::acos(x0 / a);
  const std::span<const double> thetas(&theta, 1);
  const LaneTable table(ctx.quantizer(), ctx.model(), thetas);
  FisherAccumulator acc(thetas, a, ctx.support_threshold());
  EnumerateIndices(table, mask, ctx.support_threshold() * 1e-3, true,
                   [&](const IndexLeaf& leaf) { acc.Add(leaf); });
  return acc.information()[0];
}

std::vector<double> FisherInformationAtNodes(const BitMask& mask,
                                             const LikelihoodContext& ctx) {
  if (!(ctx.model().noise_sigma > 0.0)) {
    throw std::domain_error("Fisher information needs sigma > 0");
  }
  FisherAccumulator acc(ctx.rule().nodes, ctx.model().amplitude,
                        ctx.support_threshold());
  EnumerateIndices(ctx.table(), mask, ctx.support_threshold() * 1e-3, true,
                   [&](const IndexLeaf& leaf) { acc.Add(leaf); });
  return acc.information();
}

std::vector<IndexStatistics> EnumerateIndexStatistics(
    const BitMask& mask, const LikelihoodContext& ctx) {
  std::vector<IndexStatistics> out;
  const int bits = ctx.quantizer().bits();
  EnumerateIndices(
      ctx.table(), mask, ctx.support_threshold(), false,
      [&](const IndexLeaf& leaf) {
        IndexStatistics s;
        s.key = PackIndex(leaf.digits, bits);
        for (size_t i = 0; i < leaf.lanes.size(); ++i) {
          const int node = leaf.lanes[i] / 2;
          const double w = 0.5 * ctx.prior_weight(node) * leaf.values[i];
          const double x = ctx.x0(node);
          s.probability += w;
          s.first_moment += w * x;
          s.second_moment += w * x * x;
        }
        out.push_back(s);
      });
  return out;
}

}  // namespace lutforge
