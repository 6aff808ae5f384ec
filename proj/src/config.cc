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

#include "lutforge/config.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <sstream>

namespace lutforge {
namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T>
std::string JoinList(const std::vector<T>& values) {
  std::string out;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    if constexpr (std::is_floating_point_v<T>) {
      out += FormatDouble(values[i]);
    } else {
      out += std::to_string(values[i]);
    }
  }
  return out;
}

double ToDouble(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a number, got '" +
                      v + "'");
  }
}

long long ToInteger(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const long long x = std::stoll(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" +
                      v + "'");
  }
}

std::uint64_t ToUnsigned(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    if (v.empty() || v[0] == '-') throw std::invalid_argument(v);
    const unsigned long long x = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key +
                      "': expected an unsigned integer, got '" + v + "'");
  }
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("config key '" + key + "': expected true or false, got '" +
                    v + "'");
}

template <typename T, typename F>
std::vector<T> ToList(const std::string& key, const std::string& v, F parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(key, Trim(item)));
  if (out.empty()) throw ConfigError("config key '" + key + "' has no values");
  return out;
}

int ToInt(const std::string& key, const std::string& v) {
  const long long x = ToInteger(key, v);
  if (x < -(1LL << 31) || x >= (1LL << 31)) {
    throw ConfigError("config key '" + key + "' out of range");
  }
  return static_cast<int>(x);
}

// Rewraps library parse errors so every config failure is a ConfigError.
template <typename F>
auto Wrap(const std::string& key, F f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("config key '" + key + "': " + e.what());
  }
}

using Setter = std::function<void(ExperimentConfig&, const std::string&,
                                  const std::string&)>;

const std::map<std::string, Setter>& Setters() {
  static const std::map<std::string, Setter> setters = {
      {"b", [](auto& c, auto& k, auto& v) { c.bits = ToInt(k, v); }},
      {"A",
       [](auto& c, auto& k, auto& v) {
         if (v == "auto") {
           c.amplitude.reset();
         } else {
           c.amplitude = ToDouble(k, v);
         }
       }},
      {"F", [](auto& c, auto& k, auto& v) { c.frequency = ToDouble(k, v); }},
      {"phase", [](auto& c, auto& k, auto& v) { c.phase = ToDouble(k, v); }},
      {"random_phase",
       [](auto& c, auto& k, auto& v) { c.random_phase = ToBool(k, v); }},
      {"sigma_ratio",
       [](auto& c, auto& k, auto& v) { c.sigma_ratio = ToDouble(k, v); }},
      {"N", [](auto& c, auto& k, auto& v) { c.window = ToInt(k, v); }},
      {"heuristic",
       [](auto& c, auto& k, auto& v) {
         c.heuristic = Wrap(k, [&] { return ParseHeuristic(v); });
       }},
      {"search",
       [](auto& c, auto& k, auto& v) {
         if (v == "naive") {
           c.search = MaskSearch::kNaive;
         } else if (v == "greedy") {
           c.search = MaskSearch::kGreedy;
         } else if (v == "brute-force") {
           c.search = MaskSearch::kBruteForce;
         } else {
           throw ConfigError("config key '" + k +
                             "': expected naive, greedy or brute-force");
         }
       }},
      {"beta", [](auto& c, auto& k, auto& v) { c.beta = ToInt(k, v); }},
      {"mask", [](auto& c, auto&, auto& v) { c.mask = v; }},
      {"epsilon",
       [](auto& c, auto& k, auto& v) { c.epsilon = ToDouble(k, v); }},
      {"hpi_method",
       [](auto& c, auto& k, auto& v) {
         if (v == "exact") {
           c.hpi_method = HpiMethod::kExact;
         } else if (v == "monte-carlo") {
           c.hpi_method = HpiMethod::kMonteCarlo;
         } else {
           throw ConfigError("config key '" + k +
                             "': expected exact or monte-carlo");
         }
       }},
      {"draws", [](auto& c, auto& k, auto& v) { c.draws = ToInteger(k, v); }},
      {"rho", [](auto& c, auto& k, auto& v) { c.rho = ToInt(k, v); }},
      {"alpha", [](auto& c, auto& k, auto& v) { c.alpha = ToDouble(k, v); }},
      {"arch",
       [](auto& c, auto& k, auto& v) {
         c.architecture = Wrap(k, [&] { return ParseArchitecture(v); });
       }},
      {"xi", [](auto& c, auto& k, auto& v) { c.tables = ToInt(k, v); }},
      {"samples", [](auto& c, auto& k, auto& v) { c.samples = ToInt(k, v); }},
      {"seed", [](auto& c, auto& k, auto& v) { c.seed = ToUnsigned(k, v); }},
      {"trials", [](auto& c, auto& k, auto& v) { c.trials = ToInt(k, v); }},
      {"threads", [](auto& c, auto& k, auto& v) { c.threads = ToInt(k, v); }},
      {"quad_panels",
       [](auto& c, auto& k, auto& v) { c.panels = ToInt(k, v); }},
      {"quad_order", [](auto& c, auto& k, auto& v) { c.order = ToInt(k, v); }},
      {"support_threshold",
       [](auto& c, auto& k, auto& v) {
         c.support_threshold = ToDouble(k, v);
       }},
      {"f_o", [](auto& c, auto& k, auto& v) { c.exclusion = ToDouble(k, v); }},
      {"hpi_cap", [](auto& c, auto& k, auto& v) { c.hpi_cap = ToInt(k, v); }},
      {"brute_force_cap",
       [](auto& c, auto& k, auto& v) { c.brute_force_cap = ToInt(k, v); }},
      {"out", [](auto& c, auto&, auto& v) { c.out = v; }},
      {"lut", [](auto& c, auto&, auto& v) { c.lut = v; }},
      {"alpha_grid",
       [](auto& c, auto& k, auto& v) {
         c.alpha_grid = ToList<double>(k, v, ToDouble);
       }},
      {"beta_grid",
       [](auto& c, auto& k, auto& v) {
         c.beta_grid = ToList<int>(k, v, ToInt);
       }},
      {"epsilon_grid",
       [](auto& c, auto& k, auto& v) {
         c.epsilon_grid = ToList<double>(k, v, ToDouble);
       }},
      {"rho_grid",
       [](auto& c, auto& k, auto& v) {
         c.rho_grid = ToList<int>(k, v, ToInt);
       }},
      {"pareto_alpha",
       [](auto& c, auto& k, auto& v) { c.pareto_alpha = ToDouble(k, v); }},
  };
  return setters;
}

void Require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

ToneModel ExperimentConfig::model() const {
  const UniformQuantizer q(bits);
  ToneModel m = DefaultToneModel(q, window);
  if (amplitude) m.amplitude = *amplitude;
  m.frequency = frequency;
  m.phase = phase;
  m.noise_sigma = sigma_ratio * q.step();
  return m;
}

std::string MaskSearchName(MaskSearch search) {
  switch (search) {
    case MaskSearch::kNaive: return "naive";
    case MaskSearch::kGreedy: return "greedy";
    case MaskSearch::kBruteForce: return "brute-force";
  }
  return "?";
}

void SetConfigValue(ExperimentConfig& config, const std::string& key,
                    const std::string& value) {
  const auto& setters = Setters();
  const auto it = setters.find(key);
  if (it == setters.end()) {
    throw ConfigError("unknown config key '" + key + "'");
  }
  it->second(config, key, value);
}

void ParseConfig(std::istream& in, ExperimentConfig& config,
                 const std::string& source) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(number) +
                        ": expected key=value, got '" + line + "'");
    }
    try {
      SetConfigValue(config, Trim(line.substr(0, eq)),
                     Trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(number) + ": " +
                        e.what());
    }
  }
}

void LoadConfigFile(const std::string& path, ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  ParseConfig(in, config, path);
}

void ValidateConfig(const ExperimentConfig& c) {
  Require(c.bits >= 1 && c.bits <= 16, "b must be in 1..16");
  Require(c.window >= 1 && c.bits * c.window <= 64, "b*N must be <= 64");
  const double step = std::ldexp(1.0, 1 - c.bits);
  const double a = c.amplitude.value_or(1.0 - step / 2.0);
  Require(a > 0.0, "A must be positive");
  Require(c.frequency > 0.0 && c.frequency < 0.5, "F must be in (0, 0.5)");
  Require(c.sigma_ratio > 0.0, "sigma_ratio must be positive");
  Require(c.beta >= 0 && c.beta <= c.bits * c.window, "beta must be in 0..bN");
  Require(c.epsilon > 0.0 && c.epsilon <= 1.0, "epsilon must be in (0, 1]");
  Require(c.draws >= 1, "draws must be >= 1");
  Require(c.rho >= c.bits && c.rho <= 30, "rho must be in b..30");
  Require(c.alpha >= 0.0 && c.alpha <= 1.0, "alpha must be in [0, 1]");
  Require(c.tables >= 1, "xi must be >= 1");
  Require(c.samples >= 16, "samples must be >= 16");
  Require(c.trials >= 1, "trials must be >= 1");
  Require(c.threads >= 1, "threads must be >= 1");
  Require(c.panels >= 1 && c.order >= 1, "quadrature sizes must be >= 1");
  Require(c.support_threshold >= 0.0, "support_threshold must be >= 0");
  Require(c.exclusion >= 0.0, "f_o must be >= 0");
  Require(c.hpi_cap >= 1 && c.hpi_cap <= 64, "hpi_cap must be in 1..64");
  Require(c.brute_force_cap >= 1, "brute_force_cap must be >= 1");
  if (!c.mask.empty()) {
    Require(static_cast<int>(c.mask.size()) == c.bits * c.window &&
                c.mask.find_first_not_of("01") == std::string::npos,
            "mask must be a 0/1 string of length b*N");
  }
  for (double x : c.alpha_grid) {
    Require(x >= 0.0 && x <= 1.0, "alpha_grid values must be in [0, 1]");
  }
  for (int x : c.beta_grid) {
    Require(x >= 0, "beta_grid values must be >= 0");
  }
  for (double x : c.epsilon_grid) {
    Require(x > 0.0 && x <= 1.0, "epsilon_grid values must be in (0, 1]");
  }
  for (int x : c.rho_grid) {
    Require(x >= c.bits && x <= 30, "rho_grid values must be in b..30");
  }
  Require(c.pareto_alpha >= 0.0 && c.pareto_alpha <= 1.0,
          "pareto_alpha must be in [0, 1]");
}

std::vector<std::pair<std::string, std::string>> ResolvedSettings(
    const ExperimentConfig& c) {
  const ToneModel m = c.model();
  std::vector<std::pair<std::string, std::string>> out = {
      {"A", FormatDouble(m.amplitude)},
      {"F", FormatDouble(c.frequency)},
      {"N", std::to_string(c.window)},
      {"alpha", FormatDouble(c.alpha)},
      {"alpha_grid", JoinList(c.alpha_grid)},
      {"arch", ArchitectureName(c.architecture)},
      {"b", std::to_string(c.bits)},
      {"beta", std::to_string(c.beta)},
      {"beta_grid", JoinList(c.beta_grid)},
      {"brute_force_cap", std::to_string(c.brute_force_cap)},
      {"draws", std::to_string(c.draws)},
      {"epsilon", FormatDouble(c.epsilon)},
      {"epsilon_grid", JoinList(c.epsilon_grid)},
      {"f_o", FormatDouble(c.exclusion)},
      {"heuristic", HeuristicName(c.heuristic)},
      {"hpi_cap", std::to_string(c.hpi_cap)},
      {"hpi_method", HpiMethodName(c.hpi_method)},
      {"lut", c.lut},
      {"mask", c.mask},
      {"out", c.out},
      {"pareto_alpha", FormatDouble(c.pareto_alpha)},
      {"phase", FormatDouble(c.phase)},
      {"quad_order", std::to_string(c.order)},
      {"quad_panels", std::to_string(c.panels)},
      {"random_phase", c.random_phase ? "true" : "false"},
      {"rho", std::to_string(c.rho)},
      {"rho_grid", JoinList(c.rho_grid)},
      {"samples", std::to_string(c.samples)},
      {"search", MaskSearchName(c.search)},
      {"seed", std::to_string(c.seed)},
      {"sigma_ratio", FormatDouble(c.sigma_ratio)},
      {"support_threshold", FormatDouble(c.support_threshold)},
      {"threads", std::to_string(c.threads)},
      {"trials", std::to_string(c.trials)},
      {"xi", std::to_string(c.tables)},
  };
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lutforge
