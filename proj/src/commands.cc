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

#include "lutforge/commands.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

#include "lutforge/parallel.h"
#include "lutforge/pipeline.h"

namespace lutforge {
namespace {

namespace fs = std::filesystem;

using Lines = std::vector<std::pair<std::string, std::string>>;

std::string Num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string Exact(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void WriteFile(const ExperimentConfig& config, const std::string& name,
               const std::string& content) {
  fs::create_directories(config.out);
  const fs::path path = fs::path(config.out) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

void WriteManifest(const ExperimentConfig& config, const std::string& command,
                   const Lines& extra) {
  std::ostringstream os;
  os << "command=" << command << '\n';
  for (const auto& [key, value] : ResolvedSettings(config)) {
    os << key << '=' << value << '\n';
  }
  const UniformQuantizer q = config.quantizer();
  os << "derived.step=" << Exact(q.step()) << '\n'
     << "derived.noise_sigma=" << Exact(config.model().noise_sigma) << '\n'
     << "note.psd=rectangular window, unnormalized periodogram\n"
     << "note.spur_search=(0, 0.5] with the DC bin excluded\n"
     << "note.discrete_dither=uniform over rho-bit midpoints in the support\n"
     << "note.hpi_fallback=newest input code\n";
  for (int t = 0; t < config.trials; ++t) {
    os << "seed.trial" << t << '=' << TrialSeed(config.seed, t) << '\n';
  }
  for (const auto& [key, value] : extra) os << key << '=' << value << '\n';
  WriteFile(config, "manifest.txt", os.str());
}

std::string PsdCsv(const PowerSpectrum& spectrum) {
  std::ostringstream os;
  WritePsdCsv(os, spectrum);
  return os.str();
}

std::string MetricCsv(const std::vector<MetricReport>& rows) {
  std::ostringstream os;
  WriteMetricCsvHeader(os);
  for (const MetricReport& r : rows) WriteMetricCsvRow(os, r);
  return os.str();
}

std::vector<double> Midpoints(const std::vector<int>& codes,
                              const UniformQuantizer& q) {
  std::vector<double> out(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) out[i] = q.midpoint(codes[i]);
  return out;
}

ToneModel TrialModel(const ExperimentConfig& config, std::uint64_t trial_seed,
                     bool random_phase) {
  ToneModel model = config.model();
  if (random_phase) model.phase = TrialPhase(trial_seed);
  return model;
}

struct DesignedEstimates {
  HpiSet hpi;
  std::vector<LutEstimate> estimates;
  std::vector<double> probabilities;  // of the full index set, when known
};

DesignedEstimates DesignEstimates(const ExperimentConfig& config,
                                  const LikelihoodContext& ctx,
                                  const BitMask& mask, double epsilon) {
  DesignedEstimates out;
  if (config.hpi_method == HpiMethod::kExact) {
    if (mask.popcount() > config.hpi_cap) {
      throw HpiTooLarge("exact index set over 2^" +
                        std::to_string(mask.popcount()) +
                        " indices exceeds hpi_cap; use hpi_method=monte-carlo");
    }
    const std::vector<IndexStatistics> stats =
        EnumerateIndexStatistics(mask, ctx);
    out.hpi = BuildHpiFromStatistics(epsilon, mask, stats);
    const auto keys = out.hpi.KeySet();
    out.estimates = EstimateEntries(stats, &keys);
    for (const IndexStatistics& s : stats) {
      out.probabilities.push_back(s.probability);
    }
    return out;
  }
  out.hpi = BuildHpiMonteCarlo(config.draws, mask, ctx, config.seed,
                               config.threads, config.hpi_cap);
  out.estimates.resize(out.hpi.entries.size());
  ParallelFor(static_cast<int>(out.hpi.entries.size()), config.threads,
              [&](int i) {
                const HpiEntry& e = out.hpi.entries[i];
                out.estimates[i] = {e.key, MmseEstimate(e.digits, mask, ctx)};
              });
  return out;
}

DitherSpec SpecFromConfig(const ExperimentConfig& config) {
  DitherSpec spec;
  spec.alpha = config.alpha;
  spec.architecture = config.architecture;
  spec.tables = config.architecture == Architecture::kIntra ? 1 : config.tables;
  spec.rho = config.rho;
  spec.bits = config.bits;
  return spec;
}

MetricReport Report(const std::string& label, std::span<const double> reference,
                    std::span<const double> stream, double frequency,
                    double exclusion) {
  MetricReport r;
  r.label = label;
  r.mse_db = MseDb(reference, stream);
  r.sfdr_dbc = SfdrDbc(stream, frequency, exclusion);
  return r;
}

void EchoLut(MetricReport& r, const LutTable& lut, std::uint64_t seed) {
  r.entries = lut.entries();
  r.memory_bits = lut.MemoryBits();
  r.beta = lut.mask().popcount();
  r.epsilon = lut.epsilon();
  r.rho = lut.rho();
  r.alpha = lut.spec().alpha;
  r.architecture = ArchitectureName(lut.architecture());
  r.window = lut.window();
  r.seed = seed;
}

std::string EnvelopeRow(const std::string& name,
                        const std::vector<double>& values) {
  const Envelope e = Summarize(values);
  return name + ',' + Num(e.mean) + ',' + Num(e.min) + ',' + Num(e.max) +
         '\n';
}

}  // namespace

Envelope Summarize(const std::vector<double>& values) {
  Envelope e;
  if (values.empty()) return e;
  e.mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  e.min = *lo;
  e.max = *hi;
  return e;
}

LikelihoodContext MakeContext(const ExperimentConfig& config) {
  ValidateConfig(config);
  return LikelihoodContext(config.quantizer(), config.model(),
                           ThetaRule(config.panels, config.order),
                           config.support_threshold);
}

MaskDesign DesignMask(const ExperimentConfig& config,
                      const LikelihoodContext& ctx) {
  MaskDesign design;
  const int bits = config.bits;
  const int window = config.window;
  MaskScorer scorer(ctx, config.heuristic, config.threads);
  if (!config.mask.empty()) {
    design.mask = BitMask::FromString(config.mask, bits, window);
    design.scores = {scorer.Score(design.mask)};
  } else if (config.search == MaskSearch::kNaive) {
    design.mask = NaiveMask(config.beta, bits, window);
    design.scores = {scorer.Score(design.mask)};
  } else if (config.search == MaskSearch::kGreedy) {
    GreedyResult g = GreedyMask(config.beta, scorer);
    design.mask = g.trajectory.back();
    design.trajectory = std::move(g.trajectory);
    design.scores = std::move(g.scores);
  } else {
    const BruteForceResult r =
        BruteForceMask(config.beta, scorer, config.brute_force_cap);
    design.mask = r.mask;
    design.scores = {r.score};
  }
  design.evaluations = scorer.evaluations();
  design.unstable = scorer.unstable();
  return design;
}

std::vector<SimulateTrialResult> RunSimulate(const ExperimentConfig& config) {
  ValidateConfig(config);
  const UniformQuantizer q = config.quantizer();
  const int trials = config.trials;
  std::vector<SimulateTrialResult> results(trials);
  std::vector<PowerSpectrum> first(3);
  ParallelFor(trials, config.threads, [&](int t) {
    const std::uint64_t ts = TrialSeed(config.seed, t);
    const ToneModel model = TrialModel(config, ts, config.random_phase);
    const ToneSequence plain = GenerateSequence(model, q, config.samples, ts);
    const ToneSequence dith =
        GenerateSequence(model, q, config.samples, ts, config.alpha);
    const std::vector<double> quantized = Midpoints(plain.codes, q);
    const std::vector<double> dithered = Midpoints(dith.codes, q);
    const PowerSpectrum p_in = Periodogram(plain.noisy);
    const PowerSpectrum p_q = Periodogram(quantized);
    const PowerSpectrum p_d = Periodogram(dithered);
    SimulateTrialResult& r = results[t];
    r.input_sfdr_dbc = SfdrDbc(p_in, config.frequency, config.exclusion);
    r.quantized_mse_db = MseDb(plain.clean, quantized);
    r.dithered_mse_db = MseDb(dith.clean, dithered);
    r.quantized_error_db = MseDb(plain.noisy, quantized);
    r.dithered_error_db = MseDb(dith.noisy, dithered);
    r.quantized_sfdr_dbc = SfdrDbc(p_q, config.frequency, config.exclusion);
    r.dithered_sfdr_dbc = SfdrDbc(p_d, config.frequency, config.exclusion);
    if (t == 0) first = {p_in, p_q, p_d};
  });

  std::ostringstream metrics;
  metrics << "trial,seed,input_sfdr_dbc,quantized_mse_db,dithered_mse_db,"
             "quantized_error_db,dithered_error_db,quantized_sfdr_dbc,"
             "dithered_sfdr_dbc\n";
  std::vector<double> cols[9];
  for (int t = 0; t < trials; ++t) {
    const SimulateTrialResult& r = results[t];
    const double row[] = {r.input_sfdr_dbc,    r.quantized_mse_db,
                          r.dithered_mse_db,   r.quantized_error_db,
                          r.dithered_error_db, r.quantized_sfdr_dbc,
                          r.dithered_sfdr_dbc,
                          r.dithered_error_db - r.quantized_error_db,
                          r.dithered_sfdr_dbc - r.quantized_sfdr_dbc};
    metrics << t << ',' << TrialSeed(config.seed, t);
    for (int i = 0; i < 7; ++i) metrics << ',' << Num(row[i]);
    metrics << '\n';
    for (int i = 0; i < 9; ++i) cols[i].push_back(row[i]);
  }
  const char* const names[] = {
      "input_sfdr_dbc",    "quantized_mse_db",   "dithered_mse_db",
      "quantized_error_db", "dithered_error_db", "quantized_sfdr_dbc",
      "dithered_sfdr_dbc", "dither_mse_increase_db", "dither_sfdr_gain_dbc"};
  std::string envelope = "metric,mean,min,max\n";
  for (int i = 0; i < 9; ++i) envelope += EnvelopeRow(names[i], cols[i]);

  WriteFile(config, "metrics.csv", metrics.str());
  WriteFile(config, "envelope.csv", envelope);
  WriteFile(config, "psd_input.csv", PsdCsv(first[0]));
  WriteFile(config, "psd_quantized.csv", PsdCsv(first[1]));
  WriteFile(config, "psd_dithered.csv", PsdCsv(first[2]));
  WriteManifest(config, "simulate",
                {{"note.pre_dither", "uniform, peak alpha*step/2"},
                 {"note.error_reference", "quantizer input (tone plus noise)"}});
  return results;
}

MaskDesign RunDesignMask(const ExperimentConfig& config) {
  const LikelihoodContext ctx = MakeContext(config);
  MaskDesign design = DesignMask(config, ctx);
  const int length = config.bits * config.window;
  std::ostringstream trace;
  trace << "step,mask,score,evaluations\n";
  if (!design.trajectory.empty()) {
    for (size_t s = 0; s < design.trajectory.size(); ++s) {
      trace << s << ',' << design.trajectory[s].ToString() << ','
            << Exact(design.scores[s]) << ','
            << GreedyEvaluationCount(static_cast<int>(s), length) << '\n';
    }
  } else {
    trace << design.mask.popcount() << ',' << design.mask.ToString() << ','
          << Exact(design.scores.front()) << ',' << design.evaluations << '\n';
  }
  WriteFile(config, "mask.txt", design.mask.ToString() + '\n');
  WriteFile(config, "trace.csv", trace.str());
  WriteManifest(config, "design-mask",
                {{"result.mask", design.mask.ToString()},
                 {"result.evaluations", std::to_string(design.evaluations)},
                 {"result.unstable", design.unstable ? "true" : "false"}});
  return design;
}

BuildHpiResult RunBuildHpi(const ExperimentConfig& config) {
  const LikelihoodContext ctx = MakeContext(config);
  const BitMask mask = DesignMask(config, ctx).mask;
  BuildHpiResult result;
  const bool exact_feasible = mask.popcount() <= config.hpi_cap;
  std::vector<IndexStatistics> stats;
  std::unordered_map<std::uint64_t, double> probability;
  if (exact_feasible) {
    stats = EnumerateIndexStatistics(mask, ctx);
    for (const IndexStatistics& s : stats) probability[s.key] = s.probability;
  }
  if (config.hpi_method == HpiMethod::kExact) {
    if (!exact_feasible) {
      throw HpiTooLarge("exact index set exceeds hpi_cap; use "
                        "hpi_method=monte-carlo");
    }
    result.sets.push_back(BuildHpiFromStatistics(config.epsilon, mask, stats));
    result.exact_mass.push_back(result.sets[0].coverage);
  } else {
    for (int t = 0; t < config.trials; ++t) {
      const std::uint64_t ts = TrialSeed(config.seed, t);
      result.sets.push_back(BuildHpiMonteCarlo(config.draws, mask, ctx, ts,
                                               config.threads, config.hpi_cap));
      if (exact_feasible) {
        double mass = 0.0;
        for (const HpiEntry& e : result.sets.back().entries) {
          const auto it = probability.find(e.key);
          if (it != probability.end()) mass += it->second;
        }
        result.exact_mass.push_back(mass);
      }
    }
    if (exact_feasible) {
      std::vector<double> probs;
      probs.reserve(stats.size());
      for (const IndexStatistics& s : stats) probs.push_back(s.probability);
      result.expected_coverage =
          ExpectedCoverage(static_cast<double>(config.draws), probs);
    }
  }

  std::ostringstream coverage;
  coverage << "trial,seed,entries,coverage,exact_mass,estimated\n";
  for (size_t t = 0; t < result.sets.size(); ++t) {
    const HpiSet& s = result.sets[t];
    coverage << t << ',' << s.seed << ',' << s.entries.size() << ','
             << Exact(s.coverage) << ','
             << (t < result.exact_mass.size() ? Exact(result.exact_mass[t])
                                              : std::string("nan"))
             << ',' << (s.estimated ? "true" : "false") << '\n';
  }
  std::ostringstream hpi;
  WriteHpiSet(hpi, result.sets[0]);
  WriteFile(config, "hpi.txt", hpi.str());
  WriteFile(config, "coverage.csv", coverage.str());
  Lines extra = {{"result.mask", mask.ToString()},
                 {"result.entries", std::to_string(result.sets[0].entries.size())}};
  if (result.expected_coverage >= 0.0) {
    extra.push_back({"result.expected_coverage",
                     Exact(result.expected_coverage)});
  }
  if (!result.exact_mass.empty()) {
    extra.push_back({"result.mean_exact_mass",
                     Exact(Summarize(result.exact_mass).mean)});
  }
  WriteManifest(config, "build-hpi", extra);
  return result;
}

LutTable RunBuildLut(const ExperimentConfig& config) {
  const LikelihoodContext ctx = MakeContext(config);
  const BitMask mask = DesignMask(config, ctx).mask;
  const DesignedEstimates design =
      DesignEstimates(config, ctx, mask, config.epsilon);
  LutTable lut = BuildLut(design.estimates, SpecFromConfig(config), mask,
                          config.epsilon, config.seed);
  std::ostringstream text, hex;
  WriteLut(text, lut);
  WriteHex(hex, lut);
  WriteFile(config, "lut.txt", text.str());
  WriteFile(config, "lut.hex", hex.str());
  WriteManifest(config, "build-lut",
                {{"result.mask", mask.ToString()},
                 {"result.entries", std::to_string(lut.entries())},
                 {"result.memory_bits", std::to_string(lut.MemoryBits())},
                 {"result.hpi_coverage", Exact(design.hpi.coverage)}});
  return lut;
}

std::vector<EvaluateTrialResult> RunEvaluate(const ExperimentConfig& config) {
  ValidateConfig(config);
  if (config.lut.empty()) throw ConfigError("evaluate needs lut=<path>");
  std::ifstream in(config.lut);
  if (!in) throw ConfigError("cannot open LUT file '" + config.lut + "'");
  LutTable lut;
  try {
    lut = ReadLut(in);
  } catch (const std::exception& e) {
    throw ConfigError("LUT file '" + config.lut + "': " + e.what());
  }
  if (lut.bits() != config.bits || lut.window() != config.window) {
    throw ConfigError("LUT b/N differ from the configured b/N");
  }
  const UniformQuantizer q = config.quantizer();
  std::vector<EvaluateTrialResult> results(config.trials);
  std::vector<PowerSpectrum> first(2);
  ParallelFor(config.trials, config.threads, [&](int t) {
    const std::uint64_t ts = TrialSeed(config.seed, t);
    const SimulatedRecord record = SimulateRecord(
        TrialModel(config, ts, config.random_phase), q, config.samples, ts);
    const LutStreams streams = EvaluateLut(lut, record, ts);
    const std::vector<double> raw = RawStream(record, q);
    EvaluateTrialResult& r = results[t];
    const std::string suffix = "/trial" + std::to_string(t);
    r.raw = Report("raw" + suffix, record.Reference(), raw, config.frequency,
                   config.exclusion);
    r.stored = Report("stored" + suffix, record.Reference(), streams.stored,
                      config.frequency, config.exclusion);
    r.output = Report("output" + suffix, record.Reference(), streams.output,
                      config.frequency, config.exclusion);
    for (MetricReport* m : {&r.raw, &r.stored, &r.output}) {
      EchoLut(*m, lut, ts);
      m->mse_gain_db = r.raw.mse_db - m->mse_db;
      m->sfdr_gain_dbc = m->sfdr_dbc - r.raw.sfdr_dbc;
    }
    r.stats = streams.stats;
    if (t == 0) first = {Periodogram(raw), Periodogram(streams.output)};
  });

  std::vector<MetricReport> rows;
  std::ostringstream lookups;
  lookups << "trial,lookups,fallbacks,empty_dither\n";
  std::vector<double> mse, sfdr, mse_gain, sfdr_gain;
  for (int t = 0; t < config.trials; ++t) {
    const EvaluateTrialResult& r = results[t];
    rows.insert(rows.end(), {r.raw, r.stored, r.output});
    lookups << t << ',' << r.stats.lookups << ',' << r.stats.fallbacks << ','
            << r.stats.empty_dither << '\n';
    mse.push_back(r.output.mse_db);
    sfdr.push_back(r.output.sfdr_dbc);
    mse_gain.push_back(r.stored.mse_gain_db);
    sfdr_gain.push_back(r.output.sfdr_gain_dbc);
  }
  std::string envelope = "metric,mean,min,max\n";
  envelope += EnvelopeRow("output_mse_db", mse);
  envelope += EnvelopeRow("output_sfdr_dbc", sfdr);
  envelope += EnvelopeRow("stored_mse_gain_db", mse_gain);
  envelope += EnvelopeRow("output_sfdr_gain_dbc", sfdr_gain);
  WriteFile(config, "metrics.csv", MetricCsv(rows));
  WriteFile(config, "envelope.csv", envelope);
  WriteFile(config, "lookups.csv", lookups.str());
  WriteFile(config, "psd_raw.csv", PsdCsv(first[0]));
  WriteFile(config, "psd_output.csv", PsdCsv(first[1]));
  WriteManifest(config, "evaluate",
                {{"lut.mask", lut.mask().ToString()},
                 {"lut.arch", ArchitectureName(lut.architecture())},
                 {"lut.entries", std::to_string(lut.entries())},
                 {"lut.seed", std::to_string(lut.seed())}});
  return results;
}

std::vector<SweepPoint> RunSweepAlpha(const ExperimentConfig& config) {
  const LikelihoodContext ctx = MakeContext(config);
  const BitMask mask = DesignMask(config, ctx).mask;
  const DesignedEstimates design =
      DesignEstimates(config, ctx, mask, config.epsilon);
  const UniformQuantizer q = config.quantizer();
  const int trials = config.trials;
  const int alphas = static_cast<int>(config.alpha_grid.size());

  struct Cell {
    double sfdr, mse, stored_sfdr, stored_mse;
  };
  std::vector<std::vector<Cell>> cells(trials, std::vector<Cell>(alphas));
  std::vector<double> raw_sfdr(trials), raw_mse(trials), phases(trials);
  ParallelFor(trials, config.threads, [&](int t) {
    const std::uint64_t ts = TrialSeed(config.seed, t);
    const ToneModel model = TrialModel(config, ts, true);
    phases[t] = model.phase;
    const SimulatedRecord record =
        SimulateRecord(model, q, config.samples, ts);
    const std::vector<double> raw = RawStream(record, q);
    raw_sfdr[t] = SfdrDbc(raw, config.frequency, config.exclusion);
    raw_mse[t] = MseDb(record.Reference(), raw);
    for (int a = 0; a < alphas; ++a) {
      DitherSpec spec = SpecFromConfig(config);
      spec.alpha = config.alpha_grid[a];
      const LutTable lut =
          BuildLut(design.estimates, spec, mask, config.epsilon, ts);
      const LutStreams s = EvaluateLut(lut, record, ts);
      cells[t][a] = {SfdrDbc(s.output, config.frequency, config.exclusion),
                     MseDb(record.Reference(), s.output),
                     SfdrDbc(s.stored, config.frequency, config.exclusion),
                     MseDb(record.Reference(), s.stored)};
    }
  });

  std::vector<SweepPoint> points(alphas);
  std::ostringstream per_trial;
  per_trial << "alpha,trial,seed,phase,sfdr_dbc,sfdr_gain_dbc,mse_db,"
               "stored_sfdr_dbc,stored_mse_db,raw_sfdr_dbc,raw_mse_db\n";
  for (int a = 0; a < alphas; ++a) {
    SweepPoint& p = points[a];
    p.alpha = config.alpha_grid[a];
    for (int t = 0; t < trials; ++t) {
      const Cell& c = cells[t][a];
      p.sfdr_dbc.push_back(c.sfdr);
      p.sfdr_gain_dbc.push_back(c.sfdr - raw_sfdr[t]);
      p.mse_db.push_back(c.mse);
      p.stored_sfdr_dbc.push_back(c.stored_sfdr);
      p.stored_mse_db.push_back(c.stored_mse);
      per_trial << Num(p.alpha) << ',' << t << ','
                << TrialSeed(config.seed, t) << ',' << Num(phases[t]) << ','
                << Num(c.sfdr) << ',' << Num(c.sfdr - raw_sfdr[t]) << ','
                << Num(c.mse) << ',' << Num(c.stored_sfdr) << ','
                << Num(c.stored_mse) << ',' << Num(raw_sfdr[t]) << ','
                << Num(raw_mse[t]) << '\n';
    }
  }
  std::ostringstream sweep;
  sweep << "alpha,statistic";
  for (const char* name : {"sfdr_dbc", "sfdr_gain_dbc", "mse_db",
                           "stored_sfdr_dbc", "stored_mse_db"}) {
    sweep << ',' << name;
  }
  sweep << '\n';
  for (const SweepPoint& p : points) {
    const Envelope e[] = {Summarize(p.sfdr_dbc), Summarize(p.sfdr_gain_dbc),
                          Summarize(p.mse_db), Summarize(p.stored_sfdr_dbc),
                          Summarize(p.stored_mse_db)};
    const char* stat_names[] = {"mean", "min", "max"};
    for (int s = 0; s < 3; ++s) {
      sweep << Num(p.alpha) << ',' << stat_names[s];
      for (const Envelope& x : e) {
        sweep << ',' << Num(s == 0 ? x.mean : s == 1 ? x.min : x.max);
      }
      sweep << '\n';
    }
  }
  WriteFile(config, "sweep.csv", sweep.str());
  WriteFile(config, "sweep_trials.csv", per_trial.str());
  WriteManifest(config, "sweep-alpha",
                {{"result.mask", mask.ToString()},
                 {"result.entries", std::to_string(design.estimates.size())},
                 {"note.trial_protocol",
                  "phase and noise drawn independently per trial"}});
  return points;
}

ParetoResult RunPareto(const ExperimentConfig& config) {
  const LikelihoodContext ctx = MakeContext(config);
  const UniformQuantizer q = config.quantizer();
  const int max_beta =
      *std::max_element(config.beta_grid.begin(), config.beta_grid.end());
  if (max_beta > config.bits * config.window) {
    throw ConfigError("beta_grid values must be in 0..bN");
  }

  std::vector<BitMask> masks;
  if (config.search == MaskSearch::kGreedy) {
    MaskScorer scorer(ctx, config.heuristic, config.threads);
    const GreedyResult g = GreedyMask(max_beta, scorer);
    for (int beta : config.beta_grid) masks.push_back(g.trajectory[beta]);
  } else {
    for (int beta : config.beta_grid) {
      ExperimentConfig c = config;
      c.beta = beta;
      c.mask.clear();
      masks.push_back(DesignMask(c, ctx).mask);
    }
  }

  std::vector<SimulatedRecord> records(config.trials);
  std::vector<double> raw_mse(config.trials), raw_sfdr(config.trials);
  ParallelFor(config.trials, config.threads, [&](int t) {
    const std::uint64_t ts = TrialSeed(config.seed, t);
    records[t] = SimulateRecord(TrialModel(config, ts, config.random_phase), q,
                                config.samples, ts);
    const std::vector<double> raw = RawStream(records[t], q);
    raw_mse[t] = MseDb(records[t].Reference(), raw);
    raw_sfdr[t] = SfdrDbc(raw, config.frequency, config.exclusion);
  });
  const double raw_mse_mean = Summarize(raw_mse).mean;
  const double raw_sfdr_mean = Summarize(raw_sfdr).mean;

  ParetoResult result;
  const int eps_count = static_cast<int>(config.epsilon_grid.size());
  const int rho_count = static_cast<int>(config.rho_grid.size());
  for (size_t b = 0; b < masks.size(); ++b) {
    const BitMask& mask = masks[b];
    if (mask.popcount() > config.hpi_cap) {
      throw HpiTooLarge("pareto beta exceeds hpi_cap");
    }
    const std::vector<IndexStatistics> stats =
        EnumerateIndexStatistics(mask, ctx);
    std::vector<MetricReport> block(eps_count * rho_count);
    ParallelFor(eps_count * rho_count, config.threads, [&](int g) {
      const double epsilon = config.epsilon_grid[g / rho_count];
      const int rho = config.rho_grid[g % rho_count];
      const HpiSet hpi = BuildHpiFromStatistics(epsilon, mask, stats);
      const auto keys = hpi.KeySet();
      DitherSpec spec;
      spec.alpha = config.pareto_alpha;
      spec.architecture = Architecture::kPost;
      spec.rho = rho;
      spec.bits = config.bits;
      const LutTable lut = BuildLut(EstimateEntries(stats, &keys), spec, mask,
                                    epsilon, config.seed);
      std::vector<double> mse, sfdr;
      for (int t = 0; t < config.trials; ++t) {
        const LutStreams s =
            EvaluateLut(lut, records[t], TrialSeed(config.seed, t));
        mse.push_back(MseDb(records[t].Reference(), s.stored));
        sfdr.push_back(SfdrDbc(s.output, config.frequency, config.exclusion));
      }
      MetricReport& r = block[g];
      r.label = "beta" + std::to_string(mask.popcount()) + "_eps" +
                Num(epsilon) + "_rho" + std::to_string(rho);
      r.mse_db = Summarize(mse).mean;
      r.sfdr_dbc = Summarize(sfdr).mean;
      r.mse_gain_db = raw_mse_mean - r.mse_db;
      r.sfdr_gain_dbc = r.sfdr_dbc - raw_sfdr_mean;
      EchoLut(r, lut, config.seed);
    });
    result.grid.insert(result.grid.end(), block.begin(), block.end());
  }

  std::vector<ParetoPoint> mse_points, sfdr_points;
  for (const MetricReport& r : result.grid) {
    mse_points.push_back({r.memory_bits, r.mse_db});
    sfdr_points.push_back({r.memory_bits, r.sfdr_dbc});
  }
  result.mse_front =
      ParetoFront(mse_points, MetricOrientation::kLowerIsBetter);
  result.sfdr_front =
      ParetoFront(sfdr_points, MetricOrientation::kHigherIsBetter);
  std::vector<MetricReport> mse_rows, sfdr_rows;
  for (size_t i : result.mse_front) mse_rows.push_back(result.grid[i]);
  for (size_t i : result.sfdr_front) sfdr_rows.push_back(result.grid[i]);
  WriteFile(config, "grid.csv", MetricCsv(result.grid));
  WriteFile(config, "pareto_mse.csv", MetricCsv(mse_rows));
  WriteFile(config, "pareto_sfdr.csv", MetricCsv(sfdr_rows));
  WriteManifest(config, "pareto",
                {{"result.raw_mse_db", Num(raw_mse_mean)},
                 {"result.raw_sfdr_dbc", Num(raw_sfdr_mean)},
                 {"note.mse_stream", "stored rho-bit estimate"},
                 {"note.sfdr_stream", "post-table dithered b-bit output"}});
  return result;
}

void RunExportHex(const ExperimentConfig& config) {
  ValidateConfig(config);
  if (config.lut.empty()) throw ConfigError("export-hex needs lut=<path>");
  std::ifstream in(config.lut);
  if (!in) throw ConfigError("cannot open LUT file '" + config.lut + "'");
  LutTable lut;
  try {
    lut = ReadLut(in);
  } catch (const std::exception& e) {
    throw ConfigError("LUT file '" + config.lut + "': " + e.what());
  }
  std::ostringstream hex;
  WriteHex(hex, lut);
  WriteFile(config, "lut.hex", hex.str());
  WriteManifest(config, "export-hex",
                {{"lut.entries", std::to_string(lut.entries())},
                 {"lut.tables", std::to_string(lut.tables())}});
}

const std::vector<std::string>& CommandNames() {
  static const std::vector<std::string> names = {
      "simulate", "design-mask", "build-hpi", "build-lut",
      "evaluate", "sweep-alpha", "pareto",    "export-hex"};
  return names;
}

void RunCommand(const std::string& name, const ExperimentConfig& config) {
  if (name == "simulate") {
    RunSimulate(config);
  } else if (name == "design-mask") {
    RunDesignMask(config);
  } else if (name == "build-hpi") {
    RunBuildHpi(config);
  } else if (name == "build-lut") {
    RunBuildLut(config);
  } else if (name == "evaluate") {
    RunEvaluate(config);
  } else if (name == "sweep-alpha") {
    RunSweepAlpha(config);
  } else if (name == "pareto") {
    RunPareto(config);
  } else if (name == "export-hex") {
    RunExportHex(config);
  } else {
    throw ConfigError("unknown command '" + name + "'");
  }
}

}  // namespace lutforge
