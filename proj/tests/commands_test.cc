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

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "lutforge/config.h"

namespace lutforge {
namespace {

namespace fs = std::filesystem;

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::map<std::string, std::string> Snapshot(const fs::path& dir) {
  std::map<std::string, std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    out[entry.path().filename().string()] = Slurp(entry.path());
  }
  return out;
}

fs::path Scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("lutforge_test_" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig Small(const fs::path& out) {
  ExperimentConfig c;
  c.window = 4;
  c.beta = 6;
  c.samples = 4000;
  c.trials = 2;
  c.draws = 300;
  c.out = out.string();
  c.lut = (out / "lut.txt").string();
  c.beta_grid = {3, 6};
  c.epsilon_grid = {0.9, 1.0};
  c.rho_grid = {6, 8};
  c.alpha_grid = {0.0, 1.0};
  return c;
}

TEST(CommandsTest, EveryCommandIsDeterministic) {
  const fs::path dir = Scratch("determinism");
  ExperimentConfig c = Small(dir);
  // build-lut first so evaluate and export-hex have an input.
  const std::vector<std::string> order = {"build-lut", "simulate", "design-mask",
                                          "build-hpi", "evaluate", "sweep-alpha",
                                          "pareto", "export-hex"};
  ASSERT_EQ(std::set<std::string>(order.begin(), order.end()),
            std::set<std::string>(CommandNames().begin(), CommandNames().end()));
  for (const std::string& name : order) {
    c.out = (dir / name).string();
    if (name == "build-lut") c.lut = (dir / name / "lut.txt").string();
    RunCommand(name, c);
    const auto first = Snapshot(c.out);
    EXPECT_TRUE(first.count("manifest.txt")) << name;
    EXPECT_GE(first.size(), 2u) << name;
    RunCommand(name, c);
    EXPECT_EQ(Snapshot(c.out), first) << name;
  }
  EXPECT_THROW(RunCommand("plot", c), std::invalid_argument);
}

TEST(CommandsTest, ManifestEchoesResolvedConfig) {
  const fs::path dir = Scratch("manifest");
  ExperimentConfig c = Small(dir);
  RunCommand("simulate", c);
  const std::string manifest = Slurp(dir / "manifest.txt");
  EXPECT_NE(manifest.find("command=simulate\n"), std::string::npos);
  for (const auto& [key, value] : ResolvedSettings(c)) {
    EXPECT_NE(manifest.find("\n" + key + "=" + value + "\n"), std::string::npos)
        << key;
  }
  EXPECT_NE(manifest.find("seed.trial1="), std::string::npos);
  // Fuzz: changing any output-affecting key changes the manifest.
  const std::map<std::string, std::string> changes = {
      {"sigma_ratio", "0.2"}, {"F", "0.1"}, {"seed", "7"},     {"phase", "0.3"},
      {"A", "0.8"},           {"samples", "3000"},           {"f_o", "0.002"}};
  for (const auto& [key, value] : changes) {
    ExperimentConfig other = c;
    SetConfigValue(other, key, value);
    RunCommand("simulate", other);
    EXPECT_NE(Slurp(dir / "manifest.txt"), manifest) << key;
  }
}

TEST(CommandsTest, SimulateReportsDitherEffect) {
  ExperimentConfig c = Small(Scratch("simulate"));
  c.samples = 100000;
  c.trials = 1;
  const auto results = RunSimulate(c);
  ASSERT_EQ(results.size(), 1u);
  EXPECT_NEAR(results[0].dithered_error_db - results[0].quantized_error_db, 3.0, 0.5);
  EXPECT_GE(results[0].dithered_sfdr_dbc - results[0].quantized_sfdr_dbc, 15.0);
}

TEST(CommandsTest, ParetoReducedGridIsLive) {
  ExperimentConfig c;
  c.out = Scratch("pareto").string();
  const ParetoResult r = RunPareto(c);
  EXPECT_EQ(r.grid.size(), 5u * 4u * 4u);
  ASSERT_FALSE(r.mse_front.empty());
  ASSERT_FALSE(r.sfdr_front.empty());
  std::set<std::int64_t> sizes;
  for (size_t i : r.mse_front) sizes.insert(r.grid[i].memory_bits);
  EXPECT_GE(sizes.size(), 3u);
  // The largest beta should reach the cheapest well-performing points.
  bool deep_beta = false;
  for (size_t i : r.mse_front) deep_beta = deep_beta || r.grid[i].beta >= 12;
  EXPECT_TRUE(deep_beta);
}

int RunCli(const std::string& args) {
  const std::string command = std::string(LUTFORGE_CLI) + " " + args +
                              " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  const fs::path dir = Scratch("cli");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "N=4\nbeta=6\nsamples=2000\n";
  }
  const std::string base = "--config " + (dir / "run.cfg").string() +
                           " --out " + (dir / "out").string();
  EXPECT_EQ(RunCli("simulate " + base + " --seed 3"), 0);
  EXPECT_TRUE(fs::exists(dir / "out" / "metrics.csv"));
  EXPECT_NE(Slurp(dir / "out" / "manifest.txt").find("seed=3\n"), std::string::npos);
  EXPECT_EQ(RunCli("simulate " + base + " --set bogus=1"), 2);
  EXPECT_EQ(RunCli("simulate " + base + " --set beta=99"), 2);
  EXPECT_EQ(RunCli("simulate --config /nonexistent.cfg"), 2);
  EXPECT_EQ(RunCli("frobnicate"), 2);
  EXPECT_EQ(RunCli("evaluate " + base), 2);  // no LUT given
}

}  // namespace
}  // namespace lutforge
