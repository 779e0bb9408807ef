// Copyright 2026 The STQS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "stqs/config.h"

using namespace stqs;

namespace {

const char* kFig10 = R"(
experiment:
  kind: dark_matter
  phi: 0.1
  shots: 20000
noise:
  platform: rydberg
sweep:
  axes:
    n_dm: [4, 6, 8, 10]
    noise_preset: [noiseless, default, readout_off, sge_off, tge_off]
output:
  master_seed: 10
)";

std::size_t data_rows(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#' && line.rfind("experiment,", 0) != 0) ++n;
  }
  return n;
}

}  // namespace

TEST(Config, MinimalDarkMatterFillsDefaults) {
  const ParsedConfig pc = parse_config_string(R"(
experiment:
  kind: dark_matter
  n_dm: 4
  phi: 0.1
noise:
  platform: superconducting
)");
  EXPECT_EQ(pc.experiment.shots, 1000000u);
  EXPECT_EQ(pc.experiment.backend, Backend::dense);
  EXPECT_EQ(pc.experiment.profile, default_profile(Platform::superconducting));
}

TEST(Config, LargeCircuitGoesToTrajectory) {
  const ParsedConfig pc = parse_config_string("experiment:\n  kind: dark_matter\n  n_dm: 14\n  phi: 0.1\n");
  EXPECT_EQ(pc.experiment.backend, Backend::trajectory);
}

TEST(Config, UnknownKeyNamedWithLine) {
  try {
    parse_config_string("experiment:\n  kind: radar\n  shotz: 100\n", "bad.yaml");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("shotz"), std::string::npos);
    EXPECT_NE(msg.find("bad.yaml:3"), std::string::npos);
  }
}

TEST(Config, EpsilonOutOfRange) {
  EXPECT_THROW(parse_config_string("experiment:\n  kind: radar\nnoise:\n  epsilon: 1.3\n"), ConfigError);
}

TEST(Config, InversionDomainChecked) {
  EXPECT_THROW(parse_config_string("experiment:\n  kind: radar\n  n_s: 5\n  n_f: 5\n"), ConfigError);
}

TEST(Config, PresetConflictsWithEpsilon) {
  EXPECT_THROW(parse_config_string("experiment:\n  kind: radar\nnoise:\n  preset: default\n  epsilon: 0.5\n"),
               ConfigError);
}

TEST(Config, MissingFile) { EXPECT_THROW(parse_config("/nonexistent/stqs.yaml"), ConfigError); }

TEST(Config, EmitRoundTrip) {
  const ParsedConfig pc = parse_config_string(R"(
experiment:
  kind: radar
  phi_soil: 0.31
  phi_free: 0.1
noise:
  platform: nv_center
  epsilon: 0.3
  classes: [readout, t2]
  roles: [memory]
  profile:
    t2: 4.0e-5
sweep:
  repetitions: 3
  axes:
    n_sensors: [1, 2]
    error_classes: [readout, single_gate+two_gate]
output:
  format: jsonl
  master_seed: 77
)");
  const ParsedConfig again = parse_config_string(emit_config(pc));
  EXPECT_EQ(again, pc);
}

TEST(Config, GridIsRowMajor) {
  const ParsedConfig pc = parse_config_string(kFig10);
  const auto grid = expand_grid(pc);
  ASSERT_EQ(grid.size(), 20u);
  EXPECT_EQ(grid[1].config.n_dm, 4);
  EXPECT_EQ(grid[5].config.n_dm, 6);
  EXPECT_DOUBLE_EQ(grid[0].config.scope.epsilon, 1.0);
  EXPECT_DOUBLE_EQ(grid[1].config.scope.epsilon, 0.0);
}

TEST(Config, RowSeedStable) {
  EXPECT_EQ(row_seed(1, {0, 1}, 0), row_seed(1, {0, 1}, 0));
  EXPECT_NE(row_seed(1, {0, 1}, 0), row_seed(1, {1, 0}, 0));
  EXPECT_NE(row_seed(1, {0, 1}, 0), row_seed(2, {0, 1}, 0));
  EXPECT_NE(row_seed(1, {0, 1}, 0), row_seed(1, {0, 1}, 1));
}

TEST(Execute, Fig10ManifestGivesTwentyRows) {
  const ParsedConfig pc = parse_config_string(kFig10);
  std::ostringstream out, log;
  const ExecutionSummary s = execute(pc, out, log);
  EXPECT_EQ(s.exit_code, 0) << log.str();
  EXPECT_EQ(s.rows, 20u);
  EXPECT_EQ(data_rows(out.str()), 20u);
  EXPECT_EQ(out.str().rfind("experiment,platform,n_sensors", 0), 0u);
}

std::string strip_footer(const std::string& s) { return s.substr(0, s.find("\n#")); }

TEST(Execute, DeterministicAcrossRunsAndJobs) {
  ParsedConfig pc = parse_config_string(R"(
experiment:
  kind: dark_matter
  phi: 0.1
  shots: 5000
noise:
  platform: rydberg
sweep:
  repetitions: 2
  axes:
    n_dm: [3, 4, 5]
    noise_preset: [default, readout_off]
output:
  master_seed: 10
)");
  std::ostringstream a, b, c, log;
  execute(pc, a, log);
  execute(pc, b, log);
  pc.manifest.jobs = 3;
  execute(pc, c, log);
  EXPECT_EQ(strip_footer(a.str()), strip_footer(b.str()));
  EXPECT_EQ(strip_footer(a.str()), strip_footer(c.str()));
}

TEST(Execute, InvalidPointGivesPartialFailure) {
  const ParsedConfig pc = parse_config_string(R"(
experiment:
  kind: radar
  shots: 1000
sweep:
  axes:
    n_sensors: [2, 3, 4]
)");
  std::ostringstream out, log;
  const ExecutionSummary s = execute(pc, out, log);
  EXPECT_EQ(s.exit_code, 2);
  EXPECT_EQ(s.rows, 2u);
  EXPECT_EQ(s.failed, 1u);
  EXPECT_NE(log.str().find("grid point 2"), std::string::npos);
}

TEST(Execute, JsonlRowsCarryMasterSeed) {
  ParsedConfig pc = parse_config_string("experiment:\n  kind: dark_matter\n  shots: 1000\noutput:\n  format: jsonl\n  master_seed: 42\n");
  std::ostringstream out, log;
  execute(pc, out, log);
  EXPECT_NE(out.str().find("\"master_seed\":42"), std::string::npos);
  EXPECT_NE(out.str().find("\"footer\""), std::string::npos);
}

TEST(Manifests, ShippedManifestsParse) {
  for (const char* fig : {"5", "8", "9", "10", "11", "12", "14", "15", "16", "17"}) {
    const std::string path = std::string(STQS_MANIFEST_DIR) + "/fig" + fig + ".yaml";
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    const ParsedConfig pc = parse_config(path);
    for (const auto& g : expand_grid(pc)) EXPECT_TRUE(g.error.empty()) << path << ": " << g.error;
  }
}
