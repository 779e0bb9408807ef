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

#ifndef STQS_CONFIG_H
#define STQS_CONFIG_H

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "stqs/experiments.h"

namespace stqs {

/// Schema or range problem in a config document. The message carries the
/// line number when one is known.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, jsonl };

/// One sweep axis: a key plus its values, kept as scalar strings (or
/// '+'-joined lists for error_classes and role_scope) until applied.
struct SweepAxis {
  std::string name;
  std::vector<std::string> values;
  bool operator==(const SweepAxis&) const = default;
};

struct RunManifest {
  std::string config_path;
  std::string output_path;  // empty = stdout
  OutputFormat format = OutputFormat::csv;
  std::uint64_t master_seed = 1;
  int jobs = 1;
  int repetitions = 1;
  bool backend_auto = true;  // dense up to 12 qubits, trajectory beyond
  std::vector<SweepAxis> axes;
  bool operator==(const RunManifest&) const = default;
};

struct ParsedConfig {
  ExperimentConfig experiment;
  RunManifest manifest;
  bool operator==(const ParsedConfig&) const = default;
};

/// Names accepted as sweep axes.
const std::vector<std::string>& sweep_axis_names();

/// Noise presets: (epsilon, classes) pairs applied on the platform default.
const std::vector<std::string>& noise_preset_names();
void apply_noise_preset(ExperimentConfig& config, const std::string& preset);

ParsedConfig parse_config_string(const std::string& text, const std::string& origin = "<string>");
ParsedConfig parse_config(const std::string& path);

/// Effective config with every default resolved; parse(emit(c)) == c.
std::string emit_config(const ParsedConfig& config);

/// Expands the grid in row-major order over the axes as listed. Points that
/// fail to apply keep an error message instead of a config.
struct GridEntry {
  std::vector<std::size_t> index;
  ExperimentConfig config;
  std::string error;
};
std::vector<GridEntry> expand_grid(const ParsedConfig& config);

/// Stable 64-bit FNV-1a seed for (master seed, grid index, repetition).
std::uint64_t row_seed(std::uint64_t master_seed, const std::vector<std::size_t>& index, int repetition);

const std::vector<std::string>& csv_columns();
std::string csv_row(const RunResult& result, std::uint64_t master_seed);
std::string jsonl_row(const RunResult& result, std::uint64_t master_seed);

struct ExecutionSummary {
  int exit_code = 0;
  std::size_t rows = 0;
  std::size_t failed = 0;
  double wall_seconds = 0.0;
};

/// Runs every grid point and repetition, writing rows in grid order to `out`
/// and failures to `log`. Exit code 0 on success, 2 if any point failed.
ExecutionSummary execute(const ParsedConfig& config, std::ostream& out, std::ostream& log);

/// Human-readable table of the shipped noise profiles.
std::string describe_profiles();

}  // namespace stqs

#endif  // STQS_CONFIG_H
