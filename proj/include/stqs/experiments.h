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

#ifndef STQS_EXPERIMENTS_H
#define STQS_EXPERIMENTS_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "stqs/circuit.h"
#include "stqs/noise.h"
#include "stqs/pipeline.h"
#include "stqs/simulator.h"

namespace stqs {

enum class ExperimentKind { radar, dark_matter, scaling, swap_test };
enum class ScalingMode { unentangled, ghz };

std::string experiment_name(ExperimentKind k);
ExperimentKind parse_experiment(const std::string& name);
std::string scaling_mode_name(ScalingMode m);
ScalingMode parse_scaling_mode(const std::string& name);

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::radar;
  int n_s = 3;
  int n_f = 3;
  int n_dm = 4;
  int n_scaling = 1;  // probe count for the scaling experiment
  double phi_soil = 0.9;
  double phi_free = 0.1;
  double phi = 0.1;  // DM rotation / scaling phase
  std::uint64_t shots = 1000000;
  Platform platform = Platform::custom;
  NoiseProfile profile = noiseless_profile();  // unscaled
  NoiseScope scope;
  NoiseOptions noise_options;
  Backend backend = Backend::dense;
  bool post_select = false;
  double delay_tau = 0.0;
  double delay_time_unit = 1e-6;
  Correction correction = Correction::post_processing;
  ScalingMode scaling_mode = ScalingMode::ghz;
  ExperimentKind swap_source = ExperimentKind::dark_matter;
  std::uint64_t seed = 1;
  int threads = 1;

  /// Throws std::invalid_argument, including for configs outside the
  /// estimator's inversion domain.
  void validate() const;
  /// Qubits in the main circuit.
  int total_qubits() const;
  /// True value the accuracy is measured against.
  double phi_true() const;
  bool operator==(const ExperimentConfig&) const = default;
};

struct RunResult {
  ExperimentConfig config;
  OutcomeCounts counts;
  std::optional<double> phi_true;
  std::optional<double> phi_est;        // per-qubit for radar with n_s == n_f
  std::optional<double> phi_est_total;  // radar: total memory phase
  std::optional<double> accuracy_pct;
  std::optional<double> overlap;
  std::optional<double> overlap_std_err;
  double kept_fraction = 1.0;
  bool boundary = false;  // estimate sits on the arc-function boundary
  std::uint64_t seed = 0;
};

/// GHZ over n_s + n_f sensors with the free-space block flipped, phase
/// encoding, storage onto the memory (highest index) and an X-basis readout.
Circuit radar_circuit(int n_s, int n_f, double phi_soil, double phi_free,
                      Correction correction = Correction::post_processing, bool measure_memory = true);

struct DmOptions {
  double tau = 0.0;
  double time_unit = 1e-6;
  bool measure_sensors = true;  // Z readout of the non-signal sensors for post-selection
  bool measure_memory = true;
};

/// Sensors 0..n-1 (qubit 0 carries the signal), memory n.
Circuit dm_circuit(int n_dm, double phi, const DmOptions& options = {});

/// Single-qubit Ramsey: H, P(phi), X-basis readout.
Circuit ramsey_circuit(double phi);
/// GHZ probe, P(phi) on each qubit, inverse preparation, Z readout of qubit 0.
Circuit ghz_scaling_circuit(int n, double phi);

enum class Scheme { radar, dm };

struct PhaseEstimate {
  double phi = 0.0;
  bool boundary = false;
};

/// Radar: 2 arccos(sqrt(p+)) / n; DM: 2 arcsin(sqrt(p1)) / n via the
/// validated likelihood. Throws on empty counts.
PhaseEstimate estimate_phase(const OutcomeCounts& counts, Scheme scheme, int n_effective, int qubit);

/// (1 - |est - truth| / truth) * 100.
double accuracy(double phi_est, double phi_true);

/// Noiseless memory readout likelihood of the DM circuit, P(memory = 1).
double dm_likelihood_closed_form(int n_dm, double phi);

/// Likelihood of the DM circuit checked against the dense oracle on a grid
/// over [0, pi / n]. Falls back to the tabulated oracle when the closed form
/// deviates by more than 1e-9.
class DmLikelihood {
 public:
  explicit DmLikelihood(int n_dm, int grid = 64);
  static const DmLikelihood& cached(int n_dm);

  double max_deviation() const { return max_deviation_; }
  bool uses_closed_form() const { return closed_form_; }
  double probability(double phi) const;
  double invert(double p1) const;

 private:
  int n_;
  std::vector<double> phis_;
  std::vector<double> table_;
  double max_deviation_ = 0.0;
  bool closed_form_ = true;
};

/// Builds the circuit once (with noise) and caches the exact distribution
/// for the dense backend, so repeated seeds only resample.
class PreparedExperiment {
 public:
  static PreparedExperiment prepare(const ExperimentConfig& config);
  RunResult sample(std::uint64_t seed) const;

  const ExperimentConfig& config() const { return config_; }
  const Circuit& circuit() const { return circuit_; }
  /// Exact distribution over the measured qubits (dense backend only).
  const std::vector<double>& distribution() const { return dist_; }

 private:
  ExperimentConfig config_;
  Circuit circuit_;
  std::vector<double> dist_;
};

/// Assembles, simulates, post-selects, estimates and scores one config.
RunResult run(const ExperimentConfig& config);

/// Noise-attached version of `ideal` for the config's profile and scope.
Circuit with_noise(const Circuit& ideal, const ExperimentConfig& config);

struct ScalingPoint {
  int n = 0;
  double mean = 0.0;
  double std_dev = 0.0;
};

/// Empirical spread of the phase estimate versus probe count. Unentangled
/// mode pools the shots of n single-qubit Ramsey circuits; GHZ mode runs the
/// n-qubit entangled probe.
std::vector<ScalingPoint> scaling_experiment(const std::vector<int>& n_list, double phi,
                                             std::uint64_t shots, ScalingMode mode,
                                             int repetitions, std::uint64_t seed);

struct SoilMoisture {
  double permittivity = 0.0;
  double water_content = 0.0;  // volumetric, m^3/m^3
};

/// Topp et al. (1980) empirical cubic.
double topp_water_content(double permittivity);
/// eps = (phi_free / phi_soil)^2 and its Topp water content.
SoilMoisture soil_moisture_from_phase(double phi_free, double phi_soil);

}  // namespace stqs

#endif  // STQS_EXPERIMENTS_H
