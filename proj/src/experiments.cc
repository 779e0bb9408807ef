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

#include "stqs/experiments.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include "stqs/analysis.h"
#include "stqs/stats.h"

namespace stqs {

std::string experiment_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::radar: return "radar";
    case ExperimentKind::dark_matter: return "dark_matter";
    case ExperimentKind::scaling: return "scaling";
    case ExperimentKind::swap_test: return "swap_test";
  }
  return "?";
}

ExperimentKind parse_experiment(const std::string& name) {
  for (auto k : {ExperimentKind::radar, ExperimentKind::dark_matter, ExperimentKind::scaling,
                 ExperimentKind::swap_test}) {
    if (experiment_name(k) == name) return k;
  }
  throw std::invalid_argument("unknown experiment kind '" + name + "'");
}

std::string scaling_mode_name(ScalingMode m) { return m == ScalingMode::ghz ? "ghz" : "unentangled"; }

ScalingMode parse_scaling_mode(const std::string& name) {
  if (name == "ghz") return ScalingMode::ghz;
  if (name == "unentangled") return ScalingMode::unentangled;
  throw std::invalid_argument("unknown scaling mode '" + name + "'");
}

namespace {

double radar_total(const ExperimentConfig& c) { return c.n_s * c.phi_soil - c.n_f * c.phi_free; }

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void ExperimentConfig::validate() const {
  require(shots >= 1, "shots must be at least 1");
  require(threads >= 1, "threads must be at least 1");
  require(std::isfinite(delay_tau) && delay_tau >= 0.0, "delay_tau must be non-negative");
  scope.validate();
  switch (kind == ExperimentKind::swap_test ? swap_source : kind) {
    case ExperimentKind::radar: {
      require(n_s >= 1 && n_f >= 1, "radar needs n_s >= 1 and n_f >= 1");
      const double total = n_s * phi_soil - n_f * phi_free;
      require(total > 0.0 && total < std::numbers::pi,
              "radar: n_s*phi_soil - n_f*phi_free = " + std::to_string(total) +
                  " lies outside the invertible range (0, pi)");
      break;
    }
    case ExperimentKind::dark_matter:
      require(n_dm >= 2, "dark_matter needs n_dm >= 2");
      require(n_dm * phi > 0.0 && n_dm * phi < std::numbers::pi,
              "dark_matter: n_dm*phi = " + std::to_string(n_dm * phi) +
                  " lies outside the invertible range (0, pi)");
      break;
    case ExperimentKind::scaling:
      require(n_scaling >= 1, "scaling needs n_scaling >= 1");
      require(phi > 0.0 && (scaling_mode == ScalingMode::unentangled ? phi : n_scaling * phi) < std::numbers::pi,
              "scaling: probe phase outside the invertible range (0, pi)");
      break;
    case ExperimentKind::swap_test:
      throw std::invalid_argument("swap_test source must be radar or dark_matter");
  }
  if (kind == ExperimentKind::swap_test) {
    require(swap_source != ExperimentKind::scaling, "swap_test source must be radar or dark_matter");
  }
}

int ExperimentConfig::total_qubits() const {
  switch (kind) {
    case ExperimentKind::radar: return n_s + n_f + 1;
    case ExperimentKind::dark_matter: return n_dm + 1;
    case ExperimentKind::scaling: return scaling_mode == ScalingMode::ghz ? n_scaling : 1;
    case ExperimentKind::swap_test: return 3;
  }
  return 0;
}

double ExperimentConfig::phi_true() const {
  const ExperimentKind k = kind == ExperimentKind::swap_test ? swap_source : kind;
  if (k == ExperimentKind::radar) return n_s == n_f ? phi_soil - phi_free : radar_total(*this);
  return phi;
}

Circuit radar_circuit(int n_s, int n_f, double phi_soil, double phi_free, Correction correction,
                      bool measure_memory) {
  if (n_s < 1 || n_f < 1) throw std::invalid_argument("radar needs n_s >= 1 and n_f >= 1");
  PipelineSpec spec;
  spec.n_sensing = n_s + n_f;
  std::vector<double> angles(n_s, phi_soil);
  angles.insert(angles.end(), n_f, phi_free);
  spec.steps = {ProbePrep{{n_s}}, Sensing{Encoding::phase, angles}, Storage{correction},
                Processing{measure_memory ? ProcessingBasis::x : ProcessingBasis::none}};
  return build_pipeline(spec);
}

Circuit dm_circuit(int n, double phi, const DmOptions& options) {
  if (n < 2) throw std::invalid_argument("dark matter circuit needs n_dm >= 2");
  std::vector<Role> roles(n + 1, Role::sensing);
  roles[n] = Role::memory;
  Circuit c(n + 1, roles);
  for (int q = 1; q < n; ++q) c.add(gates::h(q));
  for (int q = 1; q < n; ++q) c.add(gates::cnot(q, q - 1));
  for (int q = 0; q < n; ++q) c.add(gates::rx(q, phi));
  for (int q = n - 1; q >= 1; --q) c.add(gates::cnot(q, q - 1));
  for (int q = 1; q < n; ++q) c.add(gates::h(q));
  c.add(gates::cnot(0, n));
  if (options.tau > 0.0) c.add(gates::delay(n, options.tau, options.tau * options.time_unit));
  if (options.measure_sensors) {
    for (int q = 1; q < n; ++q) c.measure(q, Basis::z);
  }
  if (options.measure_memory) c.measure(n, Basis::z);
  return c;
}

Circuit ramsey_circuit(double phi) {
  Circuit c(1);
  c.add(gates::h(0));
  c.add(gates::phase(0, phi));
  c.measure(0, Basis::x);
  return c;
}

Circuit ghz_scaling_circuit(int n, double phi) {
  const Probe probe = ghz_probe(n);
  return probe.measured(phi);
}

PhaseEstimate estimate_phase(const OutcomeCounts& counts, Scheme scheme, int n_effective, int qubit) {
  if (counts.kept_shots == 0 || counts.counts.empty()) throw std::invalid_argument("estimate_phase: empty counts");
  if (n_effective < 1) throw std::invalid_argument("estimate_phase: n_effective must be >= 1");
  PhaseEstimate out;
  if (scheme == Scheme::radar) {
    const double p_plus = counts.fraction(qubit, 0);
    out.boundary = p_plus == 0.0 || p_plus == 1.0;
    out.phi = 2.0 * std::acos(std::sqrt(p_plus)) / n_effective;
  } else {
    const double p1 = counts.fraction(qubit, 1);
    out.boundary = p1 == 0.0 || p1 == 1.0;
    out.phi = DmLikelihood::cached(n_effective).invert(p1);
  }
  return out;
}

double accuracy(double phi_est, double phi_true) {
  if (phi_true == 0.0) throw std::invalid_argument("accuracy: true phase is zero");
  return (1.0 - std::abs(phi_est - phi_true) / std::abs(phi_true)) * 100.0;
}

double dm_likelihood_closed_form(int n, double phi) {
  const double s = std::sin(n * phi / 2.0);
  return s * s;
}

DmLikelihood::DmLikelihood(int n, int grid) : n_(n) {
  if (n < 2 || grid < 2) throw std::invalid_argument("DmLikelihood: bad size");
  DmOptions opts;
  opts.measure_sensors = false;
  for (int k = 0; k <= grid; ++k) {
    const double phi = std::numbers::pi / n * k / grid;
    const double p1 = exact_distribution(dm_circuit(n, phi, opts))[1];
    phis_.push_back(phi);
    table_.push_back(p1);
    max_deviation_ = std::max(max_deviation_, std::abs(p1 - dm_likelihood_closed_form(n, phi)));
  }
  closed_form_ = max_deviation_ <= 1e-9;
}

const DmLikelihood& DmLikelihood::cached(int n) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<DmLikelihood>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<DmLikelihood>(n);
  return *slot;
}

double DmLikelihood::probability(double phi) const {
  if (closed_form_) return dm_likelihood_closed_form(n_, phi);
  if (phi <= phis_.front()) return table_.front();
  if (phi >= phis_.back()) return table_.back();
  const auto it = std::upper_bound(phis_.begin(), phis_.end(), phi);
  const std::size_t i = static_cast<std::size_t>(it - phis_.begin());
  const double t = (phi - phis_[i - 1]) / (phis_[i] - phis_[i - 1]);
  return table_[i - 1] + t * (table_[i] - table_[i - 1]);
}

double DmLikelihood::invert(double p1) const {
  p1 = std::clamp(p1, 0.0, 1.0);
  if (closed_form_) return 2.0 * std::asin(std::sqrt(p1)) / n_;
  if (p1 <= table_.front()) return phis_.front();
  if (p1 >= table_.back()) return phis_.back();
  const auto it = std::upper_bound(table_.begin(), table_.end(), p1);
  const std::size_t i = static_cast<std::size_t>(it - table_.begin());
  const double t = (p1 - table_[i - 1]) / (table_[i] - table_[i - 1]);
  return phis_[i - 1] + t * (phis_[i] - phis_[i - 1]);
}

Circuit with_noise(const Circuit& ideal, const ExperimentConfig& config) {
  const NoiseProfile scaled = scale_profile(config.profile, config.scope);
  if (scaled.is_noiseless()) return ideal;
  return attach_noise(ideal, scaled, config.scope, config.noise_options);
}

namespace {

Circuit main_circuit(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::radar:
      return with_noise(radar_circuit(c.n_s, c.n_f, c.phi_soil, c.phi_free, c.correction), c);
    case ExperimentKind::dark_matter: {
      DmOptions opts;
      opts.tau = c.delay_tau;
      opts.time_unit = c.delay_time_unit;
      return with_noise(dm_circuit(c.n_dm, c.phi, opts), c);
    }
    case ExperimentKind::scaling:
      return with_noise(c.scaling_mode == ScalingMode::ghz ? ghz_scaling_circuit(c.n_scaling, c.phi)
                                                           : ramsey_circuit(c.phi),
                        c);
    case ExperimentKind::swap_test: break;
  }
  throw std::logic_error("main_circuit: swap test has no main circuit");
}

// Memory state of the source experiment, before any memory readout.
QuantumState memory_state(const ExperimentConfig& c, bool noisy) {
  Circuit ideal;
  int memory;
  if (c.swap_source == ExperimentKind::radar) {
    ideal = radar_circuit(c.n_s, c.n_f, c.phi_soil, c.phi_free, Correction::physical_z, false);
    memory = c.n_s + c.n_f;
  } else {
    DmOptions opts;
    opts.tau = c.delay_tau;
    opts.time_unit = c.delay_time_unit;
    opts.measure_sensors = false;
    opts.measure_memory = false;
    ideal = dm_circuit(c.n_dm, c.phi, opts);
    memory = c.n_dm;
  }
  const Circuit circuit = noisy ? with_noise(ideal, c) : ideal;
  const QuantumState full = final_state(circuit);
  const int keep[1] = {memory};
  Matrix rho = partial_trace(full, keep);
  if (!noisy) {
    // Pure reference: dominant eigenvector of the (rank-one) reduced state.
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho);
    const Vector v = eig.eigenvectors().col(eig.eigenvalues().size() - 1);
    if (eig.eigenvalues()[eig.eigenvalues().size() - 1] > 1.0 - 1e-9) {
      return QuantumState::from_amplitudes(v, {Role::memory});
    }
  }
  return QuantumState::from_density(rho, {Role::memory});
}

int readout_qubit(const ExperimentConfig& c) {
  switch (c.kind) {
    case ExperimentKind::radar: return c.n_s + c.n_f;
    case ExperimentKind::dark_matter: return c.n_dm;
    default: return 0;
  }
}

void score(RunResult& r, const OutcomeCounts& counts) {
  const ExperimentConfig& c = r.config;
  r.phi_true = c.phi_true();
  switch (c.kind) {
    case ExperimentKind::radar: {
      const PhaseEstimate total = estimate_phase(counts, Scheme::radar, 1, readout_qubit(c));
      r.phi_est_total = total.phi;
      r.phi_est = c.n_s == c.n_f ? total.phi / c.n_s : total.phi;
      r.boundary = total.boundary;
      break;
    }
    case ExperimentKind::dark_matter: {
      const PhaseEstimate e = estimate_phase(counts, Scheme::dm, c.n_dm, readout_qubit(c));
      r.phi_est = e.phi;
      r.boundary = e.boundary;
      break;
    }
    case ExperimentKind::scaling: {
      const int n = c.scaling_mode == ScalingMode::ghz ? c.n_scaling : 1;
      const PhaseEstimate e = estimate_phase(counts, Scheme::radar, n, 0);
      r.phi_est = e.phi;
      r.boundary = e.boundary;
      break;
    }
    case ExperimentKind::swap_test: return;
  }
  r.accuracy_pct = accuracy(*r.phi_est, *r.phi_true);
}

OutcomeCounts pool(const std::vector<OutcomeCounts>& parts) {
  OutcomeCounts out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) {
    for (const auto& [k, v] : parts[i].counts) out.counts[k] += v;
    out.total_shots += parts[i].total_shots;
    out.kept_shots += parts[i].kept_shots;
  }
  return out;
}

}  // namespace

PreparedExperiment PreparedExperiment::prepare(const ExperimentConfig& config) {
  config.validate();
  PreparedExperiment p;
  p.config_ = config;
  if (config.kind == ExperimentKind::swap_test) return p;
  p.circuit_ = main_circuit(config);
  if (config.backend == Backend::dense) p.dist_ = exact_distribution(p.circuit_);
  return p;
}

RunResult PreparedExperiment::sample(std::uint64_t seed) const {
  RunResult r;
  r.config = config_;
  r.config.seed = seed;
  r.seed = seed;
  const ExperimentConfig& c = config_;

  if (c.kind == ExperimentKind::swap_test) {
    const QuantumState sensed = memory_state(c, true);
    const QuantumState reference = memory_state(c, false);
    const OverlapEstimate est = swap_test(sensed, reference, c.shots, c.profile, c.scope, seed, c.backend);
    r.overlap = est.overlap;
    r.overlap_std_err = est.std_err;
    r.phi_true = c.phi_true();
    return r;
  }

  auto draw = [&](std::uint64_t s) {
    if (c.backend == Backend::dense) return sample_distribution(dist_, circuit_.measured_qubits(), c.shots, s);
    return qtrajectory(circuit_, c.shots, s, nullptr, c.threads);
  };

  OutcomeCounts counts;
  if (c.kind == ExperimentKind::scaling && c.scaling_mode == ScalingMode::unentangled) {
    // n independent single-qubit probes, shots pooled.
    std::vector<OutcomeCounts> parts;
    for (int i = 0; i < c.n_scaling; ++i) parts.push_back(draw(seed + 0x9E3779B97F4A7C15ull * i));
    counts = pool(parts);
  } else {
    counts = draw(seed);
  }

  if (c.post_select && c.kind == ExperimentKind::dark_matter) {
    std::map<int, int> pattern;
    for (int q = 1; q < c.n_dm; ++q) pattern[q] = 0;
    counts = postselect(counts, pattern);
  }
  r.kept_fraction = counts.kept_fraction();
  r.counts = counts;
  score(r, counts);
  return r;
}

RunResult run(const ExperimentConfig& config) {
  return PreparedExperiment::prepare(config).sample(config.seed);
}

std::vector<ScalingPoint> scaling_experiment(const std::vector<int>& n_list, double phi,
                                             std::uint64_t shots, ScalingMode mode,
                                             int repetitions, std::uint64_t seed) {
  if (n_list.empty()) throw std::invalid_argument("scaling_experiment: empty probe list");
  if (repetitions < 2) throw std::invalid_argument("scaling_experiment: need at least two repetitions");
  std::vector<ScalingPoint> out;
  for (int n : n_list) {
    ExperimentConfig c;
    c.kind = ExperimentKind::scaling;
    c.scaling_mode = mode;
    c.n_scaling = n;
    c.phi = phi;
    c.shots = shots;
    const PreparedExperiment prep = PreparedExperiment::prepare(c);
    std::vector<double> est;
    for (int k = 0; k < repetitions; ++k) {
      est.push_back(*prep.sample(seed + 1000003ull * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(k)).phi_est);
    }
    out.push_back({n, stats::mean(est), stats::stddev(est)});
  }
  return out;
}

double topp_water_content(double eps) {
  return -5.3e-2 + 2.92e-2 * eps - 5.5e-4 * eps * eps + 4.3e-6 * eps * eps * eps;
}

SoilMoisture soil_moisture_from_phase(double phi_free, double phi_soil) {
  if (phi_soil == 0.0) throw std::invalid_argument("soil moisture: phi_soil is zero");
  if (!(phi_free > 0.0) || !(phi_soil > 0.0)) {
    throw std::invalid_argument("soil moisture: phases must be positive");
  }
  SoilMoisture s;
  const double ratio = phi_free / phi_soil;
  s.permittivity = ratio * ratio;
  s.water_content = topp_water_content(s.permittivity);
  return s;
}

}  // namespace stqs
