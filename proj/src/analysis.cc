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

#include "stqs/analysis.h"

#include <cmath>
#include <stdexcept>

#include "stqs/stats.h"

namespace stqs {

Circuit swap_test_circuit(int width) {
  if (width < 1) throw std::invalid_argument("swap test needs registers of width >= 1");
  std::vector<Role> roles(2 * width + 1, Role::computing);
  for (int i = 1; i <= width; ++i) roles[i] = Role::memory;
  Circuit c(2 * width + 1, roles);
  c.add(gates::h(0));
  for (int i = 1; i <= width; ++i) c.add(gates::cswap(0, i, i + width));
  c.add(gates::h(0));
  c.measure(0, Basis::z);
  std::vector<int> inputs;
  for (int i = 1; i <= 2 * width; ++i) inputs.push_back(i);
  c.set_external_inputs(inputs);
  return c;
}

OverlapEstimate swap_test(const QuantumState& sensed, const QuantumState& reference,
                          std::uint64_t shots, const NoiseProfile& profile, const NoiseScope& scope,
                          std::uint64_t seed, Backend backend) {
  if (sensed.num_qubits() != reference.num_qubits()) {
    throw std::invalid_argument("swap test: register widths differ");
  }
  const int w = sensed.num_qubits();
  Circuit circuit = swap_test_circuit(w);
  const NoiseProfile scaled = scale_profile(profile, scope);
  if (!scaled.is_noiseless()) circuit = attach_noise(circuit, scaled, scope);

  Vector anc = Vector::Zero(2);
  anc[0] = 1.0;
  QuantumState input = QuantumState::zero(2 * w + 1, circuit.roles());
  if (sensed.is_pure() && reference.is_pure()) {
    const Matrix joint = kron(kron(reference.amplitudes(), sensed.amplitudes()), anc);
    input = QuantumState::from_amplitudes(joint.col(0), circuit.roles());
  } else {
    const Matrix joint = kron(kron(reference.density_matrix(), sensed.density_matrix()), anc * anc.adjoint());
    input = QuantumState::from_density(joint, circuit.roles());
  }

  const OutcomeCounts counts = simulate(circuit, shots, seed, backend, &input);
  const double p0 = counts.fraction(0, 0);
  OverlapEstimate out;
  out.shots = shots;
  out.overlap = 2.0 * p0 - 1.0;
  out.std_err = 2.0 * std::sqrt(p0 * (1.0 - p0) / static_cast<double>(shots));
  return out;
}

double overlap_exact(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw std::invalid_argument("overlap_exact: dimension mismatch");
  }
  return (rho * sigma).trace().real();
}

namespace {

Matrix psd_sqrt(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.eigenvalues().minCoeff() < -1e-9) {
    throw std::domain_error("fidelity_exact: input is not positive semidefinite");
  }
  Eigen::VectorXd ev = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * ev.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint();
}

}  // namespace

double fidelity_exact(const Matrix& rho, const Matrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols() || rho.rows() != rho.cols()) {
    throw std::invalid_argument("fidelity_exact: dimension mismatch");
  }
  const Matrix sr = psd_sqrt(rho);
  psd_sqrt(sigma);  // PSD check only
  const Matrix inner = sr * sigma * sr;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(Matrix((inner + inner.adjoint()) / 2.0), Eigen::EigenvaluesOnly);
  double tr = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) tr += std::sqrt(std::max(0.0, eig.eigenvalues()[i]));
  return std::min(1.0, tr * tr);
}

Probe ghz_probe(int n) {
  if (n < 1) throw std::invalid_argument("probe needs at least one qubit");
  Probe p;
  p.n = n;
  p.prepare = [n](double theta) {
    Circuit c(n);
    c.add(gates::h(0));
    for (int i = 0; i + 1 < n; ++i) c.add(gates::cnot(i, i + 1));
    for (int i = 0; i < n; ++i) c.add(gates::phase(i, theta));
    return c;
  };
  p.measured = [n, prep = p.prepare](double theta) {
    Circuit c = prep(theta);
    for (int i = n - 2; i >= 0; --i) c.add(gates::cnot(i, i + 1));
    c.add(gates::h(0));
    c.measure(0, Basis::z);
    return c;
  };
  p.estimator = [n](const OutcomeCounts& counts) {
    const double p0 = counts.fraction(0, 0);
    return 2.0 * std::acos(std::sqrt(p0)) / n;
  };
  return p;
}

Probe product_probe(int n) {
  if (n < 1) throw std::invalid_argument("probe needs at least one qubit");
  Probe p;
  p.n = n;
  p.prepare = [n](double theta) {
    Circuit c(n);
    for (int i = 0; i < n; ++i) c.add(gates::h(i));
    for (int i = 0; i < n; ++i) c.add(gates::phase(i, theta));
    return c;
  };
  p.measured = [n, prep = p.prepare](double theta) {
    Circuit c = prep(theta);
    for (int i = 0; i < n; ++i) c.measure(i, Basis::x);
    return c;
  };
  p.estimator = [n](const OutcomeCounts& counts) {
    double p0 = 0.0;
    for (int i = 0; i < n; ++i) p0 += counts.fraction(i, 0);
    p0 /= n;
    return 2.0 * std::acos(std::sqrt(p0));
  };
  return p;
}

namespace {

double fidelity_step(const std::function<Circuit(double)>& prepare, double theta, double delta) {
  const QuantumState a = final_state(prepare(theta));
  const QuantumState b = final_state(prepare(theta + delta));
  if (!a.is_pure() || !b.is_pure()) throw std::invalid_argument("quantum_fisher: probe must be pure");
  const double f = std::abs(a.amplitudes().dot(b.amplitudes()));
  return 8.0 * (1.0 - f) / (delta * delta);
}

}  // namespace

double quantum_fisher(const std::function<Circuit(double)>& prepare, double theta, double delta) {
  if (!(delta >= 1e-7)) throw std::invalid_argument("quantum_fisher: delta too small for double precision");
  const double q1 = fidelity_step(prepare, theta, delta);
  const double q2 = fidelity_step(prepare, theta, delta / 2.0);
  return (4.0 * q2 - q1) / 3.0;
}

double classical_fisher(const std::function<Circuit(double)>& measured, double theta, double delta) {
  const auto p = exact_distribution(measured(theta));
  const auto plus = exact_distribution(measured(theta + delta));
  const auto minus = exact_distribution(measured(theta - delta));
  double f = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 1e-14) continue;
    const double d = (plus[i] - minus[i]) / (2.0 * delta);
    f += d * d / p[i];
  }
  return f;
}

FisherReport fisher_report(const Probe& probe, double theta, std::uint64_t shots, int repetitions,
                           std::uint64_t seed, double delta) {
  if (repetitions < 2) throw std::invalid_argument("fisher_report needs at least two repetitions");
  FisherReport r;
  r.qfi = quantum_fisher(probe.prepare, theta, delta);
  r.cfi = classical_fisher(probe.measured, theta);
  r.crb_variance_bound = 1.0 / (static_cast<double>(shots) * r.qfi);

  const Circuit c = probe.measured(theta);
  const auto dist = exact_distribution(c);
  const auto qubits = c.measured_qubits();
  std::vector<double> est;
  for (int k = 0; k < repetitions; ++k) {
    est.push_back(probe.estimator(sample_distribution(dist, qubits, shots, seed + static_cast<std::uint64_t>(k))));
  }
  r.empirical_variance = stats::variance(est);
  // Var of a sample variance ~ 2 sigma^4 / (R - 1) for near-normal estimates.
  r.empirical_variance_se = r.empirical_variance * std::sqrt(2.0 / (repetitions - 1));
  r.crb_respected = r.empirical_variance >= r.crb_variance_bound - 3.0 * r.empirical_variance_se;
  return r;
}

std::vector<double> variational_step(const std::vector<double>& params,
                                     const std::function<double(const std::vector<double>&)>& cost,
                                     double eta, double h) {
  if (!(eta > 0.0)) throw std::invalid_argument("variational_step: learning rate must be positive");
  std::vector<double> out = params;
  std::vector<double> probe = params;
  for (std::size_t i = 0; i < params.size(); ++i) {
    probe[i] = params[i] + h;
    const double up = cost(probe);
    probe[i] = params[i] - h;
    const double down = cost(probe);
    probe[i] = params[i];
    if (!std::isfinite(up) || !std::isfinite(down)) {
      throw std::domain_error("variational_step: cost is not finite");
    }
    out[i] = params[i] - eta * (up - down) / (2.0 * h);
  }
  return out;
}

}  // namespace stqs
