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

#ifndef STQS_ANALYSIS_H
#define STQS_ANALYSIS_H

#include <cstdint>
#include <functional>
#include <vector>

#include "stqs/circuit.h"
#include "stqs/noise.h"
#include "stqs/simulator.h"
#include "stqs/state.h"

namespace stqs {

struct OverlapEstimate {
  double overlap = 0.0;  // 2 P(ancilla = 0) - 1, estimates tr(rho sigma)
  std::uint64_t shots = 0;
  double std_err = 0.0;
};

/// Ancilla 0, sensed register 1..w, reference register w+1..2w:
/// H, CSWAP per qubit pair, H, Z readout of the ancilla.
Circuit swap_test_circuit(int width);

/// Runs the swap test on the product of the two input states. Noise from the
/// scaled profile is attached to the whole circuit; the inputs themselves are
/// taken as given (no state-preparation error).
OverlapEstimate swap_test(const QuantumState& sensed, const QuantumState& reference,
                          std::uint64_t shots, const NoiseProfile& profile, const NoiseScope& scope,
                          std::uint64_t seed, Backend backend = Backend::dense);

/// Re tr(rho sigma).
double overlap_exact(const Matrix& rho, const Matrix& sigma);
/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2. Throws
/// std::domain_error on inputs that are not PSD within 1e-9.
double fidelity_exact(const Matrix& rho, const Matrix& sigma);

/// Parameterized probe used by the Fisher analysis.
struct Probe {
  int n = 1;
  std::function<Circuit(double)> prepare;   // state preparation only
  std::function<Circuit(double)> measured;  // preparation plus readout
  std::function<double(const OutcomeCounts&)> estimator;
};

/// GHZ probe: P(theta) on every qubit; readout by inverse preparation.
Probe ghz_probe(int n);
/// Product of |+> probes, P(theta) on every qubit, pooled X-basis readout.
Probe product_probe(int n);

/// 8 (1 - |<psi(theta)|psi(theta + delta)>|) / delta^2 with one Richardson
/// step on (delta, delta / 2). Throws if delta is below 1e-7.
double quantum_fisher(const std::function<Circuit(double)>& prepare, double theta, double delta = 1e-4);

/// Fisher information of the exact readout distribution (central differences).
double classical_fisher(const std::function<Circuit(double)>& measured, double theta, double delta = 1e-5);

struct FisherReport {
  double qfi = 0.0;
  double cfi = 0.0;
  double crb_variance_bound = 0.0;  // 1 / (shots * qfi)
  double empirical_variance = 0.0;
  double empirical_variance_se = 0.0;
  bool crb_respected = false;  // empirical >= bound - 3 se
};

FisherReport fisher_report(const Probe& probe, double theta, std::uint64_t shots, int repetitions,
                           std::uint64_t seed, double delta = 1e-4);

/// r_i -> r_i - eta dC/dr_i with central-difference gradients.
std::vector<double> variational_step(const std::vector<double>& params,
                                     const std::function<double(const std::vector<double>&)>& cost,
                                     double eta, double h = 1e-6);

}  // namespace stqs

#endif  // STQS_ANALYSIS_H
