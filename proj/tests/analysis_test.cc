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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "stqs/analysis.h"

using namespace stqs;

namespace {

Matrix random_density(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  const int d = 1 << n;
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = Complex(g(rng), g(rng));
  Matrix rho = a * a.adjoint();
  return rho / rho.trace();
}

}  // namespace

TEST(SwapTest, OrthogonalStatesGiveZero) {
  Vector zero(2), one(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  const OverlapEstimate e = swap_test(QuantumState::from_amplitudes(zero), QuantumState::from_amplitudes(one),
                                      100000, noiseless_profile(), NoiseScope{}, 1);
  EXPECT_NEAR(e.overlap, 0.0, 4.0 * e.std_err + 1e-12);
}

TEST(SwapTest, MixedPairsMatchTrace) {
  std::mt19937_64 rng(21);
  for (int i = 0; i < 5; ++i) {
    const Matrix rho = random_density(1, rng), sigma = random_density(1, rng);
    const OverlapEstimate e = swap_test(QuantumState::from_density(rho), QuantumState::from_density(sigma),
                                        200000, noiseless_profile(), NoiseScope{}, 10 + i);
    EXPECT_NEAR(e.overlap, overlap_exact(rho, sigma), 4.0 * e.std_err);
  }
}

TEST(SwapTest, WidthMismatchThrows) {
  EXPECT_THROW(swap_test(QuantumState::zero(1), QuantumState::zero(2), 10, noiseless_profile(), NoiseScope{}, 1),
               std::invalid_argument);
}

TEST(Fidelity, PureStatesReduceToOverlap) {
  Vector a(2), b(2);
  a << 1.0, 0.0;
  b << std::cos(0.3), std::sin(0.3);
  const Matrix ra = a * a.adjoint(), rb = b * b.adjoint();
  EXPECT_NEAR(fidelity_exact(ra, rb), std::pow(std::cos(0.3), 2), 1e-10);
  EXPECT_NEAR(overlap_exact(ra, rb), std::pow(std::cos(0.3), 2), 1e-12);
}

TEST(Fidelity, RejectsNonPsd) {
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  EXPECT_THROW(fidelity_exact(bad, Matrix::Identity(2, 2) / 2.0), std::domain_error);
}

TEST(Fisher, GhzIsHeisenberg) {
  for (int n = 2; n <= 8; ++n) EXPECT_NEAR(quantum_fisher(ghz_probe(n).prepare, 0.2) / (n * n), 1.0, 0.01) << n;
}

TEST(Fisher, ProductIsShotNoise) {
  for (int n = 2; n <= 8; ++n) EXPECT_NEAR(quantum_fisher(product_probe(n).prepare, 0.2) / n, 1.0, 0.01) << n;
}

TEST(Fisher, TinyDeltaRejected) {
  EXPECT_THROW(quantum_fisher(ghz_probe(2).prepare, 0.1, 1e-9), std::invalid_argument);
}

TEST(Fisher, ClassicalNeverExceedsQuantum) {
  for (int n : {2, 4}) {
    const Probe p = ghz_probe(n);
    EXPECT_LE(classical_fisher(p.measured, 0.2), quantum_fisher(p.prepare, 0.2) * 1.01);
  }
}

TEST(Fisher, CramerRaoRespected) {
  const FisherReport r = fisher_report(ghz_probe(4), 0.1, 5000, 100, 3);
  EXPECT_TRUE(r.crb_respected);
  EXPECT_GT(r.empirical_variance, 0.0);
}

TEST(Variational, StepDescendsQuadratic) {
  auto cost = [](const std::vector<double>& r) { return (r[0] - 1.0) * (r[0] - 1.0) + 2.0 * r[1] * r[1]; };
  std::vector<double> p{3.0, -2.0};
  for (int i = 0; i < 200; ++i) p = variational_step(p, cost, 0.1);
  EXPECT_NEAR(p[0], 1.0, 1e-6);
  EXPECT_NEAR(p[1], 0.0, 1e-6);
}

TEST(Variational, RejectsNonFiniteCost) {
  auto cost = [](const std::vector<double>&) { return std::nan(""); };
  EXPECT_THROW(variational_step({0.0}, cost, 0.1), std::domain_error);
}
