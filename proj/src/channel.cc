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

#include "stqs/channel.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stqs {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(what) + ": probability " + std::to_string(p) +
                                " outside [0, 1]");
  }
}

Matrix pauli(int which) {
  Matrix m = Matrix::Zero(2, 2);
  switch (which) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, Complex(0, -1), Complex(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// exp(-t / tau) with the conventions t = 0 -> 1 and tau = inf -> 1.
double decay(double t, double tau) {
  if (t == 0.0 || std::isinf(tau)) return 1.0;
  return std::exp(-t / tau);
}

}  // namespace

QuantumChannel QuantumChannel::from_kraus(std::vector<Matrix> kraus, std::string name,
                                          double tol) {
  if (kraus.empty()) throw std::invalid_argument("channel " + name + ": empty Kraus set");
  const Eigen::Index dim = kraus.front().rows();
  int arity = 0;
  while ((Eigen::Index{1} << arity) < dim) ++arity;
  if ((Eigen::Index{1} << arity) != dim || dim < 2) {
    throw std::invalid_argument("channel " + name + ": Kraus dimension is not 2^k");
  }
  for (const auto& k : kraus) {
    if (k.rows() != dim || k.cols() != dim) {
      throw std::invalid_argument("channel " + name + ": Kraus operators differ in shape");
    }
  }
  QuantumChannel ch{std::move(kraus), arity, std::move(name)};
  if (!is_trace_preserving(ch, tol)) {
    throw std::invalid_argument("channel " + ch.name + ": Kraus set is not trace preserving");
  }
  return ch;
}

Matrix QuantumChannel::superoperator() const {
  const Eigen::Index dim = Eigen::Index{1} << arity;
  Matrix s = Matrix::Zero(dim * dim, dim * dim);
  for (const auto& k : kraus) s += kron(k.conjugate(), k);
  return s;
}

bool QuantumChannel::is_mixed_unitary(double tol) const {
  for (const auto& k : kraus) {
    const Matrix g = k.adjoint() * k;
    const Complex scale = g(0, 0);
    const Matrix id = Matrix::Identity(g.rows(), g.cols()) * scale;
    if (max_abs_diff(g, id) > tol) return false;
  }
  return true;
}

bool is_trace_preserving(const QuantumChannel& channel, double tol) {
  if (channel.kraus.empty()) return false;
  const Eigen::Index dim = channel.kraus.front().rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& k : channel.kraus) sum += k.adjoint() * k;
  return max_abs_diff(sum, Matrix::Identity(dim, dim)) < tol;
}

namespace channels {

QuantumChannel depolarizing(double p, int num_qubits) {
  check_probability(p, "depolarizing");
  if (num_qubits < 1 || num_qubits > 3) {
    throw std::invalid_argument("depolarizing: supports 1 to 3 qubits");
  }
  const int num_paulis = 1 << (2 * num_qubits);
  std::vector<Matrix> kraus;
  kraus.reserve(num_paulis);
  for (int idx = 0; idx < num_paulis; ++idx) {
    // Pauli string; qubit j uses digit j (base 4); the highest qubit goes first in kron.
    Matrix op = Matrix::Identity(1, 1);
    for (int j = num_qubits - 1; j >= 0; --j) op = kron(op, pauli((idx >> (2 * j)) & 3));
    const double weight = idx == 0 ? 1.0 - p + p / num_paulis : p / num_paulis;
    if (weight == 0.0) continue;
    kraus.push_back(std::sqrt(weight) * op);
  }
  return QuantumChannel::from_kraus(std::move(kraus), "depolarizing");
}

QuantumChannel thermal_relaxation(double t, double t1, double t2) {
  if (!(t >= 0.0) || !(t1 > 0.0) || !(t2 > 0.0)) {
    throw std::invalid_argument("thermal_relaxation: need t >= 0 and T1, T2 > 0");
  }
  const double keep = decay(t, t1);                    // exp(-t/T1)
  const double gamma = 1.0 - keep;
  const double coherence = decay(t, 2.0 * t2);         // exp(-t/(2 T2))
  const double damping_coherence = std::sqrt(keep);    // what amplitude damping leaves
  double lambda = damping_coherence > 0.0 ? coherence / damping_coherence : 1.0;
  if (lambda > 1.0) lambda = 1.0;
  const double pz = (1.0 - lambda) / 2.0;

  Matrix k0 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(keep);
  Matrix k1 = Matrix::Zero(2, 2);
  k1(0, 1) = std::sqrt(gamma);
  const Matrix z = pauli(3);

  std::vector<Matrix> kraus;
  for (const Matrix& k : {k0, k1}) {
    if (k.cwiseAbs().maxCoeff() == 0.0) continue;
    kraus.push_back(std::sqrt(1.0 - pz) * k);
    if (pz > 0.0) kraus.push_back(std::sqrt(pz) * (z * k));
  }
  return QuantumChannel::from_kraus(std::move(kraus), "thermal_relaxation");
}

QuantumChannel dephasing(double p) {
  check_probability(p, "dephasing");
  std::vector<Matrix> kraus{std::sqrt(1.0 - p) * pauli(0)};
  if (p > 0.0) kraus.push_back(std::sqrt(p) * pauli(3));
  return QuantumChannel::from_kraus(std::move(kraus), "dephasing");
}

QuantumChannel bit_flip(double p) {
  check_probability(p, "bit_flip");
  std::vector<Matrix> kraus{std::sqrt(1.0 - p) * pauli(0)};
  if (p > 0.0) kraus.push_back(std::sqrt(p) * pauli(1));
  return QuantumChannel::from_kraus(std::move(kraus), "bit_flip");
}

QuantumChannel measure_and_flip(double p01, double p10) {
  check_probability(p01, "measure_and_flip p01");
  check_probability(p10, "measure_and_flip p10");
  std::vector<Matrix> kraus;
  auto add = [&kraus](int out, int in, double w) {
    if (w == 0.0) return;
    Matrix k = Matrix::Zero(2, 2);
    k(out, in) = std::sqrt(w);
    kraus.push_back(k);
  };
  add(0, 0, 1.0 - p01);
  add(1, 0, p01);
  add(1, 1, 1.0 - p10);
  add(0, 1, p10);
  return QuantumChannel::from_kraus(std::move(kraus), "measure_and_flip");
}

}  // namespace channels

}  // namespace stqs
