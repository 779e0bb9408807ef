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

#include "stqs/state.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stqs {

std::string role_name(Role role) {
  switch (role) {
    case Role::sensing: return "sensing";
    case Role::memory: return "memory";
    case Role::computing: return "computing";
  }
  return "?";
}

Role parse_role(const std::string& name) {
  if (name == "sensing") return Role::sensing;
  if (name == "memory") return Role::memory;
  if (name == "computing") return Role::computing;
  throw std::invalid_argument("unknown role '" + name + "'");
}

namespace {

int qubits_for_dimension(Eigen::Index dim) {
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  if ((Eigen::Index{1} << n) != dim || dim < 2) {
    throw std::invalid_argument("state dimension is not a power of two");
  }
  return n;
}

std::vector<Role> fill_roles(int n, std::vector<Role> roles) {
  if (roles.empty()) roles.assign(n, Role::sensing);
  if (static_cast<int>(roles.size()) != n) {
    throw std::invalid_argument("role list length does not match qubit count");
  }
  return roles;
}

std::vector<std::uint64_t> local_offsets(std::span<const int> bits) {
  const std::size_t local = std::size_t{1} << bits.size();
  std::vector<std::uint64_t> off(local, 0);
  for (std::size_t l = 0; l < local; ++l) {
    for (std::size_t j = 0; j < bits.size(); ++j) {
      if ((l >> j) & 1u) off[l] |= std::uint64_t{1} << bits[j];
    }
  }
  return off;
}

void check_targets(std::span<const int> qubits, int n) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n) throw std::out_of_range("qubit index out of range");
    for (std::size_t j = 0; j < i; ++j) {
      if (qubits[i] == qubits[j]) throw std::invalid_argument("repeated qubit index");
    }
  }
}

}  // namespace

QuantumState::QuantumState(int n, std::variant<Vector, Matrix> repr, std::vector<Role> roles)
    : num_qubits_(n), repr_(std::move(repr)), roles_(std::move(roles)) {}

QuantumState QuantumState::zero(int num_qubits, std::vector<Role> roles) {
  if (num_qubits < 1 || num_qubits > 30) throw std::invalid_argument("zero: bad qubit count");
  Vector psi = Vector::Zero(Eigen::Index{1} << num_qubits);
  psi[0] = 1.0;
  return {num_qubits, std::move(psi), fill_roles(num_qubits, std::move(roles))};
}

QuantumState QuantumState::from_amplitudes(Vector amplitudes, std::vector<Role> roles) {
  const int n = qubits_for_dimension(amplitudes.size());
  return {n, std::move(amplitudes), fill_roles(n, std::move(roles))};
}

QuantumState QuantumState::from_density(Matrix rho, std::vector<Role> roles) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("density matrix must be square");
  if (max_abs_diff(rho, rho.adjoint()) > 1e-9) throw std::invalid_argument("density matrix not Hermitian");
  const int n = qubits_for_dimension(rho.rows());
  return {n, std::move(rho), fill_roles(n, std::move(roles))};
}

const Vector& QuantumState::amplitudes() const {
  if (!is_pure()) throw std::logic_error("state is a density matrix");
  return std::get<Vector>(repr_);
}

Vector& QuantumState::amplitudes() {
  if (!is_pure()) throw std::logic_error("state is a density matrix");
  return std::get<Vector>(repr_);
}

const Matrix& QuantumState::density() const {
  if (is_pure()) throw std::logic_error("state is pure");
  return std::get<Matrix>(repr_);
}

Matrix& QuantumState::density() {
  if (is_pure()) throw std::logic_error("state is pure");
  return std::get<Matrix>(repr_);
}

Matrix QuantumState::density_matrix() const {
  if (is_pure()) {
    const Vector& psi = std::get<Vector>(repr_);
    return psi * psi.adjoint();
  }
  return std::get<Matrix>(repr_);
}

void QuantumState::promote_to_density() {
  if (is_pure()) repr_ = density_matrix();
}

void QuantumState::validate(double tol) const {
  if (is_pure()) {
    const double norm = std::get<Vector>(repr_).squaredNorm();
    if (std::abs(norm - 1.0) > tol) {
      throw std::domain_error("pure state norm " + std::to_string(norm) + " != 1");
    }
    return;
  }
  const Matrix& rho = std::get<Matrix>(repr_);
  if (max_abs_diff(rho, rho.adjoint()) > tol) throw std::domain_error("density matrix not Hermitian");
  const double tr = rho.trace().real();
  if (std::abs(tr - 1.0) > tol) {
    throw std::domain_error("density matrix trace " + std::to_string(tr) + " != 1");
  }
  if (num_qubits_ <= 8) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -1e-9) {
      throw std::domain_error("density matrix is not positive semidefinite");
    }
  }
}

void apply_unitary(QuantumState& state, const Matrix& u, std::span<const int> qubits) {
  const int n = state.num_qubits();
  check_targets(qubits, n);
  if (state.is_pure()) {
    Vector& psi = state.amplitudes();
    apply_to_bits({psi.data(), static_cast<std::size_t>(psi.size())}, n, qubits, u);
    return;
  }
  Matrix& rho = state.density();
  std::span<Complex> data(rho.data(), static_cast<std::size_t>(rho.size()));
  apply_to_bits(data, 2 * n, qubits, u);
  std::vector<int> col_bits(qubits.begin(), qubits.end());
  for (int& b : col_bits) b += n;
  apply_to_bits(data, 2 * n, col_bits, u.conjugate());
}

void apply_gate(QuantumState& state, const Gate& gate) {
  validate_gate(gate, state.num_qubits());
  apply_unitary(state, unitary(gate), gate.qubits);
}

void apply_channel(QuantumState& state, const QuantumChannel& channel,
                   std::span<const int> targets) {
  const int n = state.num_qubits();
  if (static_cast<int>(targets.size()) != channel.arity) {
    throw std::invalid_argument("channel " + channel.name + ": arity mismatch");
  }
  check_targets(targets, n);
  if (!is_trace_preserving(channel)) {
    throw std::invalid_argument("channel " + channel.name + ": not trace preserving");
  }
  state.promote_to_density();
  Matrix& rho = state.density();
  std::vector<int> bits(targets.begin(), targets.end());
  for (int q : targets) bits.push_back(q + n);
  apply_to_bits({rho.data(), static_cast<std::size_t>(rho.size())}, 2 * n, bits,
                channel.superoperator());
}

std::vector<double> probabilities(const QuantumState& state) {
  const std::size_t dim = state.dimension();
  std::vector<double> p(dim);
  if (state.is_pure()) {
    const Vector& psi = state.amplitudes();
    for (std::size_t i = 0; i < dim; ++i) p[i] = std::norm(psi[static_cast<Eigen::Index>(i)]);
  } else {
    const Matrix& rho = state.density();
    for (std::size_t i = 0; i < dim; ++i) {
      const auto k = static_cast<Eigen::Index>(i);
      p[i] = std::max(0.0, rho(k, k).real());
    }
  }
  return p;
}

Matrix partial_trace(const QuantumState& state, std::span<const int> keep) {
  const int n = state.num_qubits();
  check_targets(keep, n);
  const std::size_t local = std::size_t{1} << keep.size();
  const auto off = local_offsets(keep);
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  const std::uint64_t rest = std::uint64_t{1} << (n - static_cast<int>(keep.size()));

  Matrix out = Matrix::Zero(static_cast<Eigen::Index>(local), static_cast<Eigen::Index>(local));
  if (state.is_pure()) {
    const Vector& psi = state.amplitudes();
    for (std::uint64_t r = 0; r < rest; ++r) {
      const std::uint64_t base = deposit_zero_bits(r, sorted);
      for (std::size_t a = 0; a < local; ++a) {
        const Complex pa = psi[static_cast<Eigen::Index>(base | off[a])];
        if (pa == Complex(0.0)) continue;
        for (std::size_t b = 0; b < local; ++b) {
          out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
              pa * std::conj(psi[static_cast<Eigen::Index>(base | off[b])]);
        }
      }
    }
  } else {
    const Matrix& rho = state.density();
    for (std::uint64_t r = 0; r < rest; ++r) {
      const std::uint64_t base = deposit_zero_bits(r, sorted);
      for (std::size_t a = 0; a < local; ++a) {
        for (std::size_t b = 0; b < local; ++b) {
          out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
              rho(static_cast<Eigen::Index>(base | off[a]), static_cast<Eigen::Index>(base | off[b]));
        }
      }
    }
  }
  return out;
}

}  // namespace stqs
