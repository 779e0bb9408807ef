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

#ifndef STQS_STATE_H
#define STQS_STATE_H

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "stqs/channel.h"
#include "stqs/gate.h"
#include "stqs/linalg.h"

namespace stqs {

enum class Role { sensing, memory, computing };

std::string role_name(Role role);
Role parse_role(const std::string& name);

/// Dense n-qubit state, either a pure amplitude vector or a density matrix.
/// Qubit q is bit q of the basis index; density matrices are stored column
/// major, so vec(rho) has row qubits on bits [0, n) and column qubits on
/// bits [n, 2n).
class QuantumState {
 public:
  /// |0...0> as a pure state. Empty `roles` labels every qubit as sensing.
  static QuantumState zero(int num_qubits, std::vector<Role> roles = {});
  static QuantumState from_amplitudes(Vector amplitudes, std::vector<Role> roles = {});
  static QuantumState from_density(Matrix rho, std::vector<Role> roles = {});

  int num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << num_qubits_; }
  bool is_pure() const { return std::holds_alternative<Vector>(repr_); }

  const Vector& amplitudes() const;
  Vector& amplitudes();
  const Matrix& density() const;
  Matrix& density();

  /// rho for either representation.
  Matrix density_matrix() const;
  void promote_to_density();

  const std::vector<Role>& roles() const { return roles_; }
  Role role(int q) const { return roles_.at(q); }

  /// Throws std::domain_error when the normalization / Hermiticity / trace /
  /// positivity invariants are violated beyond `tol`.
  void validate(double tol = 1e-10) const;

 private:
  QuantumState(int n, std::variant<Vector, Matrix> repr, std::vector<Role> roles);

  int num_qubits_;
  std::variant<Vector, Matrix> repr_;
  std::vector<Role> roles_;
};

/// U|psi> or U rho U^dagger.
void apply_gate(QuantumState& state, const Gate& gate);

/// Arbitrary unitary on `qubits` (local bit j = qubits[j]).
void apply_unitary(QuantumState& state, const Matrix& u, std::span<const int> qubits);

/// rho -> sum K rho K^dagger. Pure states are promoted to density matrices.
void apply_channel(QuantumState& state, const QuantumChannel& channel,
                   std::span<const int> targets);

/// Diagonal of the state in the computational basis.
std::vector<double> probabilities(const QuantumState& state);

/// Reduced density matrix on `keep` (local bit j = keep[j]).
Matrix partial_trace(const QuantumState& state, std::span<const int> keep);

}  // namespace stqs

#endif  // STQS_STATE_H
