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

#ifndef STQS_CHANNEL_H
#define STQS_CHANNEL_H

#include <string>
#include <vector>

#include "stqs/linalg.h"

namespace stqs {

/// A CPTP map in Kraus form. Operators use the same local bit ordering as
/// gates: local bit j acts on the j-th target qubit.
struct QuantumChannel {
  std::vector<Matrix> kraus;
  int arity = 1;
  std::string name;

  /// Constructs and checks sum K^dagger K = I within `tol`.
  static QuantumChannel from_kraus(std::vector<Matrix> kraus, std::string name,
                                   double tol = 1e-10);

  /// Superoperator acting on vec(rho) with local index r + c * 2^arity.
  Matrix superoperator() const;

  /// True when every Kraus operator is proportional to a unitary, so branch
  /// probabilities do not depend on the state.
  bool is_mixed_unitary(double tol = 1e-12) const;
};

bool is_trace_preserving(const QuantumChannel& channel, double tol = 1e-10);

namespace channels {

/// rho -> (1 - p) rho + p I / 2^n on `num_qubits` qubits.
QuantumChannel depolarizing(double p, int num_qubits = 1);

/// Amplitude damping with exp(-t/T1) population decay combined with the
/// coherence factor exp(-t/(2 T2)). Infinite times mean no decay. When T2 > T1
/// the coherence is limited by amplitude damping alone.
QuantumChannel thermal_relaxation(double t, double t1, double t2);

/// rho -> (1 - p) rho + p Z rho Z.
QuantumChannel dephasing(double p);

/// X with probability p.
QuantumChannel bit_flip(double p);

/// Projective Z measurement followed by a classical flip of the recorded
/// value (0 -> 1 with p01, 1 -> 0 with p10). Leaves the qubit diagonal and
/// holding the recorded bit.
QuantumChannel measure_and_flip(double p01, double p10);

}  // namespace channels

}  // namespace stqs

#endif  // STQS_CHANNEL_H
