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

#ifndef STQS_GATE_H
#define STQS_GATE_H

#include <string>
#include <vector>

#include "stqs/linalg.h"

namespace stqs {

enum class GateKind { h, x, z, phase, rx, cnot, cswap, delay };

/// A unitary instruction. Multi-qubit gates list controls first:
/// CNOT = {control, target}, CSWAP = {control, a, b}.
struct Gate {
  GateKind kind = GateKind::h;
  std::vector<int> qubits;
  double angle = 0.0;      // P, Rx, Delay phase (radians)
  double wall_time = 0.0;  // Delay only: idle duration in seconds, used by noise insertion

  bool operator==(const Gate&) const = default;
};

int arity(GateKind kind);
std::string gate_name(GateKind kind);

/// Unitary in the local ordering of `gate.qubits` (qubits[j] is local bit j).
Matrix unitary(const Gate& gate);

/// Throws std::out_of_range / std::invalid_argument on bad targets or arity.
void validate_gate(const Gate& gate, int num_qubits);

namespace gates {
Gate h(int q);
Gate x(int q);
Gate z(int q);
Gate phase(int q, double phi);
Gate rx(int q, double phi);
Gate cnot(int control, int target);
Gate cswap(int control, int a, int b);
Gate delay(int q, double phase, double wall_time = 0.0);
}  // namespace gates

}  // namespace stqs

#endif  // STQS_GATE_H
