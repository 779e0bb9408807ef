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

#include "stqs/gate.h"

#include <cmath>
#include <set>
#include <stdexcept>

namespace stqs {

int arity(GateKind kind) {
  switch (kind) {
    case GateKind::cnot: return 2;
    case GateKind::cswap: return 3;
    default: return 1;
  }
}

std::string gate_name(GateKind kind) {
  switch (kind) {
    case GateKind::h: return "H";
    case GateKind::x: return "X";
    case GateKind::z: return "Z";
    case GateKind::phase: return "P";
    case GateKind::rx: return "RX";
    case GateKind::cnot: return "CNOT";
    case GateKind::cswap: return "CSWAP";
    case GateKind::delay: return "DELAY";
  }
  return "?";
}

Matrix unitary(const Gate& gate) {
  const Complex i1(0.0, 1.0);
  switch (gate.kind) {
    case GateKind::h: {
      Matrix m(2, 2);
      const double s = 1.0 / std::sqrt(2.0);
      m << s, s, s, -s;
      return m;
    }
    case GateKind::x: {
      Matrix m(2, 2);
      m << 0, 1, 1, 0;
      return m;
    }
    case GateKind::z: {
      Matrix m(2, 2);
      m << 1, 0, 0, -1;
      return m;
    }
    case GateKind::phase:
    case GateKind::delay: {
      Matrix m = Matrix::Zero(2, 2);
      m(0, 0) = 1.0;
      m(1, 1) = std::exp(i1 * gate.angle);
      return m;
    }
    case GateKind::rx: {
      Matrix m(2, 2);
      const double c = std::cos(gate.angle / 2.0);
      const double s = std::sin(gate.angle / 2.0);
      m << c, -i1 * s, -i1 * s, c;
      return m;
    }
    case GateKind::cnot: {
      // local bit 0 = control, bit 1 = target
      Matrix m = Matrix::Zero(4, 4);
      m(0, 0) = 1.0;
      m(2, 2) = 1.0;
      m(3, 1) = 1.0;
      m(1, 3) = 1.0;
      return m;
    }
    case GateKind::cswap: {
      // local bit 0 = control, bits 1 and 2 swapped when control is set
      Matrix m = Matrix::Zero(8, 8);
      for (int l = 0; l < 8; ++l) {
        int out = l;
        if (l & 1) {
          const int a = (l >> 1) & 1;
          const int b = (l >> 2) & 1;
          out = 1 | (b << 1) | (a << 2);
        }
        m(out, l) = 1.0;
      }
      return m;
    }
  }
  throw std::invalid_argument("unitary: unknown gate kind");
}

void validate_gate(const Gate& gate, int num_qubits) {
  if (static_cast<int>(gate.qubits.size()) != arity(gate.kind)) {
    throw std::invalid_argument(gate_name(gate.kind) + ": expected " +
                                std::to_string(arity(gate.kind)) + " qubit(s), got " +
                                std::to_string(gate.qubits.size()));
  }
  std::set<int> seen;
  for (int q : gate.qubits) {
    if (q < 0 || q >= num_qubits) {
      throw std::out_of_range(gate_name(gate.kind) + ": qubit " + std::to_string(q) +
                              " out of range for " + std::to_string(num_qubits) + " qubits");
    }
    if (!seen.insert(q).second) {
      throw std::invalid_argument(gate_name(gate.kind) + ": repeated qubit " + std::to_string(q));
    }
  }
  if (!std::isfinite(gate.angle) || !std::isfinite(gate.wall_time) || gate.wall_time < 0) {
    throw std::invalid_argument(gate_name(gate.kind) + ": non-finite angle or negative duration");
  }
}

namespace gates {
Gate h(int q) { return {GateKind::h, {q}}; }
Gate x(int q) { return {GateKind::x, {q}}; }
Gate z(int q) { return {GateKind::z, {q}}; }
Gate phase(int q, double phi) { return {GateKind::phase, {q}, phi}; }
Gate rx(int q, double phi) { return {GateKind::rx, {q}, phi}; }
Gate cnot(int control, int target) { return {GateKind::cnot, {control, target}}; }
Gate cswap(int control, int a, int b) { return {GateKind::cswap, {control, a, b}}; }
Gate delay(int q, double phase, double wall_time) {
  return {GateKind::delay, {q}, phase, wall_time};
}
}  // namespace gates

}  // namespace stqs
