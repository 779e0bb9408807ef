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

#ifndef STQS_CIRCUIT_H
#define STQS_CIRCUIT_H

#include <variant>
#include <vector>

#include "stqs/channel.h"
#include "stqs/gate.h"
#include "stqs/measurement.h"
#include "stqs/state.h"

namespace stqs {

struct GateOp {
  Gate gate;
};

struct ChannelOp {
  QuantumChannel channel;
  std::vector<int> qubits;
};

/// Terminal measurement of one qubit. The qubit may not be touched by any
/// later gate; its recorded bit may drive ControlledOp and ParityFixup.
struct MeasureOp {
  int qubit = 0;
  Basis basis = Basis::z;
  ReadoutError readout;
};

/// Applies `gate` iff the XOR of the recorded bits of `controls` is 1.
/// A single control is the usual "apply if measured 1".
struct ControlledOp {
  Gate gate;
  std::vector<int> controls;
};

using Instruction = std::variant<GateOp, ChannelOp, MeasureOp, ControlledOp>;

/// Classical post-processing on recorded bits: flip the bit of `target` when
/// the XOR of the bits of `sources` is 1. Applied after all shots are taken.
struct ParityFixup {
  int target = 0;
  std::vector<int> sources;
};

class Circuit {
 public:
  Circuit() = default;
  explicit Circuit(int num_qubits, std::vector<Role> roles = {});

  int num_qubits() const { return num_qubits_; }
  const std::vector<Role>& roles() const { return roles_; }
  Role role(int q) const { return roles_.at(q); }
  void set_role(int q, Role role) { roles_.at(q) = role; }

  const std::vector<Instruction>& instructions() const { return ops_; }
  const std::vector<ParityFixup>& fixups() const { return fixups_; }

  Circuit& add(const Gate& gate);
  Circuit& add_channel(const QuantumChannel& channel, std::vector<int> qubits);
  Circuit& measure(int qubit, Basis basis = Basis::z, ReadoutError readout = {});
  Circuit& controlled(const Gate& gate, std::vector<int> controls);
  Circuit& add_fixup(ParityFixup fixup);
  Circuit& push(Instruction op);

  /// Appends every instruction and fixup of `other` (same width).
  Circuit& extend(const Circuit& other);

  /// Measured qubits in ascending order.
  std::vector<int> measured_qubits() const;

  /// True if the circuit carries any channel or nonzero readout error.
  bool has_noise() const;
  bool noise_attached() const { return noise_attached_; }
  void mark_noise_attached() { noise_attached_ = true; }

  /// Qubits whose initial state is supplied by the caller rather than
  /// prepared in |0> (no state-preparation error is attached to them).
  const std::vector<int>& external_inputs() const { return external_inputs_; }
  void set_external_inputs(std::vector<int> qubits) { external_inputs_ = std::move(qubits); }

  /// Structural checks: targets in range, no gate after a qubit's
  /// measurement, controls and fixup bits measured before use.
  void validate() const;

 private:
  int num_qubits_ = 0;
  std::vector<Role> roles_;
  std::vector<Instruction> ops_;
  std::vector<ParityFixup> fixups_;
  std::vector<int> external_inputs_;
  bool noise_attached_ = false;
};

/// Qubits an instruction acts on (for a ControlledOp: the gate targets).
std::vector<int> instruction_qubits(const Instruction& op);

}  // namespace stqs

#endif  // STQS_CIRCUIT_H
