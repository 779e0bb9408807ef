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

#include "stqs/circuit.h"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stqs {

Circuit::Circuit(int num_qubits, std::vector<Role> roles) : num_qubits_(num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("circuit needs at least one qubit");
  if (roles.empty()) roles.assign(num_qubits, Role::sensing);
  if (static_cast<int>(roles.size()) != num_qubits) {
    throw std::invalid_argument("role list length does not match qubit count");
  }
  roles_ = std::move(roles);
}

Circuit& Circuit::add(const Gate& gate) {
  validate_gate(gate, num_qubits_);
  ops_.push_back(GateOp{gate});
  return *this;
}

Circuit& Circuit::add_channel(const QuantumChannel& channel, std::vector<int> qubits) {
  if (static_cast<int>(qubits.size()) != channel.arity) {
    throw std::invalid_argument("channel " + channel.name + ": arity mismatch");
  }
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits_) throw std::out_of_range("channel target out of range");
  }
  ops_.push_back(ChannelOp{channel, std::move(qubits)});
  return *this;
}

Circuit& Circuit::measure(int qubit, Basis basis, ReadoutError readout) {
  if (qubit < 0 || qubit >= num_qubits_) throw std::out_of_range("measured qubit out of range");
  readout.validate();
  ops_.push_back(MeasureOp{qubit, basis, readout});
  return *this;
}

Circuit& Circuit::controlled(const Gate& gate, std::vector<int> controls) {
  validate_gate(gate, num_qubits_);
  if (controls.empty()) throw std::invalid_argument("classical control needs a control bit");
  ops_.push_back(ControlledOp{gate, std::move(controls)});
  return *this;
}

Circuit& Circuit::add_fixup(ParityFixup fixup) {
  fixups_.push_back(std::move(fixup));
  return *this;
}

Circuit& Circuit::push(Instruction op) {
  ops_.push_back(std::move(op));
  return *this;
}

Circuit& Circuit::extend(const Circuit& other) {
  if (other.num_qubits_ != num_qubits_) throw std::invalid_argument("extend: width mismatch");
  ops_.insert(ops_.end(), other.ops_.begin(), other.ops_.end());
  fixups_.insert(fixups_.end(), other.fixups_.begin(), other.fixups_.end());
  return *this;
}

std::vector<int> Circuit::measured_qubits() const {
  std::vector<int> out;
  for (const auto& op : ops_) {
    if (const auto* m = std::get_if<MeasureOp>(&op)) out.push_back(m->qubit);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Circuit::has_noise() const {
  for (const auto& op : ops_) {
    if (std::holds_alternative<ChannelOp>(op)) return true;
    if (const auto* m = std::get_if<MeasureOp>(&op); m && !m->readout.is_zero()) return true;
  }
  return false;
}

std::vector<int> instruction_qubits(const Instruction& op) {
  return std::visit(
      [](const auto& v) -> std::vector<int> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GateOp>) return v.gate.qubits;
        if constexpr (std::is_same_v<T, ChannelOp>) return v.qubits;
        if constexpr (std::is_same_v<T, MeasureOp>) return {v.qubit};
        if constexpr (std::is_same_v<T, ControlledOp>) return v.gate.qubits;
      },
      op);
}

void Circuit::validate() const {
  std::vector<bool> measured(num_qubits_, false);
  auto check_live = [&](int q, const std::string& what) {
    if (q < 0 || q >= num_qubits_) throw std::out_of_range(what + ": qubit out of range");
    if (measured[q]) {
      throw std::invalid_argument(what + ": qubit " + std::to_string(q) + " used after measurement");
    }
  };
  for (const auto& op : ops_) {
    if (const auto* g = std::get_if<GateOp>(&op)) {
      validate_gate(g->gate, num_qubits_);
      for (int q : g->gate.qubits) check_live(q, gate_name(g->gate.kind));
    } else if (const auto* c = std::get_if<ChannelOp>(&op)) {
      for (int q : c->qubits) check_live(q, "channel " + c->channel.name);
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      check_live(m->qubit, "measure");
      measured[m->qubit] = true;
    } else if (const auto* cc = std::get_if<ControlledOp>(&op)) {
      validate_gate(cc->gate, num_qubits_);
      for (int q : cc->gate.qubits) check_live(q, "controlled " + gate_name(cc->gate.kind));
      for (int q : cc->controls) {
        if (q < 0 || q >= num_qubits_ || !measured[q]) {
          throw std::invalid_argument("controlling qubit " + std::to_string(q) +
                                      " has not been measured yet");
        }
      }
    }
  }
  for (const auto& f : fixups_) {
    if (f.target < 0 || f.target >= num_qubits_ || !measured[f.target]) {
      throw std::invalid_argument("parity fixup target is not measured");
    }
    for (int q : f.sources) {
      if (q < 0 || q >= num_qubits_ || !measured[q]) {
        throw std::invalid_argument("parity fixup source is not measured");
      }
    }
  }
  for (int q : external_inputs_) {
    if (q < 0 || q >= num_qubits_) throw std::out_of_range("external input qubit out of range");
  }
}

}  // namespace stqs
