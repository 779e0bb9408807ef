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

#include "stqs/pipeline.h"

#include <cmath>
#include <stdexcept>

namespace stqs {

std::string encoding_name(Encoding e) { return e == Encoding::phase ? "phase" : "rx"; }

Encoding parse_encoding(const std::string& name) {
  if (name == "phase") return Encoding::phase;
  if (name == "rx") return Encoding::rx;
  throw std::invalid_argument("unknown encoding '" + name + "'");
}

std::string correction_name(Correction c) {
  return c == Correction::physical_z ? "physical_z" : "post_processing";
}

Correction parse_correction(const std::string& name) {
  if (name == "physical_z") return Correction::physical_z;
  if (name == "post_processing") return Correction::post_processing;
  throw std::invalid_argument("unknown correction mode '" + name + "'");
}

std::string stage_name(const StageSpec& stage) {
  static const char* names[] = {"probe_prep", "sensing", "storage", "delay", "retrieval", "processing"};
  return names[stage.index()];
}

Circuit build_probe_prep(int width, const std::vector<int>& qubits, const std::vector<int>& flipped) {
  if (qubits.empty()) throw std::invalid_argument("probe preparation needs at least one qubit");
  Circuit c(width);
  c.add(gates::h(qubits[0]));
  for (int f : flipped) {
    if (f < 0 || f >= static_cast<int>(qubits.size())) {
      throw std::out_of_range("flipped probe qubit outside the block");
    }
    c.add(gates::x(qubits[f]));
  }
  for (std::size_t i = 0; i + 1 < qubits.size(); ++i) c.add(gates::cnot(qubits[i], qubits[i + 1]));
  return c;
}

Circuit build_probe_prep(int n) {
  if (n < 1) throw std::invalid_argument("probe preparation needs at least one qubit");
  std::vector<int> qubits(n);
  for (int i = 0; i < n; ++i) qubits[i] = i;
  return build_probe_prep(n, qubits);
}

Circuit build_sensing(int width, const std::vector<int>& qubits, Encoding encoding,
                      const std::vector<double>& angles) {
  if (angles.size() != qubits.size()) {
    throw std::invalid_argument("sensing: " + std::to_string(angles.size()) + " angles for " +
                                std::to_string(qubits.size()) + " qubits");
  }
  Circuit c(width);
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    c.add(encoding == Encoding::phase ? gates::phase(qubits[i], angles[i]) : gates::rx(qubits[i], angles[i]));
  }
  return c;
}

Circuit build_storage(int width, const std::vector<int>& sensors, int memory, Correction correction,
                      bool memory_joined) {
  if (memory < 0 || memory >= width) throw std::invalid_argument("storage: missing memory qubit");
  if (sensors.empty()) throw std::invalid_argument("storage: no sensing qubits");
  Circuit c(width);
  if (!memory_joined) c.add(gates::cnot(sensors[0], memory));
  for (int s : sensors) c.measure(s, Basis::x);
  if (correction == Correction::physical_z) {
    c.controlled(gates::z(memory), sensors);
  } else {
    c.add_fixup(ParityFixup{memory, sensors});
  }
  return c;
}

Circuit build_delay(int width, int memory, const Delay& delay) {
  if (!(delay.tau >= 0.0) || !(delay.time_unit >= 0.0)) {
    throw std::invalid_argument("delay: tau and time unit must be non-negative");
  }
  Circuit c(width);
  c.add(gates::delay(memory, delay.rate * delay.tau, delay.tau * delay.time_unit));
  return c;
}

Circuit build_retrieval(int width, int memory, const std::vector<int>& fresh) {
  if (memory < 0 || memory >= width) throw std::invalid_argument("retrieval: missing memory qubit");
  Circuit c(width);
  for (int f : fresh) c.add(gates::cnot(memory, f));
  return c;
}

PipelineLayout pipeline_layout(const PipelineSpec& spec) {
  if (spec.n_sensing < 1) throw std::invalid_argument("pipeline needs at least one sensing qubit");
  int blocks = 1;
  for (const auto& s : spec.steps) {
    if (std::holds_alternative<Retrieval>(s)) ++blocks;
  }
  PipelineLayout layout;
  for (int b = 0; b < blocks; ++b) {
    std::vector<int> block;
    for (int i = 0; i < spec.n_sensing; ++i) block.push_back(b * spec.n_sensing + i);
    layout.blocks.push_back(block);
  }
  layout.num_qubits = blocks * spec.n_sensing + (spec.memory_enabled ? 1 : 0);
  layout.memory = spec.memory_enabled ? layout.num_qubits - 1 : -1;
  return layout;
}

Circuit build_pipeline(const PipelineSpec& spec) {
  if (spec.steps.empty()) throw std::invalid_argument("pipeline has no stages");
  const PipelineLayout layout = pipeline_layout(spec);
  const int width = layout.num_qubits;
  const int memory = layout.memory;

  std::vector<Role> roles(width, Role::sensing);
  if (memory >= 0) roles[memory] = Role::memory;
  Circuit circuit(width, roles);

  std::size_t block = 0;
  bool prepared = false;       // current block holds an entangled probe
  bool block_measured = false;  // current block already stored
  bool stored_once = false;
  bool memory_joined = false;   // memory shares the current GHZ branch
  bool processed = false;

  auto fail = [](const std::string& msg) { throw std::invalid_argument("pipeline: " + msg); };
  auto need_memory = [&](const char* what) {
    if (memory < 0) fail(std::string(what) + " requires the memory qubit");
  };

  for (std::size_t i = 0; i < spec.steps.size(); ++i) {
    const StageSpec& stage = spec.steps[i];
    if (processed) fail("no stage may follow processing");
    const auto& qubits = layout.blocks[block];
    if (const auto* p = std::get_if<ProbePrep>(&stage)) {
      if (i != 0) fail("probe preparation must be the first stage");
      circuit.extend(build_probe_prep(width, qubits, p->flipped));
      prepared = true;
    } else if (const auto* s = std::get_if<Sensing>(&stage)) {
      if (block_measured) fail("sensing on a block that was already stored");
      circuit.extend(build_sensing(width, qubits, s->encoding, s->angles));
    } else if (const auto* st = std::get_if<Storage>(&stage)) {
      need_memory("storage");
      if (block_measured) fail("block stored twice");
      if (!prepared) fail("storage before probe preparation");
      circuit.extend(build_storage(width, qubits, memory, st->correction, memory_joined));
      block_measured = true;
      stored_once = true;
      memory_joined = false;
    } else if (const auto* d = std::get_if<Delay>(&stage)) {
      need_memory("delay");
      if (!stored_once) fail("delay before any storage");
      circuit.extend(build_delay(width, memory, *d));
    } else if (std::holds_alternative<Retrieval>(stage)) {
      need_memory("retrieval");
      if (!block_measured) fail("retrieval before storage of the current block");
      ++block;
      circuit.extend(build_retrieval(width, memory, layout.blocks[block]));
      block_measured = false;
      memory_joined = true;
    } else if (const auto* pr = std::get_if<Processing>(&stage)) {
      processed = true;
      if (pr->basis == ProcessingBasis::none) continue;
      const Basis basis = pr->basis == ProcessingBasis::x ? Basis::x : Basis::z;
      if (memory >= 0 && stored_once && block_measured) {
        circuit.measure(memory, basis);
      } else {
        if (block_measured) fail("processing of an already measured block");
        for (int q : qubits) circuit.measure(q, basis);
        if (memory_joined) circuit.measure(memory, basis);
      }
    }
  }
  if (!prepared) fail("missing probe preparation");
  return circuit;
}

Circuit assemble(const PipelineSpec& spec, const NoiseProfile& profile, const NoiseScope& scope,
                 const NoiseOptions& options) {
  const Circuit ideal = build_pipeline(spec);
  const NoiseProfile scaled = scale_profile(profile, scope);
  if (scaled.is_noiseless()) return ideal;
  return attach_noise(ideal, scaled, scope, options);
}

double relative_phase(const QuantumState& state, int qubit) {
  const int keep[1] = {qubit};
  const Matrix rho = partial_trace(state, keep);
  return std::arg(rho(1, 0));
}

}  // namespace stqs
