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

#ifndef STQS_PIPELINE_H
#define STQS_PIPELINE_H

#include <string>
#include <variant>
#include <vector>

#include "stqs/circuit.h"
#include "stqs/noise.h"

namespace stqs {

enum class Encoding { phase, rx };
enum class Correction { physical_z, post_processing };
enum class ProcessingBasis { x, z, none };

std::string encoding_name(Encoding e);
Encoding parse_encoding(const std::string& name);
std::string correction_name(Correction c);
Correction parse_correction(const std::string& name);

/// Stage parameters. Qubits are resolved by assemble(): each sensing block
/// has n_sensing qubits, a fresh block is allocated per retrieval, and the
/// memory qubit is the highest index.
struct ProbePrep {
  std::vector<int> flipped;  // block-local qubits given an X before the CNOT chain
};
struct Sensing {
  Encoding encoding = Encoding::phase;
  std::vector<double> angles;  // one per sensing qubit in the block
};
struct Storage {
  Correction correction = Correction::post_processing;
};
struct Delay {
  double tau = 0.0;
  double rate = 1.0;        // radians of phase per unit of tau
  double time_unit = 1e-6;  // seconds of idling per unit of tau
};
struct Retrieval {};
struct Processing {
  ProcessingBasis basis = ProcessingBasis::x;
};

using StageSpec = std::variant<ProbePrep, Sensing, Storage, Delay, Retrieval, Processing>;

std::string stage_name(const StageSpec& stage);

struct PipelineSpec {
  int n_sensing = 1;
  std::vector<StageSpec> steps;
  bool memory_enabled = true;
};

/// H on qubits[0], X on `flipped`, then CNOT(qubits[i] -> qubits[i+1]).
Circuit build_probe_prep(int width, const std::vector<int>& qubits, const std::vector<int>& flipped = {});
/// n-qubit GHZ preparation.
Circuit build_probe_prep(int n);

Circuit build_sensing(int width, const std::vector<int>& qubits, Encoding encoding,
                      const std::vector<double>& angles);

/// CNOT(sensors[0] -> memory) unless the memory already shares the GHZ
/// branch (after a retrieval), X-basis measurement of every sensor, then the
/// parity correction of the memory phase.
Circuit build_storage(int width, const std::vector<int>& sensors, int memory, Correction correction,
                      bool memory_joined = false);

/// diag(1, e^{i rate tau}) on the memory, idling for tau * time_unit seconds.
Circuit build_delay(int width, int memory, const Delay& delay);

/// CNOT fan-out from the memory onto fresh sensors.
Circuit build_retrieval(int width, int memory, const std::vector<int>& fresh);

struct PipelineLayout {
  int num_qubits = 0;
  int memory = -1;                       // -1 when memory is disabled
  std::vector<std::vector<int>> blocks;  // sensor qubits per block
};

PipelineLayout pipeline_layout(const PipelineSpec& spec);

/// Ideal circuit for the pipeline; throws on ill-ordered stages.
Circuit build_pipeline(const PipelineSpec& spec);

/// build_pipeline followed by attach_noise with the scaled profile.
Circuit assemble(const PipelineSpec& spec, const NoiseProfile& profile, const NoiseScope& scope,
                 const NoiseOptions& options = {});

/// arg(rho_10) of the reduced state of `qubit`: the relative phase of |1>.
double relative_phase(const QuantumState& state, int qubit);

}  // namespace stqs

#endif  // STQS_PIPELINE_H
