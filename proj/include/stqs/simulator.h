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

#ifndef STQS_SIMULATOR_H
#define STQS_SIMULATOR_H

#include <cstdint>
#include <string>
#include <vector>

#include "stqs/circuit.h"
#include "stqs/measurement.h"
#include "stqs/state.h"

namespace stqs {

enum class Backend { dense, trajectory };

std::string backend_name(Backend backend);
Backend parse_backend(const std::string& name);

/// Largest register the dense density-matrix path accepts.
inline constexpr int kMaxDenseDensityQubits = 12;

/// Per-shot classical record; -1 marks a qubit that has not been measured.
using ShotRecord = std::vector<int>;

/// Applies `op.gate` iff the XOR of the recorded control bits is 1. Throws
/// std::logic_error if a control has not been measured in this shot.
void classically_controlled(QuantumState& state, const ShotRecord& record, const ControlledOp& op);

/// Coherent version of a parity-controlled gate, valid when the control
/// qubits are already diagonal (measured). Used by the dense backend.
void apply_parity_controlled(QuantumState& state, const Gate& gate, const std::vector<int>& controls);

/// True if the circuit can be simulated exactly as a pure state with
/// deferred measurement (no channels, no readout error on control bits).
bool statevector_compatible(const Circuit& circuit);

/// Evolves the circuit without sampling. Measurements are realized as basis
/// change plus collapse-and-flip channels when readout error is present;
/// classical control becomes coherent control on the measured qubits.
/// `initial` defaults to |0...0>.
QuantumState final_state(const Circuit& circuit, const QuantumState* initial = nullptr);

/// Exact probability of each recorded bitstring over circuit.measured_qubits()
/// (index bit j = j-th measured qubit), including readout error and parity fixups.
std::vector<double> exact_distribution(const Circuit& circuit, const QuantumState* initial = nullptr);

/// Multinomial sampling of an exact distribution into counts.
OutcomeCounts sample_distribution(const std::vector<double>& dist, const std::vector<int>& qubits,
                                  std::uint64_t shots, std::uint64_t seed);

OutcomeCounts run_dense(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                        const QuantumState* initial = nullptr);

/// Monte Carlo unraveling: one pure-state trajectory per shot with Kraus
/// branches drawn from tr(K rho K^dagger). Per-shot RNG streams are derived
/// from (seed, shot index), so results do not depend on `threads`.
OutcomeCounts qtrajectory(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                          const QuantumState* initial = nullptr, int threads = 1);

OutcomeCounts simulate(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                       Backend backend, const QuantumState* initial = nullptr, int threads = 1);

/// Total-variation distance between an exact distribution and the empirical
/// frequencies of `counts` (same qubit set).
double total_variation(const std::vector<double>& exact, const OutcomeCounts& counts);

}  // namespace stqs

#endif  // STQS_SIMULATOR_H
