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

#ifndef STQS_MEASUREMENT_H
#define STQS_MEASUREMENT_H

#include <cstdint>
#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stqs/state.h"

namespace stqs {

enum class Basis { z, x };

/// Classical flip probabilities applied to a recorded bit.
struct ReadoutError {
  double p01 = 0.0;  // recorded 1 when the qubit was 0
  double p10 = 0.0;  // recorded 0 when the qubit was 1

  bool is_zero() const { return p01 == 0.0 && p10 == 0.0; }
  void validate() const;
  bool operator==(const ReadoutError&) const = default;
};

struct MeasurementSpec {
  std::vector<int> qubits;
  std::vector<Basis> bases;            // empty means Z for every qubit
  std::vector<ReadoutError> readout;   // empty means noiseless readout
  std::uint64_t shots = 0;

  void validate(int num_qubits) const;
};

/// Histogram of recorded bitstrings. Character j of a key is the value of
/// `qubits[j]`; qubits are kept in ascending order so qubit 0 prints leftmost.
struct OutcomeCounts {
  std::vector<int> qubits;
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t total_shots = 0;
  std::uint64_t kept_shots = 0;

  /// Position of `qubit` inside keys; throws if it was not measured.
  std::size_t position(int qubit) const;
  /// Fraction of kept shots where `qubit` recorded `value`.
  double fraction(int qubit, int value) const;
  double kept_fraction() const;

  bool operator==(const OutcomeCounts&) const = default;
};

class EmptyPostselection : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Born-rule sampling followed by independent classical readout flips.
/// Deterministic for a given seed.
OutcomeCounts measure(const QuantumState& state, const MeasurementSpec& spec, std::uint64_t seed);

/// Keeps shots whose bits match `pattern` (qubit -> required value). Throws
/// EmptyPostselection when nothing survives.
OutcomeCounts postselect(const OutcomeCounts& counts, const std::map<int, int>& pattern);

/// Multinomial draw via conditional binomials. Returns (index, count) pairs
/// for every index with a nonzero count, in ascending index order.
std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_multinomial(
    std::span<const double> probs, std::uint64_t shots, std::mt19937_64& rng);

/// Flips bit j of each recorded index with the per-bit readout error, by
/// binomial splitting of the counts (equivalent to per-shot flips).
std::map<std::uint64_t, std::uint64_t> apply_readout_flips(
    const std::map<std::uint64_t, std::uint64_t>& counts,
    std::span<const ReadoutError> readout, std::mt19937_64& rng);

/// Exact version of apply_readout_flips on a probability vector over bits.
void apply_readout_to_distribution(std::vector<double>& probs,
                                   std::span<const ReadoutError> readout);

/// Marginal distribution over `qubits` (output bit j = qubits[j]).
std::vector<double> marginalize(std::span<const double> full, int num_qubits,
                                std::span<const int> qubits);

std::string bits_to_key(std::uint64_t index, std::size_t width);

/// Throws std::domain_error if `probs` does not sum to 1 within `tol`.
void check_normalized(std::span<const double> probs, double tol = 1e-8);

}  // namespace stqs

#endif  // STQS_MEASUREMENT_H
