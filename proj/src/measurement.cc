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

#include "stqs/measurement.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace stqs {

void ReadoutError::validate() const {
  if (!(p01 >= 0.0 && p01 <= 1.0 && p10 >= 0.0 && p10 <= 1.0)) {
    throw std::invalid_argument("readout error probabilities must lie in [0, 1]");
  }
}

void MeasurementSpec::validate(int num_qubits) const {
  if (shots == 0) throw std::invalid_argument("measurement needs at least one shot");
  if (qubits.empty()) throw std::invalid_argument("measurement needs at least one qubit");
  std::set<int> seen;
  for (int q : qubits) {
    if (q < 0 || q >= num_qubits) throw std::out_of_range("measured qubit out of range");
    if (!seen.insert(q).second) throw std::invalid_argument("qubit measured twice");
  }
  if (!bases.empty() && bases.size() != qubits.size()) {
    throw std::invalid_argument("basis list length does not match measured qubits");
  }
  if (!readout.empty() && readout.size() != qubits.size()) {
    throw std::invalid_argument("readout error list length does not match measured qubits");
  }
  for (const auto& r : readout) r.validate();
}

std::size_t OutcomeCounts::position(int qubit) const {
  const auto it = std::find(qubits.begin(), qubits.end(), qubit);
  if (it == qubits.end()) {
    throw std::invalid_argument("qubit " + std::to_string(qubit) + " was not measured");
  }
  return static_cast<std::size_t>(it - qubits.begin());
}

double OutcomeCounts::fraction(int qubit, int value) const {
  if (kept_shots == 0) throw std::domain_error("fraction of an empty histogram");
  const std::size_t pos = position(qubit);
  const char want = value ? '1' : '0';
  std::uint64_t hits = 0;
  for (const auto& [key, c] : counts) {
    if (key[pos] == want) hits += c;
  }
  return static_cast<double>(hits) / static_cast<double>(kept_shots);
}

double OutcomeCounts::kept_fraction() const {
  if (total_shots == 0) return 0.0;
  return static_cast<double>(kept_shots) / static_cast<double>(total_shots);
}

std::string bits_to_key(std::uint64_t index, std::size_t width) {
  std::string key(width, '0');
  for (std::size_t j = 0; j < width; ++j) {
    if ((index >> j) & 1u) key[j] = '1';
  }
  return key;
}

void check_normalized(std::span<const double> probs, double tol) {
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(std::abs(total - 1.0) <= tol)) {
    throw std::domain_error("outcome probabilities sum to " + std::to_string(total) +
                            "; upstream state is corrupted");
  }
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> sample_multinomial(
    std::span<const double> probs, std::uint64_t shots, std::mt19937_64& rng) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  double remaining_mass = 0.0;
  for (double p : probs) remaining_mass += std::max(0.0, p);
  std::uint64_t remaining = shots;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) last = i;
  }
  for (std::size_t i = 0; i < probs.size() && remaining > 0; ++i) {
    const double p = std::max(0.0, probs[i]);
    if (p == 0.0) continue;
    std::uint64_t k;
    if (i == last || p >= remaining_mass) {
      k = remaining;
    } else {
      std::binomial_distribution<std::uint64_t> draw(remaining, p / remaining_mass);
      k = draw(rng);
    }
    remaining_mass -= p;
    remaining -= k;
    if (k > 0) out.emplace_back(i, k);
  }
  return out;
}

std::map<std::uint64_t, std::uint64_t> apply_readout_flips(
    const std::map<std::uint64_t, std::uint64_t>& counts,
    std::span<const ReadoutError> readout, std::mt19937_64& rng) {
  std::map<std::uint64_t, std::uint64_t> current = counts;
  for (std::size_t j = 0; j < readout.size(); ++j) {
    const ReadoutError& err = readout[j];
    if (err.is_zero()) continue;
    std::map<std::uint64_t, std::uint64_t> next;
    for (const auto& [idx, c] : current) {
      const bool one = (idx >> j) & 1u;
      const double p = one ? err.p10 : err.p01;
      std::uint64_t flipped = 0;
      if (p > 0.0) {
        std::binomial_distribution<std::uint64_t> draw(c, p);
        flipped = draw(rng);
      }
      if (c - flipped > 0) next[idx] += c - flipped;
      if (flipped > 0) next[idx ^ (std::uint64_t{1} << j)] += flipped;
    }
    current = std::move(next);
  }
  return current;
}

void apply_readout_to_distribution(std::vector<double>& probs,
                                   std::span<const ReadoutError> readout) {
  for (std::size_t j = 0; j < readout.size(); ++j) {
    const ReadoutError& err = readout[j];
    if (err.is_zero()) continue;
    const std::uint64_t mask = std::uint64_t{1} << j;
    for (std::uint64_t i = 0; i < probs.size(); ++i) {
      if (i & mask) continue;
      const double p0 = probs[i];
      const double p1 = probs[i | mask];
      probs[i] = p0 * (1.0 - err.p01) + p1 * err.p10;
      probs[i | mask] = p0 * err.p01 + p1 * (1.0 - err.p10);
    }
  }
}

std::vector<double> marginalize(std::span<const double> full, int num_qubits,
                                std::span<const int> qubits) {
  if (full.size() != (std::size_t{1} << num_qubits)) {
    throw std::invalid_argument("marginalize: distribution length is not 2^n");
  }
  std::vector<double> out(std::size_t{1} << qubits.size(), 0.0);
  for (std::uint64_t i = 0; i < full.size(); ++i) {
    if (full[i] == 0.0) continue;
    std::uint64_t key = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
      key |= ((i >> qubits[j]) & 1u) << j;
    }
    out[key] += full[i];
  }
  return out;
}

OutcomeCounts measure(const QuantumState& state, const MeasurementSpec& spec, std::uint64_t seed) {
  spec.validate(state.num_qubits());
  QuantumState work = state;
  for (std::size_t j = 0; j < spec.qubits.size(); ++j) {
    if (!spec.bases.empty() && spec.bases[j] == Basis::x) apply_gate(work, gates::h(spec.qubits[j]));
  }
  const std::vector<double> full = probabilities(work);
  check_normalized(full);

  // Order output bits by ascending qubit index.
  std::vector<std::size_t> order(spec.qubits.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return spec.qubits[a] < spec.qubits[b]; });
  std::vector<int> sorted_qubits;
  std::vector<ReadoutError> readout;
  for (std::size_t j : order) {
    sorted_qubits.push_back(spec.qubits[j]);
    readout.push_back(spec.readout.empty() ? ReadoutError{} : spec.readout[j]);
  }

  const std::vector<double> marginal = marginalize(full, state.num_qubits(), sorted_qubits);
  std::mt19937_64 rng(seed);
  std::map<std::uint64_t, std::uint64_t> raw;
  for (const auto& [idx, c] : sample_multinomial(marginal, spec.shots, rng)) raw[idx] = c;
  const auto flipped = apply_readout_flips(raw, readout, rng);

  OutcomeCounts out;
  out.qubits = sorted_qubits;
  out.total_shots = spec.shots;
  out.kept_shots = spec.shots;
  for (const auto& [idx, c] : flipped) out.counts[bits_to_key(idx, sorted_qubits.size())] += c;
  return out;
}

OutcomeCounts postselect(const OutcomeCounts& counts, const std::map<int, int>& pattern) {
  std::vector<std::pair<std::size_t, char>> checks;
  for (const auto& [q, v] : pattern) {
    if (v != 0 && v != 1) throw std::invalid_argument("postselect: pattern values must be 0 or 1");
    checks.emplace_back(counts.position(q), v ? '1' : '0');
  }
  OutcomeCounts out;
  out.qubits = counts.qubits;
  out.total_shots = counts.total_shots;
  for (const auto& [key, c] : counts.counts) {
    const bool keep = std::all_of(checks.begin(), checks.end(),
                                  [&](const auto& chk) { return key[chk.first] == chk.second; });
    if (keep) {
      out.counts[key] = c;
      out.kept_shots += c;
    }
  }
  if (out.kept_shots == 0) {
    throw EmptyPostselection("post-selection discarded every shot");
  }
  return out;
}

}  // namespace stqs
