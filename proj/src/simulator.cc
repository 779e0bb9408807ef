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

#include "stqs/simulator.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <thread>

namespace stqs {

std::string backend_name(Backend backend) {
  return backend == Backend::dense ? "dense" : "trajectory";
}

Backend parse_backend(const std::string& name) {
  if (name == "dense") return Backend::dense;
  if (name == "trajectory") return Backend::trajectory;
  throw std::invalid_argument("unknown backend '" + name + "'");
}

namespace {

void check_controls(const ControlledOp& op) {
  for (std::size_t i = 0; i < op.controls.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (op.controls[i] == op.controls[j]) throw std::invalid_argument("repeated control bit");
    }
    if (std::find(op.gate.qubits.begin(), op.gate.qubits.end(), op.controls[i]) !=
        op.gate.qubits.end()) {
      throw std::invalid_argument("control bit overlaps gate target");
    }
  }
}

// Position of each measured qubit inside the output index.
std::vector<int> output_positions(const Circuit& circuit) {
  std::vector<int> pos(circuit.num_qubits(), -1);
  const auto measured = circuit.measured_qubits();
  for (std::size_t j = 0; j < measured.size(); ++j) pos[measured[j]] = static_cast<int>(j);
  return pos;
}

std::uint64_t apply_fixups(std::uint64_t idx, const std::vector<ParityFixup>& fixups,
                           const std::vector<int>& pos) {
  for (const auto& f : fixups) {
    int parity = 0;
    for (int q : f.sources) parity ^= static_cast<int>((idx >> pos[q]) & 1u);
    if (parity) idx ^= std::uint64_t{1} << pos[f.target];
  }
  return idx;
}

QuantumState initial_state(const Circuit& circuit, const QuantumState* initial) {
  if (initial == nullptr) return QuantumState::zero(circuit.num_qubits(), circuit.roles());
  if (initial->num_qubits() != circuit.num_qubits()) {
    throw std::invalid_argument("initial state width does not match circuit");
  }
  return *initial;
}

void check_measured(const Circuit& circuit) {
  if (circuit.measured_qubits().empty()) {
    throw std::invalid_argument("circuit has no measurements to sample");
  }
}

}  // namespace

void apply_parity_controlled(QuantumState& state, const Gate& gate, const std::vector<int>& controls) {
  ControlledOp op{gate, controls};
  check_controls(op);
  const int last = controls.back();
  for (std::size_t i = 0; i + 1 < controls.size(); ++i) apply_gate(state, gates::cnot(controls[i], last));

  const Matrix u = unitary(gate);
  const Eigen::Index d = u.rows();
  Matrix cu = Matrix::Zero(2 * d, 2 * d);
  for (Eigen::Index a = 0; a < d; ++a) {
    cu(2 * a, 2 * a) = 1.0;
    for (Eigen::Index b = 0; b < d; ++b) cu(2 * a + 1, 2 * b + 1) = u(a, b);
  }
  std::vector<int> qubits{last};
  qubits.insert(qubits.end(), gate.qubits.begin(), gate.qubits.end());
  apply_unitary(state, cu, qubits);

  for (std::size_t i = controls.size() - 1; i-- > 0;) apply_gate(state, gates::cnot(controls[i], last));
}

void classically_controlled(QuantumState& state, const ShotRecord& record, const ControlledOp& op) {
  int parity = 0;
  for (int q : op.controls) {
    if (q < 0 || q >= static_cast<int>(record.size()) || record[q] < 0) {
      throw std::logic_error("controlling qubit " + std::to_string(q) + " not yet measured");
    }
    parity ^= record[q];
  }
  if (parity) apply_gate(state, op.gate);
}

bool statevector_compatible(const Circuit& circuit) {
  std::vector<bool> noisy_readout(circuit.num_qubits(), false);
  for (const auto& op : circuit.instructions()) {
    if (std::holds_alternative<ChannelOp>(op)) return false;
    if (const auto* m = std::get_if<MeasureOp>(&op)) noisy_readout[m->qubit] = !m->readout.is_zero();
    if (const auto* c = std::get_if<ControlledOp>(&op)) {
      for (int q : c->controls) {
        if (noisy_readout[q]) return false;
      }
    }
  }
  return true;
}

namespace {

// Pure evolution with deferred measurement; readout error is left to the
// caller (applied to the output distribution).
QuantumState evolve_pure(const Circuit& circuit, QuantumState state) {
  for (const auto& op : circuit.instructions()) {
    if (const auto* g = std::get_if<GateOp>(&op)) {
      apply_gate(state, g->gate);
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      if (m->basis == Basis::x) apply_gate(state, gates::h(m->qubit));
    } else if (const auto* c = std::get_if<ControlledOp>(&op)) {
      apply_parity_controlled(state, c->gate, c->controls);
    } else {
      throw std::logic_error("channel in a pure-state evolution");
    }
  }
  return state;
}

QuantumState evolve_density(const Circuit& circuit, QuantumState state) {
  if (state.num_qubits() > kMaxDenseDensityQubits) {
    throw std::invalid_argument("dense density-matrix backend supports at most " +
                                std::to_string(kMaxDenseDensityQubits) +
                                " qubits; use the trajectory backend");
  }
  state.promote_to_density();
  for (const auto& op : circuit.instructions()) {
    if (const auto* g = std::get_if<GateOp>(&op)) {
      apply_gate(state, g->gate);
    } else if (const auto* ch = std::get_if<ChannelOp>(&op)) {
      apply_channel(state, ch->channel, ch->qubits);
    } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
      if (m->basis == Basis::x) apply_gate(state, gates::h(m->qubit));
      // Collapse only matters when the recorded value differs from the qubit.
      if (!m->readout.is_zero()) {
        const int q = m->qubit;
        apply_channel(state, channels::measure_and_flip(m->readout.p01, m->readout.p10),
                      std::span<const int>(&q, 1));
      }
    } else if (const auto* c = std::get_if<ControlledOp>(&op)) {
      apply_parity_controlled(state, c->gate, c->controls);
    }
  }
  return state;
}

}  // namespace

QuantumState final_state(const Circuit& circuit, const QuantumState* initial) {
  circuit.validate();
  QuantumState state = initial_state(circuit, initial);
  if (state.is_pure() && statevector_compatible(circuit) && !circuit.has_noise()) {
    return evolve_pure(circuit, std::move(state));
  }
  return evolve_density(circuit, std::move(state));
}

std::vector<double> exact_distribution(const Circuit& circuit, const QuantumState* initial) {
  circuit.validate();
  check_measured(circuit);
  const auto measured = circuit.measured_qubits();
  QuantumState state = initial_state(circuit, initial);

  std::vector<double> dist;
  if (state.is_pure() && statevector_compatible(circuit)) {
    state = evolve_pure(circuit, std::move(state));
    dist = marginalize(probabilities(state), state.num_qubits(), measured);
    std::vector<ReadoutError> readout(measured.size());
    const auto pos = output_positions(circuit);
    for (const auto& op : circuit.instructions()) {
      if (const auto* m = std::get_if<MeasureOp>(&op)) readout[pos[m->qubit]] = m->readout;
    }
    apply_readout_to_distribution(dist, readout);
  } else {
    state = evolve_density(circuit, std::move(state));
    dist = marginalize(probabilities(state), state.num_qubits(), measured);
  }
  check_normalized(dist);

  if (!circuit.fixups().empty()) {
    const auto pos = output_positions(circuit);
    std::vector<double> fixed(dist.size(), 0.0);
    for (std::uint64_t i = 0; i < dist.size(); ++i) fixed[apply_fixups(i, circuit.fixups(), pos)] += dist[i];
    dist = std::move(fixed);
  }
  return dist;
}

OutcomeCounts sample_distribution(const std::vector<double>& dist, const std::vector<int>& qubits,
                                  std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw std::invalid_argument("measurement needs at least one shot");
  if (dist.size() != (std::size_t{1} << qubits.size())) {
    throw std::invalid_argument("distribution length does not match measured qubits");
  }
  check_normalized(dist);
  std::mt19937_64 rng(seed);
  OutcomeCounts out;
  out.qubits = qubits;
  out.total_shots = shots;
  out.kept_shots = shots;
  for (const auto& [idx, c] : sample_multinomial(dist, shots, rng)) {
    out.counts[bits_to_key(idx, qubits.size())] = c;
  }
  return out;
}

OutcomeCounts run_dense(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                        const QuantumState* initial) {
  return sample_distribution(exact_distribution(circuit, initial), circuit.measured_qubits(), shots, seed);
}

namespace {

struct PreparedChannel {
  std::vector<Matrix> kraus;
  std::vector<double> fixed_weights;  // mixed-unitary channels only
  std::vector<Matrix> normalized;     // K / sqrt(w) for mixed-unitary channels
  std::vector<Matrix> effects;        // K^dagger K, so p_k = tr(E_k rho)
};

struct PreparedOp {
  const Instruction* op;
  Matrix matrix;                       // gate unitary
  std::vector<int> qubits;
  PreparedChannel channel;
};

// Reduced density matrix of `bits` from a pure vector.
Matrix reduced(const Vector& psi, int n, const std::vector<int>& bits) {
  const std::size_t local = std::size_t{1} << bits.size();
  std::vector<int> sorted(bits);
  std::sort(sorted.begin(), sorted.end());
  std::vector<std::uint64_t> off(local, 0);
  for (std::size_t l = 0; l < local; ++l) {
    for (std::size_t j = 0; j < bits.size(); ++j) {
      if ((l >> j) & 1u) off[l] |= std::uint64_t{1} << bits[j];
    }
  }
  Matrix rho = Matrix::Zero(static_cast<Eigen::Index>(local), static_cast<Eigen::Index>(local));
  const std::uint64_t rest = std::uint64_t{1} << (n - static_cast<int>(bits.size()));
  for (std::uint64_t r = 0; r < rest; ++r) {
    const std::uint64_t base = deposit_zero_bits(r, sorted);
    for (std::size_t a = 0; a < local; ++a) {
      const Complex pa = psi[static_cast<Eigen::Index>(base | off[a])];
      for (std::size_t b = 0; b < local; ++b) {
        rho(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) +=
            pa * std::conj(psi[static_cast<Eigen::Index>(base | off[b])]);
      }
    }
  }
  return rho;
}

std::mt19937_64 shot_rng(std::uint64_t seed, std::uint64_t shot) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(shot), static_cast<std::uint32_t>(shot >> 32)};
  return std::mt19937_64(seq);
}

class TrajectoryRunner {
 public:
  TrajectoryRunner(const Circuit& circuit, const QuantumState& initial)
      : circuit_(circuit), n_(circuit.num_qubits()), pos_(output_positions(circuit)) {
    if (initial.is_pure()) {
      start_.push_back(initial.amplitudes());
      start_weights_.push_back(1.0);
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(initial.density());
      for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double w = eig.eigenvalues()[i];
        if (w > 1e-14) {
          start_.push_back(eig.eigenvectors().col(i));
          start_weights_.push_back(w);
        }
      }
    }
    for (const auto& op : circuit.instructions()) {
      PreparedOp p{&op, {}, {}, {}};
      if (const auto* g = std::get_if<GateOp>(&op)) {
        p.matrix = unitary(g->gate);
        p.qubits = g->gate.qubits;
      } else if (const auto* c = std::get_if<ChannelOp>(&op)) {
        p.qubits = c->qubits;
        p.channel.kraus = c->channel.kraus;
        for (const auto& k : c->channel.kraus) p.channel.effects.push_back(k.adjoint() * k);
        if (c->channel.is_mixed_unitary()) {
          const double d = static_cast<double>(Eigen::Index{1} << c->channel.arity);
          for (const auto& k : c->channel.kraus) {
            const double w = (k.adjoint() * k).trace().real() / d;
            p.channel.fixed_weights.push_back(w);
            p.channel.normalized.push_back(w > 0.0 ? Matrix(k / std::sqrt(w)) : k);
          }
        }
      } else if (const auto* cc = std::get_if<ControlledOp>(&op)) {
        check_controls(*cc);
        p.matrix = unitary(cc->gate);
        p.qubits = cc->gate.qubits;
      }
      ops_.push_back(std::move(p));
    }
  }

  std::uint64_t run_shot(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::size_t which = 0;
    if (start_.size() > 1) {
      std::discrete_distribution<std::size_t> pick(start_weights_.begin(), start_weights_.end());
      which = pick(rng);
    }
    Vector psi = start_[which];
    std::span<Complex> data(psi.data(), static_cast<std::size_t>(psi.size()));
    ShotRecord record(n_, -1);

    for (const auto& p : ops_) {
      const Instruction& op = *p.op;
      if (std::holds_alternative<GateOp>(op)) {
        apply_to_bits(data, n_, p.qubits, p.matrix);
      } else if (std::holds_alternative<ChannelOp>(op)) {
        apply_branch(psi, p, uni(rng));
      } else if (const auto* m = std::get_if<MeasureOp>(&op)) {
        record[m->qubit] = collapse(psi, *m, rng);
      } else if (const auto* cc = std::get_if<ControlledOp>(&op)) {
        int parity = 0;
        for (int q : cc->controls) {
          if (record[q] < 0) throw std::logic_error("controlling qubit not yet measured");
          parity ^= record[q];
        }
        if (parity) apply_to_bits(data, n_, p.qubits, p.matrix);
      }
    }
    std::uint64_t idx = 0;
    for (int q = 0; q < n_; ++q) {
      if (pos_[q] >= 0 && record[q] == 1) idx |= std::uint64_t{1} << pos_[q];
    }
    return apply_fixups(idx, circuit_.fixups(), pos_);
  }

 private:
  void apply_branch(Vector& psi, const PreparedOp& p, double u) const {
    std::span<Complex> data(psi.data(), static_cast<std::size_t>(psi.size()));
    const auto& ch = p.channel;
    if (!ch.fixed_weights.empty()) {
      std::size_t k = 0;
      double acc = 0.0;
      for (; k + 1 < ch.fixed_weights.size(); ++k) {
        acc += ch.fixed_weights[k];
        if (u < acc) break;
      }
      apply_to_bits(data, n_, p.qubits, ch.normalized[k]);
      return;
    }
    // Branch weights tr(E_k rho); single-qubit channels skip the matrix temporaries.
    thread_local std::vector<double> probs;
    probs.clear();
    double total = 0.0;
    if (p.qubits.size() == 1) {
      const std::uint64_t mask = std::uint64_t{1} << p.qubits[0];
      double r00 = 0.0, r11 = 0.0;
      Complex r10 = 0.0;
      for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(psi.size()); ++i) {
        if (i & mask) continue;
        const Complex a0 = psi[static_cast<Eigen::Index>(i)];
        const Complex a1 = psi[static_cast<Eigen::Index>(i | mask)];
        r00 += std::norm(a0);
        r11 += std::norm(a1);
        r10 += a1 * std::conj(a0);
      }
      for (const auto& e : ch.effects) {
        const double pk = std::max(0.0, (e(0, 0).real() * r00 + e(1, 1).real() * r11 +
                                          2.0 * (e(0, 1) * r10).real()));
        probs.push_back(pk);
        total += pk;
      }
    } else {
      const Matrix rho = reduced(psi, n_, p.qubits);
      for (const auto& e : ch.effects) {
        const double pk = std::max(0.0, (e * rho).trace().real());
        probs.push_back(pk);
        total += pk;
      }
    }
    if (!(total > 0.0)) throw std::runtime_error("channel has no valid Kraus branch");
    const double target = u * total;
    std::size_t k = probs.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
      acc += probs[i];
      if (probs[i] > 0.0) {
        k = i;
        if (target < acc) break;
      }
    }
    apply_to_bits(data, n_, p.qubits, ch.kraus[k]);
    psi /= std::sqrt(probs[k]);
  }

  int collapse(Vector& psi, const MeasureOp& m, std::mt19937_64& rng) const {
    std::span<Complex> data(psi.data(), static_cast<std::size_t>(psi.size()));
    const int q = m.qubit;
    if (m.basis == Basis::x) {
      static const Matrix hadamard = unitary(gates::h(0));
      const int bits[1] = {q};
      apply_to_bits(data, n_, bits, hadamard);
    }
    const std::uint64_t mask = std::uint64_t{1} << q;
    double p1 = 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (static_cast<std::uint64_t>(i) & mask) p1 += std::norm(psi[i]);
    }
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const int outcome = uni(rng) < p1 ? 1 : 0;
    const double keep = outcome ? p1 : 1.0 - p1;
    const double scale = keep > 0.0 ? 1.0 / std::sqrt(keep) : 0.0;
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      const int bit = (static_cast<std::uint64_t>(i) & mask) ? 1 : 0;
      psi[i] = bit == outcome ? psi[i] * scale : Complex(0.0);
    }
    int recorded = outcome;
    const double flip = outcome ? m.readout.p10 : m.readout.p01;
    if (flip > 0.0 && uni(rng) < flip) recorded ^= 1;
    return recorded;
  }

  const Circuit& circuit_;
  int n_;
  std::vector<int> pos_;
  std::vector<Vector> start_;
  std::vector<double> start_weights_;
  std::vector<PreparedOp> ops_;
};

}  // namespace

OutcomeCounts qtrajectory(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                          const QuantumState* initial, int threads) {
  if (shots == 0) throw std::invalid_argument("measurement needs at least one shot");
  circuit.validate();
  check_measured(circuit);
  const QuantumState start = initial_state(circuit, initial);

  // Without stochastic branches every trajectory is the same pure state.
  bool deterministic = start.is_pure();
  for (const auto& op : circuit.instructions()) {
    if (std::holds_alternative<ChannelOp>(op)) deterministic = false;
  }
  if (deterministic && statevector_compatible(circuit)) return run_dense(circuit, shots, seed, &start);

  const TrajectoryRunner runner(circuit, start);
  const auto measured = circuit.measured_qubits();
  const std::size_t width = std::size_t{1} << measured.size();
  threads = std::max(1, threads);
  const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(threads), shots);

  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(width, 0));
  auto work = [&](std::uint64_t w) {
    for (std::uint64_t s = w; s < shots; s += workers) {
      auto rng = shot_rng(seed, s);
      partial[w][runner.run_shot(rng)] += 1;
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (std::uint64_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  OutcomeCounts out;
  out.qubits = measured;
  out.total_shots = shots;
  out.kept_shots = shots;
  for (std::size_t i = 0; i < width; ++i) {
    std::uint64_t c = 0;
    for (const auto& p : partial) c += p[i];
    if (c > 0) out.counts[bits_to_key(i, measured.size())] = c;
  }
  return out;
}

OutcomeCounts simulate(const Circuit& circuit, std::uint64_t shots, std::uint64_t seed,
                       Backend backend, const QuantumState* initial, int threads) {
  if (backend == Backend::dense) return run_dense(circuit, shots, seed, initial);
  return qtrajectory(circuit, shots, seed, initial, threads);
}

double total_variation(const std::vector<double>& exact, const OutcomeCounts& counts) {
  if (exact.size() != (std::size_t{1} << counts.qubits.size())) {
    throw std::invalid_argument("total_variation: size mismatch");
  }
  if (counts.kept_shots == 0) throw std::domain_error("total_variation: empty counts");
  std::vector<double> emp(exact.size(), 0.0);
  for (const auto& [key, c] : counts.counts) {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < key.size(); ++j) {
      if (key[j] == '1') idx |= std::uint64_t{1} << j;
    }
    emp[idx] += static_cast<double>(c) / static_cast<double>(counts.kept_shots);
  }
  double tv = 0.0;
  for (std::size_t i = 0; i < exact.size(); ++i) tv += std::abs(exact[i] - emp[i]);
  return 0.5 * tv;
}

}  // namespace stqs
