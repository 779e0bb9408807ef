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

#ifndef STQS_LINALG_H
#define STQS_LINALG_H

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace stqs {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Applies a 2^k x 2^k operator to k bit positions of an amplitude array of
/// length 2^num_bits. Local bit j of the operator's index corresponds to
/// `bits[j]` of the global index (little-endian on both sides).
///
/// The same kernel drives state vectors (bits = qubits) and vectorized density
/// matrices (row qubit q is bit q, column qubit q is bit q + n).
void apply_to_bits(std::span<Complex> data, int num_bits, std::span<const int> bits,
                   const Matrix& op);

/// Kronecker product with `a` acting on the high bits.
Matrix kron(const Matrix& a, const Matrix& b);

double max_abs_diff(const Matrix& a, const Matrix& b);

bool is_unitary(const Matrix& u, double tol);

/// Inserts zero bits at the (ascending) positions in `sorted_bits`.
inline std::uint64_t deposit_zero_bits(std::uint64_t value, std::span<const int> sorted_bits) {
  for (int b : sorted_bits) {
    const std::uint64_t low = value & ((std::uint64_t{1} << b) - 1);
    value = ((value >> b) << (b + 1)) | low;
  }
  return value;
}

}  // namespace stqs

#endif  // STQS_LINALG_H
