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

#include "stqs/linalg.h"

#include <algorithm>
#include <array>
#include <stdexcept>

namespace stqs {

namespace {

template <int K>
void apply_fixed(std::span<Complex> data, int num_bits, std::span<const int> bits,
                 const Matrix& op) {
  constexpr std::size_t kLocal = std::size_t{1} << K;
  std::array<int, K> sorted{};
  std::copy(bits.begin(), bits.end(), sorted.begin());
  std::sort(sorted.begin(), sorted.end());

  std::array<std::uint64_t, kLocal> offsets{};
  for (std::size_t l = 0; l < kLocal; ++l) {
    std::uint64_t off = 0;
    for (int j = 0; j < K; ++j) {
      if ((l >> j) & 1u) off |= std::uint64_t{1} << bits[j];
    }
    offsets[l] = off;
  }

  std::array<Complex, kLocal * kLocal> m{};
  for (std::size_t r = 0; r < kLocal; ++r) {
    for (std::size_t c = 0; c < kLocal; ++c) m[r * kLocal + c] = op(r, c);
  }

  const std::uint64_t outer = std::uint64_t{1} << (num_bits - K);
  std::array<Complex, kLocal> in{};
  for (std::uint64_t i = 0; i < outer; ++i) {
    const std::uint64_t base = deposit_zero_bits(i, sorted);
    for (std::size_t l = 0; l < kLocal; ++l) in[l] = data[base | offsets[l]];
    for (std::size_t r = 0; r < kLocal; ++r) {
      Complex acc = 0;
      for (std::size_t c = 0; c < kLocal; ++c) acc += m[r * kLocal + c] * in[c];
      data[base | offsets[r]] = acc;
    }
  }
}

void apply_dynamic(std::span<Complex> data, int num_bits, std::span<const int> bits,
                   const Matrix& op) {
  const int k = static_cast<int>(bits.size());
  const std::size_t local = std::size_t{1} << k;
  std::vector<int> sorted(bits.begin(), bits.end());
  std::sort(sorted.begin(), sorted.end());

  std::vector<std::uint64_t> offsets(local);
  for (std::size_t l = 0; l < local; ++l) {
    std::uint64_t off = 0;
    for (int j = 0; j < k; ++j) {
      if ((l >> j) & 1u) off |= std::uint64_t{1} << bits[j];
    }
    offsets[l] = off;
  }

  const std::uint64_t outer = std::uint64_t{1} << (num_bits - k);
  Vector in(static_cast<Eigen::Index>(local));
  Vector out(static_cast<Eigen::Index>(local));
  for (std::uint64_t i = 0; i < outer; ++i) {
    const std::uint64_t base = deposit_zero_bits(i, sorted);
    for (std::size_t l = 0; l < local; ++l) in[l] = data[base | offsets[l]];
    out.noalias() = op * in;
    for (std::size_t l = 0; l < local; ++l) data[base | offsets[l]] = out[l];
  }
}

}  // namespace

void apply_to_bits(std::span<Complex> data, int num_bits, std::span<const int> bits,
                   const Matrix& op) {
  const int k = static_cast<int>(bits.size());
  if (k == 0 || k > num_bits) throw std::invalid_argument("apply_to_bits: bad bit count");
  if (op.rows() != (Eigen::Index{1} << k) || op.cols() != op.rows()) {
    throw std::invalid_argument("apply_to_bits: operator size does not match bit count");
  }
  if (data.size() != (std::size_t{1} << num_bits)) {
    throw std::invalid_argument("apply_to_bits: data length is not 2^num_bits");
  }
  for (int b : bits) {
    if (b < 0 || b >= num_bits) throw std::out_of_range("apply_to_bits: bit out of range");
  }
  switch (k) {
    case 1: apply_fixed<1>(data, num_bits, bits, op); break;
    case 2: apply_fixed<2>(data, num_bits, bits, op); break;
    case 3: apply_fixed<3>(data, num_bits, bits, op); break;
    case 4: apply_fixed<4>(data, num_bits, bits, op); break;
    default: apply_dynamic(data, num_bits, bits, op); break;
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument("max_abs_diff: shape mismatch");
  }
  return (a - b).cwiseAbs().maxCoeff();
}

bool is_unitary(const Matrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  const Matrix id = Matrix::Identity(u.rows(), u.cols());
  return max_abs_diff(u.adjoint() * u, id) < tol;
}

}  // namespace stqs
