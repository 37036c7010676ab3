// Copyright 2026 The qfn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qfn/sampling.hpp"

#include <cmath>
#include <numbers>

#include "qfn/errors.hpp"

namespace qfn {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

CounterRng CounterRng::for_trial(std::uint64_t seed, std::uint64_t trial) {
  return CounterRng(mix64(seed ^ mix64(trial + 1)));
}

std::uint64_t CounterRng::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
}

double CounterRng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::normal() {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

Complex CounterRng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return Complex(re, im) / std::sqrt(2.0);
}

std::int64_t CounterRng::uniform_int(std::int64_t lo, std::int64_t hi) {
  const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<std::int64_t>(next_u64() % span);
}

Matrix gaussian_matrix(CounterRng& rng, Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) m(r, c) = rng.complex_normal();
  }
  return m;
}

Matrix random_unitary(CounterRng& rng, Index n) {
  Matrix q = gaussian_matrix(rng, n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index j = 0; j < k; ++j) {
      const Complex proj = q.col(j).dot(q.col(k));
      q.col(k) -= proj * q.col(j);
    }
    const double norm = q.col(k).norm();
    if (norm == 0.0) throw Error("degenerate Gaussian sample");
    q.col(k) /= norm;
  }
  return q;
}

Matrix random_hermitian(CounterRng& rng, Index n) {
  const Matrix g = gaussian_matrix(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

Matrix random_scaled_unitary(CounterRng& rng, Index n, double lo, double hi) {
  const Matrix u = random_unitary(rng, n);
  Eigen::VectorXcd s(n);
  for (Index k = 0; k < n; ++k) s(k) = lo + (hi - lo) * rng.uniform();
  const Matrix w = random_unitary(rng, n);
  return u * s.asDiagonal() * w;
}

SLHTriple random_slh(CounterRng& rng, Index n, Index d) {
  const Matrix s = random_unitary(rng, n * d);
  const Matrix l = gaussian_matrix(rng, n * d, d);
  const Matrix h = random_hermitian(rng, d);
  return SLHTriple::make(s, l, h, d);
}

ItoMatrix random_ito(CounterRng& rng, Index n, Index d) {
  Labels labels{kZero};
  const Labels channels = channel_labels(n);
  labels.insert(labels.end(), channels.begin(), channels.end());
  return ItoMatrix(
      BlockMatrix(labels, labels, d, gaussian_matrix(rng, (n + 1) * d,
                                                     (n + 1) * d)));
}

}  // namespace qfn
