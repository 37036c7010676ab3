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

#pragma once

#include <cstdint>

#include "qfn/belavkin.hpp"

namespace qfn {

/// Counter-based generator: the k-th draw (k = 1, 2, ...) is
/// mix64(key + k * 0x9E3779B97F4A7C15), where mix64 is the SplitMix64
/// finaliser. A draw depends only on (key, k), so instances are reproducible
/// from the seed alone.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) : key_(key) {}

  /// Independent stream for trial `trial` of a run seeded with `seed`:
  /// key = mix64(seed ^ mix64(trial + 1)).
  static CounterRng for_trial(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller (cosine branch only, two draws each).
  double normal();
  /// (normal() + i normal()) / sqrt(2)
  Complex complex_normal();
  /// Uniform integer in [lo, hi].
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t mix64(std::uint64_t z);

/// Entries drawn with complex_normal(), row-major.
Matrix gaussian_matrix(CounterRng& rng, Index rows, Index cols);
/// Modified Gram-Schmidt on the columns of a gaussian_matrix.
Matrix random_unitary(CounterRng& rng, Index n);
/// (G + G^dagger) / 2
Matrix random_hermitian(CounterRng& rng, Index n);
/// U diag(s) W with U, W random unitaries and s uniform in [lo, hi].
Matrix random_scaled_unitary(CounterRng& rng, Index n, double lo, double hi);

/// S unitary on C^n (x) C^d, L gaussian, H Hermitian.
SLHTriple random_slh(CounterRng& rng, Index n, Index d);
ItoMatrix random_ito(CounterRng& rng, Index n, Index d);

}  // namespace qfn
