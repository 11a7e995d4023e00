// Copyright 2026 The turlab Authors
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

#ifndef TURLAB_RNG_HPP
#define TURLAB_RNG_HPP

#include <cstddef>
#include <cstdint>

#include "turlab/linalg.hpp"

namespace turlab {

/// Counter-based generator: draw k of stream (seed, stream, substream) is a
/// pure function of the key and k, so each trial owns an independent,
/// reproducible stream. Output is identical on every platform (no
/// std:: distributions are involved).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0, std::uint64_t substream = 0);

  std::uint64_t next();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);
  /// Standard normal (Box–Muller).
  double normal();
  /// Uniform integer in [0, n).
  std::size_t index(std::size_t n);

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

namespace random {

using linalg::ComplexMatrix;

/// Haar-random unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix unitary(std::size_t dim, CounterRng& rng);
/// Random Hermitian matrix with entries O(1).
ComplexMatrix hermitian(std::size_t dim, CounterRng& rng);
/// Random full-rank density matrix (Ginibre W W† / Tr).
ComplexMatrix density(std::size_t dim, CounterRng& rng);

}  // namespace random
}  // namespace turlab

#endif  // TURLAB_RNG_HPP
