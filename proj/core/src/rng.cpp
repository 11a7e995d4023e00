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

#include "turlab/rng.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/QR>

#include "turlab/errors.hpp"

namespace turlab {

namespace {

// SplitMix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream)
    : key_(mix(mix(mix(seed) ^ (stream * kGolden + 1)) ^ (substream * 0xd1b54a32d192ed03ULL + 7))) {}

std::uint64_t CounterRng::next() {
  ++counter_;
  return mix(key_ + counter_ * kGolden);
}

double CounterRng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double CounterRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double CounterRng::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t CounterRng::index(std::size_t n) {
  if (n == 0) throw ContractError("CounterRng::index(0)");
  return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n;
}

namespace random {

using linalg::Complex;

namespace {

ComplexMatrix ginibre(std::size_t dim, CounterRng& rng) {
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(rng.normal(), rng.normal());
  }
  return g;
}

}  // namespace

ComplexMatrix unitary(std::size_t dim, CounterRng& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    if (std::abs(d) > 0) q.col(k) *= d / std::abs(d);
  }
  return q;
}

ComplexMatrix hermitian(std::size_t dim, CounterRng& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  return 0.5 * (g + g.adjoint());
}

ComplexMatrix density(std::size_t dim, CounterRng& rng) {
  const ComplexMatrix g = ginibre(dim, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace random
}  // namespace turlab
