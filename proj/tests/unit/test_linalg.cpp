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


#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "support/oracles.hpp"
#include "turlab/errors.hpp"
#include "turlab/gates.hpp"
#include "turlab/linalg.hpp"
#include "turlab/rng.hpp"

namespace {

using namespace turlab;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;
using linalg::SubsystemLayout;

ComplexMatrix random_matrix(Eigen::Index r, Eigen::Index c, CounterRng& rng) {
  ComplexMatrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  return m;
}

TEST(Layout, TotalDigitsAndLabels) {
  const SubsystemLayout layout({2, 3, 4}, {"A", "B", "C"});
  EXPECT_EQ(layout.total(), 24u);
  EXPECT_EQ(layout.index_of("B"), 1u);
  EXPECT_THROW(layout.index_of("Z"), LayoutError);
  // index = a*12 + b*4 + c
  for (std::size_t idx = 0; idx < 24; ++idx) {
    EXPECT_EQ(layout.digit(idx, 0), idx / 12);
    EXPECT_EQ(layout.digit(idx, 1), (idx / 4) % 3);
    EXPECT_EQ(layout.digit(idx, 2), idx % 4);
  }
  EXPECT_THROW(layout.require_square(ComplexMatrix::Zero(23, 23)), LayoutError);
  EXPECT_NO_THROW(layout.require_square(ComplexMatrix::Zero(24, 24)));
}

TEST(Layout, RejectsBadShapes) {
  EXPECT_THROW(SubsystemLayout(std::vector<std::size_t>{}), LayoutError);
  EXPECT_THROW(SubsystemLayout({2, 0}), LayoutError);
  EXPECT_THROW(SubsystemLayout({2, 2}, {"only-one"}), LayoutError);
}

TEST(TensorProduct, MatchesLoopKron) {
  CounterRng rng(11);
  const ComplexMatrix a = random_matrix(2, 3, rng);
  const ComplexMatrix b = random_matrix(3, 2, rng);
  const ComplexMatrix c = random_matrix(2, 2, rng);
  EXPECT_LT(oracle::max_abs(linalg::tensor_product(a, b) - oracle::kron(a, b)), 1e-14);
  EXPECT_LT(oracle::max_abs(linalg::tensor_product({a, b, c}) - oracle::kron(oracle::kron(a, b), c)), 1e-13);

  const ComplexVector u = random_matrix(3, 1, rng).col(0);
  const ComplexVector v = random_matrix(2, 1, rng).col(0);
  EXPECT_LT(oracle::max_abs(linalg::tensor_product(u, v) - oracle::kron(u, v)), 1e-14);
}

TEST(PartialTrace, MatchesLoopOracleOnEverySplit) {
  CounterRng rng(12);
  const ComplexMatrix m = random_matrix(12, 12, rng);
  const SubsystemLayout two({3, 4});
  EXPECT_LT(oracle::max_abs(linalg::partial_trace(m, two, {0}) - oracle::trace_right(m, 3, 4)), 1e-13);
  EXPECT_LT(oracle::max_abs(linalg::partial_trace(m, two, {1}) - oracle::trace_left(m, 3, 4)), 1e-13);

  // Middle factor of a three-factor product: Tr_{A,C}[X⊗Y⊗Z] = Tr X · Tr Z · Y.
  const ComplexMatrix x = random_matrix(2, 2, rng), y = random_matrix(3, 3, rng), z = random_matrix(2, 2, rng);
  const ComplexMatrix xyz = oracle::kron(oracle::kron(x, y), z);
  const SubsystemLayout three({2, 3, 2});
  const ComplexMatrix expected = x.trace() * z.trace() * y;
  EXPECT_LT(oracle::max_abs(linalg::partial_trace(xyz, three, {1}) - expected), 1e-12);
  EXPECT_LT(oracle::max_abs(linalg::partial_trace(xyz, three, {0, 2}) - y.trace() * oracle::kron(x, z)), 1e-12);
  EXPECT_NEAR(std::abs(linalg::partial_trace(xyz, three, {})(0, 0) - xyz.trace()), 0.0, 1e-12);
}

TEST(PartialTrace, RejectsBadIndices) {
  const SubsystemLayout layout({2, 2});
  const ComplexMatrix m = ComplexMatrix::Identity(4, 4);
  EXPECT_THROW(linalg::partial_trace(m, layout, {2}), LayoutError);
  EXPECT_THROW(linalg::partial_trace(m, layout, {0, 0}), LayoutError);
  EXPECT_THROW(linalg::partial_trace(ComplexMatrix::Identity(3, 3), layout, {0}), LayoutError);
}

TEST(Embed, PlacesOperatorOnTargets) {
  CounterRng rng(13);
  const SubsystemLayout layout({2, 3, 2});
  const ComplexMatrix a = random_matrix(3, 3, rng);
  EXPECT_LT(oracle::max_abs(linalg::embed(a, layout, {1}) - oracle::kron(oracle::kron(oracle::eye(2), a), oracle::eye(2))),
            1e-14);

  // Targets {2, 0}: the operator's slow factor acts on factor 2.
  const ComplexMatrix p = random_matrix(2, 2, rng), q = random_matrix(2, 2, rng);
  const ComplexMatrix expected = oracle::kron(oracle::kron(q, oracle::eye(3)), p);
  EXPECT_LT(oracle::max_abs(linalg::embed(oracle::kron(p, q), layout, {2, 0}) - expected), 1e-14);

  EXPECT_THROW(linalg::embed(a, layout, {0}), LayoutError);
  EXPECT_THROW(linalg::embed(a, layout, {3}), LayoutError);
  EXPECT_THROW(linalg::embed(oracle::kron(p, q), layout, {0, 0}), LayoutError);
}

TEST(Spectral, ReconstructsAndGroupsDegenerateEigenvalues) {
  CounterRng rng(14);
  const ComplexMatrix u = random::unitary(5, rng);
  Eigen::VectorXcd d(5);
  d << 2.0, -1.0, 2.0, 0.5, -1.0;
  const ComplexMatrix h = u * d.asDiagonal() * u.adjoint();
  const auto spec = linalg::spectral(h);
  ASSERT_EQ(spec.eigenvalues.size(), 3u);
  EXPECT_NEAR(spec.eigenvalues[0], 2.0, 1e-12);
  EXPECT_NEAR(spec.eigenvalues[1], 0.5, 1e-12);
  EXPECT_NEAR(spec.eigenvalues[2], -1.0, 1e-12);
  EXPECT_NEAR(spec.projectors[0].trace().real(), 2.0, 1e-12);
  EXPECT_NEAR(spec.projectors[1].trace().real(), 1.0, 1e-12);
  EXPECT_LT(oracle::max_abs(spec.reconstruct() - h), 1e-12);
  for (std::size_t k = 0; k < spec.projectors.size(); ++k) {
    const ComplexMatrix& p = spec.projectors[k];
    EXPECT_LT(oracle::max_abs(p * p - p), 1e-12);
    for (std::size_t l = k + 1; l < spec.projectors.size(); ++l) {
      EXPECT_LT(oracle::max_abs(p * spec.projectors[l]), 1e-12);
    }
  }
}

TEST(HermitianFunctions, InverseSqrtAndErrors) {
  CounterRng rng(15);
  const ComplexMatrix rho = random::density(4, rng);
  EXPECT_LT(oracle::max_abs(linalg::hermitian_inverse(rho) - rho.inverse()), 1e-8 * oracle::max_abs(rho.inverse()));
  const ComplexMatrix root = linalg::hermitian_sqrt(rho);
  EXPECT_LT(oracle::max_abs(root * root - rho), 1e-13);
  EXPECT_TRUE(linalg::is_hermitian(root));

  ComplexMatrix singular = ComplexMatrix::Zero(2, 2);
  singular(0, 0) = 1.0;
  try {
    linalg::hermitian_inverse(singular);
    FAIL() << "expected SingularOperator";
  } catch (const SingularOperator& e) {
    EXPECT_NEAR(e.eigenvalue(), 0.0, 1e-15);
  }
  EXPECT_THROW(linalg::hermitian_sqrt(-1.0 * linalg::identity(2)), ContractError);

  const auto ev = linalg::hermitian_eigenvalues(rho);
  double sum = 0.0;
  for (std::size_t k = 0; k < ev.size(); ++k) {
    sum += ev[k];
    if (k > 0) {
      EXPECT_LE(ev[k - 1], ev[k]);
    }
  }
  EXPECT_NEAR(sum, 1.0, 1e-13);
}

TEST(InverseAndPolar, AgreeWithLu) {
  CounterRng rng(16);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix v = random_matrix(3, 3, rng);
    const ComplexMatrix inv = v.inverse();
    EXPECT_LT(oracle::max_abs(linalg::inverse_via_gram(v) - inv), 1e-8 * oracle::max_abs(inv));
    const ComplexMatrix w = linalg::polar_unitary(v);
    EXPECT_TRUE(linalg::is_unitary(w, 1e-10));
    // v = w·|v| with |v| Hermitian positive.
    const ComplexMatrix modulus = w.adjoint() * v;
    EXPECT_TRUE(linalg::is_hermitian(modulus, 1e-10));
    for (double z : linalg::hermitian_eigenvalues(0.5 * (modulus + modulus.adjoint()))) EXPECT_GT(z, 0.0);
  }
  EXPECT_THROW(linalg::polar_unitary(ComplexMatrix::Zero(2, 2)), SingularOperator);
  EXPECT_THROW(linalg::inverse_via_gram(ComplexMatrix::Zero(2, 3)), ContractError);
}

TEST(Helpers, TraceProductProjectorAnticommutator) {
  CounterRng rng(17);
  const ComplexMatrix a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
  EXPECT_LT(std::abs(linalg::trace_product(a, b) - (a * b).trace()), 1e-12);
  EXPECT_LT(oracle::max_abs(linalg::anticommutator(a, b) - (a * b + b * a)), 1e-12);
  const ComplexVector e1 = linalg::basis_vector(3, 1);
  EXPECT_EQ(e1(1), Complex(1.0, 0.0));
  EXPECT_EQ(linalg::projector(e1).sum(), Complex(1.0, 0.0));
  EXPECT_FALSE(linalg::is_hermitian(a));
  EXPECT_TRUE(linalg::is_hermitian(a + a.adjoint()));
  EXPECT_FALSE(linalg::is_unitary(a));
}

TEST(Gates, PauliAlgebraAndLabels) {
  const Complex i(0.0, 1.0);
  const ComplexMatrix x = gates::pauli(1), y = gates::pauli(2), z = gates::pauli(3);
  EXPECT_LT(oracle::max_abs(x * y - i * z), 1e-15);
  EXPECT_LT(oracle::max_abs(y * z - i * x), 1e-15);
  EXPECT_LT(oracle::max_abs(gates::pauli_string("XZ") - oracle::kron(x, z)), 1e-15);
  EXPECT_LT(oracle::max_abs(gates::pauli_string("x3") - oracle::kron(x, z)), 1e-15);
  EXPECT_EQ(gates::pauli_label(2, 0), "YI");
  EXPECT_THROW(gates::pauli_string("XQ"), ContractError);
  EXPECT_THROW(gates::pauli_string(""), ContractError);
  EXPECT_THROW(gates::pauli(4), ContractError);
  EXPECT_THROW(gates::pauli_label(0, 4), ContractError);
}

TEST(Gates, RotationsAreExponentials) {
  for (double t : {0.0, 0.3, 1.7, std::numbers::pi, 5.9}) {
    // e^{-itσ/2} = cos(t/2) I − i sin(t/2) σ
    const Complex i(0.0, 1.0);
    const ComplexMatrix ex = std::cos(t / 2) * oracle::eye(2) - i * std::sin(t / 2) * gates::pauli(1);
    const ComplexMatrix ey = std::cos(t / 2) * oracle::eye(2) - i * std::sin(t / 2) * gates::pauli(2);
    EXPECT_LT(oracle::max_abs(gates::rx(t) - ex), 1e-15);
    EXPECT_LT(oracle::max_abs(gates::ry(t) - ey), 1e-15);
  }
  const ComplexMatrix h = gates::hadamard();
  EXPECT_LT(oracle::max_abs(h * h - oracle::eye(2)), 1e-15);
  EXPECT_LT(oracle::max_abs(gates::s_dagger() * gates::s_dagger() - gates::pauli(3)), 1e-15);
}

TEST(Gates, ControlledAndEmbeddedMatchKron) {
  const ComplexMatrix x = gates::pauli(1);
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const ComplexMatrix i2 = oracle::eye(2);
  EXPECT_LT(oracle::max_abs(gates::controlled(x) - (oracle::kron(p0, i2) + oracle::kron(p1, x))), 1e-15);
  EXPECT_LT(oracle::max_abs(gates::on_qubit(x, 1, 3) - oracle::kron(oracle::kron(i2, x), i2)), 1e-15);
  // control qubit 2, target qubit 0 on three qubits
  const ComplexMatrix expected = oracle::kron(oracle::kron(i2, i2), p0) + oracle::kron(oracle::kron(x, i2), p1);
  EXPECT_LT(oracle::max_abs(gates::controlled_on(x, 2, 0, 3) - expected), 1e-15);
  EXPECT_THROW(gates::controlled_on(x, 1, 1, 2), ContractError);
  EXPECT_THROW(gates::on_qubit(x, 2, 2), ContractError);
}

TEST(Rng, DeterministicPerStreamAndSubstream) {
  CounterRng a(7, 1, 3), b(7, 1, 3), c(7, 1, 4), d(7, 2, 3), e(8, 1, 3);
  std::set<std::uint64_t> firsts;
  for (int k = 0; k < 100; ++k) {
    const auto va = a.next();
    EXPECT_EQ(va, b.next());
    if (k == 0) {
      firsts = {va, c.next(), d.next(), e.next()};
    }
  }
  EXPECT_EQ(firsts.size(), 4u);
  EXPECT_EQ(a.counter(), 100u);
}

TEST(Rng, UniformNormalAndIndexMoments) {
  CounterRng rng(99);
  constexpr int n = 200000;
  double su = 0.0, sn = 0.0, sn2 = 0.0;
  std::vector<int> buckets(6, 0);
  for (int k = 0; k < n; ++k) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    const double z = rng.normal();
    sn += z;
    sn2 += z * z;
    ++buckets[rng.index(6)];
  }
  EXPECT_NEAR(su / n, 0.5, 5 * std::sqrt(1.0 / 12.0 / n));
  EXPECT_NEAR(sn / n, 0.0, 5 / std::sqrt(n));
  EXPECT_NEAR(sn2 / n, 1.0, 5 * std::sqrt(2.0 / n));
  // χ² with 5 degrees of freedom; 25 is far beyond the 99.99th percentile.
  double chi2 = 0.0;
  for (int b : buckets) chi2 += std::pow(b - n / 6.0, 2) / (n / 6.0);
  EXPECT_LT(chi2, 25.0);
  EXPECT_THROW(rng.index(0), ContractError);
}

TEST(Rng, RandomMatricesHaveTheirDefiningProperties) {
  CounterRng rng(5);
  for (std::size_t dim : {1u, 2u, 4u, 8u}) {
    EXPECT_TRUE(linalg::is_unitary(random::unitary(dim, rng)));
    EXPECT_TRUE(linalg::is_hermitian(random::hermitian(dim, rng)));
    const ComplexMatrix rho = random::density(dim, rng);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-13);
    EXPECT_GE(linalg::hermitian_eigenvalues(rho).front(), -1e-14);
  }
}

}  // namespace
