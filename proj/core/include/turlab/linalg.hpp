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

#ifndef TURLAB_LINALG_HPP
#define TURLAB_LINALG_HPP

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace turlab::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Entrywise max-norm tolerances.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kDegeneracyTol = 1e-9;
inline constexpr double kSingularTol = 1e-12;

/// Ordered tensor factors of a Hilbert space. Factor 0 is the slowest-varying
/// (leftmost) Kronecker index. TUR computations use R ⊗ S ⊗ E; protocol
/// circuits use S' ⊗ S ⊗ E with extra environments / ancillas appended.
class SubsystemLayout {
 public:
  SubsystemLayout() = default;
  explicit SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels = {});

  std::size_t factors() const { return dims_.size(); }
  std::size_t dim(std::size_t factor) const { return dims_.at(factor); }
  const std::string& label(std::size_t factor) const { return labels_.at(factor); }
  const std::vector<std::size_t>& dims() const { return dims_; }
  std::size_t total() const;

  /// Index of the factor carrying `label`; throws LayoutError if absent.
  std::size_t index_of(const std::string& label) const;

  /// Digit of `index` (a basis index of the full space) on `factor`.
  std::size_t digit(std::size_t index, std::size_t factor) const;

  /// Throws LayoutError unless m is square with side total().
  void require_square(const ComplexMatrix& m) const;

 private:
  std::vector<std::size_t> dims_;
  std::vector<std::string> labels_;
};

struct SpectralDecomposition {
  std::vector<double> eigenvalues;          // descending, one per eigenspace
  std::vector<ComplexMatrix> projectors;    // orthogonal projectors onto each eigenspace

  ComplexMatrix reconstruct() const;
};

double max_abs(const ComplexMatrix& m);
bool is_hermitian(const ComplexMatrix& m, double tol = kHermitianTol);
bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);

ComplexMatrix identity(std::size_t dim);
ComplexVector basis_vector(std::size_t dim, std::size_t index);
ComplexMatrix projector(const ComplexVector& v);
ComplexMatrix dagger(const ComplexMatrix& m);
Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; `a` indexes the slow-varying factor.
ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b);
ComplexMatrix tensor_product(std::initializer_list<ComplexMatrix> factors);

/// Reduced matrix on the factors in `keep` (kept in layout order, duplicates
/// rejected). Throws LayoutError on dimension mismatch or bad factor index.
ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemLayout& layout,
                            const std::vector<std::size_t>& keep);

/// Lifts `op`, acting on the factors `targets` (op's slowest factor is
/// targets[0]), to the full layout with identity elsewhere.
ComplexMatrix embed(const ComplexMatrix& op, const SubsystemLayout& layout,
                    const std::vector<std::size_t>& targets);

/// Spectral decomposition of a Hermitian matrix. Eigenvalues closer than
/// kDegeneracyTol are merged into one eigenspace. Throws ContractError for
/// non-Hermitian input.
SpectralDecomposition spectral(const ComplexMatrix& m);

/// Eigenvalues of a Hermitian matrix in ascending order (no grouping).
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

/// Σ_n f(ζ_n) Π_n.
ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f);

/// Inverse of a Hermitian matrix; SingularOperator if any |ζ| ≤ kSingularTol.
ComplexMatrix hermitian_inverse(const ComplexMatrix& m);

/// Square root of a PSD matrix. Eigenvalues in [-kSingularTol, 0) are clamped
/// to zero; anything more negative is a ContractError.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& m);

/// Inverse of a general square matrix v computed as (v†v)⁻¹ v†.
ComplexMatrix inverse_via_gram(const ComplexMatrix& v);

/// U_V in v = U_V sqrt(v†v). Throws SingularOperator when v†v is singular.
ComplexMatrix polar_unitary(const ComplexMatrix& v);

}  // namespace turlab::linalg

#endif  // TURLAB_LINALG_HPP
