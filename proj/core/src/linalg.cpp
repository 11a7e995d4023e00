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

#include "turlab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "turlab/errors.hpp"

namespace turlab::linalg {

namespace {

std::vector<std::size_t> strides_of(const std::vector<std::size_t>& dims) {
  std::vector<std::size_t> strides(dims.size(), 1);
  for (std::size_t f = dims.size(); f-- > 1;) {
    strides[f - 1] = strides[f] * dims[f];
  }
  return strides;
}

// Flat offsets of every multi-index over `subset`, slowest factor first.
std::vector<std::size_t> offsets_of(const std::vector<std::size_t>& dims,
                                    const std::vector<std::size_t>& strides,
                                    const std::vector<std::size_t>& subset) {
  std::vector<std::size_t> out{0};
  for (std::size_t f : subset) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[f]);
    for (std::size_t base : out) {
      for (std::size_t d = 0; d < dims[f]; ++d) {
        next.push_back(base + d * strides[f]);
      }
    }
    out = std::move(next);
  }
  return out;
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_solver(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw ContractError("hermitian matrix must be square");
  }
  if (!is_hermitian(m)) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |M - M†| = " << max_abs(m - m.adjoint()) << ")";
    throw ContractError(os.str());
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(sym);
}

}  // namespace

SubsystemLayout::SubsystemLayout(std::vector<std::size_t> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) {
    throw LayoutError("layout needs at least one factor");
  }
  for (std::size_t d : dims_) {
    if (d == 0) throw LayoutError("layout factor of dimension 0");
  }
  if (labels_.empty()) {
    for (std::size_t f = 0; f < dims_.size(); ++f) labels_.push_back("f" + std::to_string(f));
  }
  if (labels_.size() != dims_.size()) {
    throw LayoutError("layout labels and dims differ in length");
  }
}

std::size_t SubsystemLayout::total() const {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{1}, std::multiplies<>());
}

std::size_t SubsystemLayout::index_of(const std::string& label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw LayoutError("layout has no factor labelled '" + label + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t SubsystemLayout::digit(std::size_t index, std::size_t factor) const {
  const auto strides = strides_of(dims_);
  return (index / strides.at(factor)) % dims_[factor];
}

void SubsystemLayout::require_square(const ComplexMatrix& m) const {
  const auto n = static_cast<Eigen::Index>(total());
  if (m.rows() != n || m.cols() != n) {
    std::ostringstream os;
    os << "matrix is " << m.rows() << "x" << m.cols() << " but layout has total dimension " << n;
    throw LayoutError(os.str());
  }
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  if (projectors.empty()) return {};
  ComplexMatrix out = ComplexMatrix::Zero(projectors.front().rows(), projectors.front().cols());
  for (std::size_t n = 0; n < projectors.size(); ++n) out += eigenvalues[n] * projectors[n];
  return out;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m.adjoint() * m - identity(m.rows())) <= tol;
}

ComplexMatrix identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return ComplexMatrix::Identity(n, n);
}

ComplexVector basis_vector(std::size_t dim, std::size_t index) {
  if (index >= dim) throw ContractError("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(dim));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

ComplexMatrix projector(const ComplexVector& v) { return v * v.adjoint(); }

ComplexMatrix dagger(const ComplexMatrix& m) { return m.adjoint(); }

Complex trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    throw LayoutError("trace_product: incompatible shapes");
  }
  // Tr[ab] = Σ_ij a_ij b_ji without forming the product.
  return (a.array() * b.transpose().array()).sum();
}

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

ComplexMatrix tensor_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector tensor_product(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix tensor_product(std::initializer_list<ComplexMatrix> factors) {
  if (factors.size() == 0) throw ContractError("tensor_product of no factors");
  auto it = factors.begin();
  ComplexMatrix out = *it;
  for (++it; it != factors.end(); ++it) out = tensor_product(out, *it);
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, const SubsystemLayout& layout,
                            const std::vector<std::size_t>& keep) {
  layout.require_square(m);
  std::vector<bool> kept(layout.factors(), false);
  for (std::size_t f : keep) {
    if (f >= layout.factors()) throw LayoutError("partial_trace: factor index out of range");
    if (kept[f]) throw LayoutError("partial_trace: duplicate factor index");
    kept[f] = true;
  }
  std::vector<std::size_t> keep_sorted, traced;
  for (std::size_t f = 0; f < layout.factors(); ++f) (kept[f] ? keep_sorted : traced).push_back(f);

  const auto strides = strides_of(layout.dims());
  const auto keep_off = offsets_of(layout.dims(), strides, keep_sorted);
  const auto trace_off = offsets_of(layout.dims(), strides, traced);

  const auto n = static_cast<Eigen::Index>(keep_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      Complex acc = 0.0;
      for (std::size_t t : trace_off) {
        acc += m(static_cast<Eigen::Index>(keep_off[r] + t), static_cast<Eigen::Index>(keep_off[c] + t));
      }
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, const SubsystemLayout& layout,
                    const std::vector<std::size_t>& targets) {
  std::vector<bool> used(layout.factors(), false);
  std::size_t sub = 1;
  for (std::size_t f : targets) {
    if (f >= layout.factors()) throw LayoutError("embed: factor index out of range");
    if (used[f]) throw LayoutError("embed: duplicate factor index");
    used[f] = true;
    sub *= layout.dim(f);
  }
  if (op.rows() != op.cols() || static_cast<std::size_t>(op.rows()) != sub) {
    throw LayoutError("embed: operator does not match the target factors");
  }
  std::vector<std::size_t> rest;
  for (std::size_t f = 0; f < layout.factors(); ++f) {
    if (!used[f]) rest.push_back(f);
  }
  const auto strides = strides_of(layout.dims());
  const auto target_off = offsets_of(layout.dims(), strides, targets);
  const auto rest_off = offsets_of(layout.dims(), strides, rest);

  const auto n = static_cast<Eigen::Index>(layout.total());
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (std::size_t base : rest_off) {
    for (std::size_t a = 0; a < target_off.size(); ++a) {
      for (std::size_t b = 0; b < target_off.size(); ++b) {
        out(static_cast<Eigen::Index>(base + target_off[a]), static_cast<Eigen::Index>(base + target_off[b])) =
            op(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  return out;
}

SpectralDecomposition spectral(const ComplexMatrix& m) {
  const auto solver = hermitian_solver(m);
  const auto& values = solver.eigenvalues();
  const auto& vectors = solver.eigenvectors();

  SpectralDecomposition out;
  // Eigen returns ascending order; walk from the top.
  Eigen::Index i = values.size() - 1;
  while (i >= 0) {
    Eigen::Index j = i;
    while (j - 1 >= 0 && std::abs(values(j - 1) - values(j)) <= kDegeneracyTol) --j;
    ComplexMatrix proj = ComplexMatrix::Zero(m.rows(), m.cols());
    double sum = 0.0;
    for (Eigen::Index k = j; k <= i; ++k) {
      proj += vectors.col(k) * vectors.col(k).adjoint();
      sum += values(k);
    }
    out.eigenvalues.push_back(sum / static_cast<double>(i - j + 1));
    out.projectors.push_back(std::move(proj));
    i = j - 1;
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
  const auto solver = hermitian_solver(m);
  const auto& values = solver.eigenvalues();
  return {values.data(), values.data() + values.size()};
}

ComplexMatrix hermitian_function(const ComplexMatrix& m, const std::function<double(double)>& f) {
  const auto solver = hermitian_solver(m);
  const auto& values = solver.eigenvalues();
  Eigen::VectorXd fv(values.size());
  for (Eigen::Index k = 0; k < values.size(); ++k) fv(k) = f(values(k));
  const auto& vecs = solver.eigenvectors();
  return vecs * fv.cast<Complex>().asDiagonal() * vecs.adjoint();
}

ComplexMatrix hermitian_inverse(const ComplexMatrix& m) {
  const auto solver = hermitian_solver(m);
  const auto& values = solver.eigenvalues();
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (std::abs(values(k)) <= kSingularTol) {
      throw SingularOperator("hermitian_inverse: singular operator", values(k));
    }
  }
  const auto& vecs = solver.eigenvectors();
  return vecs * values.cwiseInverse().cast<Complex>().asDiagonal() * vecs.adjoint();
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& m) {
  return hermitian_function(m, [](double z) {
    if (z < -kSingularTol) {
      throw ContractError("hermitian_sqrt: negative eigenvalue " + std::to_string(z));
    }
    return std::sqrt(std::max(z, 0.0));
  });
}

ComplexMatrix inverse_via_gram(const ComplexMatrix& v) {
  if (v.rows() != v.cols()) throw ContractError("inverse_via_gram: matrix must be square");
  return hermitian_inverse(v.adjoint() * v) * v.adjoint();
}

ComplexMatrix polar_unitary(const ComplexMatrix& v) {
  if (v.rows() != v.cols()) throw ContractError("polar_unitary: matrix must be square");
  const ComplexMatrix gram = v.adjoint() * v;
  for (double z : hermitian_eigenvalues(gram)) {
    if (z <= kSingularTol) throw SingularOperator("polar_unitary: v†v is singular", z);
  }
  return v * hermitian_function(gram, [](double z) { return 1.0 / std::sqrt(z); });
}

}  // namespace turlab::linalg
