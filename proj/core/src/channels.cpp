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

#include "turlab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/QR>

#include "turlab/errors.hpp"
#include "turlab/gates.hpp"

namespace turlab::channels {

using linalg::Complex;

namespace {

std::vector<ComplexMatrix> blocks_of(const ComplexMatrix& u, std::size_t dim_s, std::size_t dim_e,
                                     std::size_t env_initial) {
  const auto ds = static_cast<Eigen::Index>(dim_s);
  const auto de = static_cast<Eigen::Index>(dim_e);
  const auto e0 = static_cast<Eigen::Index>(env_initial);
  std::vector<ComplexMatrix> ops;
  ops.reserve(dim_e);
  for (Eigen::Index m = 0; m < de; ++m) {
    ComplexMatrix v(ds, ds);
    for (Eigen::Index i = 0; i < ds; ++i) {
      for (Eigen::Index j = 0; j < ds; ++j) v(i, j) = u(i * de + m, j * de + e0);
    }
    ops.push_back(std::move(v));
  }
  return ops;
}

}  // namespace

KrausChannel::KrausChannel(std::vector<ComplexMatrix> operators, std::size_t no_jump_index,
                           std::optional<Dilation> dilation)
    : operators_(std::move(operators)), no_jump_index_(no_jump_index), dilation_(std::move(dilation)) {
  if (operators_.empty()) throw ContractError("KrausChannel needs at least one operator");
  if (no_jump_index_ >= operators_.size()) throw ContractError("no_jump_index out of range");
  const auto d = operators_.front().rows();
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& v : operators_) {
    if (v.rows() != d || v.cols() != d) {
      throw ContractError("Kraus operators must be square and share one dimension");
    }
    sum += v.adjoint() * v;
  }
  const double err = linalg::max_abs(sum - linalg::identity(static_cast<std::size_t>(d)));
  if (err > kCompletenessTol) {
    std::ostringstream os;
    os << "Kraus operators violate completeness (max |Σ V†V - I| = " << err << ")";
    throw ContractError(os.str());
  }
  if (dilation_) {
    if (dilation_->env_dim != operators_.size() || dilation_->env_initial != no_jump_index_) {
      throw ContractError("dilation environment does not match the Kraus indexing");
    }
    const auto blocks = blocks_of(dilation_->unitary, dim(), dilation_->env_dim, dilation_->env_initial);
    for (std::size_t m = 0; m < blocks.size(); ++m) {
      if (linalg::max_abs(blocks[m] - operators_[m]) > 1e-10) {
        throw ContractError("dilation does not reproduce Kraus operator " + std::to_string(m));
      }
    }
  }
}

KrausChannel KrausChannel::identity(std::size_t dim) {
  return KrausChannel({linalg::identity(dim)}, 0);
}

ComplexMatrix KrausChannel::no_jump_gram() const { return no_jump().adjoint() * no_jump(); }

ComplexMatrix KrausChannel::jump_gram() const {
  const auto d = static_cast<Eigen::Index>(dim());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (std::size_t m = 0; m < operators_.size(); ++m) {
    if (m != no_jump_index_) sum += operators_[m].adjoint() * operators_[m];
  }
  return sum;
}

Dilation KrausChannel::dilation_or_synthesize() const {
  if (dilation_) return *dilation_;
  return synthesize_dilation(operators_, no_jump_index_);
}

KrausChannel kraus_from_unitary(const ComplexMatrix& u, const SubsystemLayout& layout,
                                std::size_t env_initial) {
  if (layout.factors() != 2) throw LayoutError("kraus_from_unitary expects a [S, E] layout");
  layout.require_square(u);
  if (!linalg::is_unitary(u)) throw ContractError("kraus_from_unitary: dilation is not unitary");
  const std::size_t ds = layout.dim(0), de = layout.dim(1);
  if (env_initial >= de) throw ContractError("env_initial outside the environment basis");
  auto ops = blocks_of(u, ds, de, env_initial);
  return KrausChannel(std::move(ops), env_initial, Dilation{u, de, env_initial});
}

Dilation synthesize_dilation(const std::vector<ComplexMatrix>& operators, std::size_t env_initial) {
  if (operators.empty()) throw ContractError("synthesize_dilation: no operators");
  const auto ds = operators.front().rows();
  const auto m_count = static_cast<Eigen::Index>(operators.size());
  const auto total = ds * m_count;
  if (env_initial >= operators.size()) throw ContractError("env_initial out of range");

  // Block column W: row (i, m) ↦ i*M + m, column j.
  ComplexMatrix w(total, ds);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    for (Eigen::Index i = 0; i < ds; ++i) w.row(i * m_count + m) = operators[m].row(i);
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(w);
  const ComplexMatrix q = qr.householderQ();
  // The trailing columns of Q span the orthogonal complement of range(W).
  ComplexMatrix u(total, total);
  Eigen::Index next_free = ds;
  const auto e0 = static_cast<Eigen::Index>(env_initial);
  for (Eigen::Index j = 0; j < ds; ++j) {
    for (Eigen::Index e = 0; e < m_count; ++e) {
      const Eigen::Index col = j * m_count + e;
      if (e == e0) {
        u.col(col) = w.col(j);
      } else {
        u.col(col) = q.col(next_free++);
      }
    }
  }
  if (!linalg::is_unitary(u, 1e-9)) throw ContractError("synthesize_dilation: completion is not unitary");
  return Dilation{u, operators.size(), env_initial};
}

ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho) {
  const auto d = static_cast<Eigen::Index>(ch.dim());
  if (rho.rows() != d || rho.cols() != d) throw LayoutError("apply: state dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& v : ch.operators()) out += v * rho * v.adjoint();
  return out;
}

ComplexMatrix heisenberg(const KrausChannel& ch, const ComplexMatrix& a) {
  const auto d = static_cast<Eigen::Index>(ch.dim());
  if (a.rows() != d || a.cols() != d) throw LayoutError("heisenberg: observable dimension mismatch");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (const auto& v : ch.operators()) out += v.adjoint() * a * v;
  return out;
}

PerturbedChannel perturbed_kraus(const KrausChannel& ch, double theta) {
  const ComplexMatrix jump = ch.jump_gram();
  const auto eig = linalg::hermitian_eigenvalues(jump);
  const double top = eig.empty() ? 0.0 : eig.back();
  if (std::exp(theta) * top > 1.0 - kAdmissibilityMargin) {
    std::ostringstream os;
    os << "theta = " << theta << " is not admissible (e^theta * max jump eigenvalue = "
       << std::exp(theta) * top << ")";
    throw AdmissibilityError(os.str());
  }
  const ComplexMatrix u_v = linalg::polar_unitary(ch.no_jump());
  const ComplexMatrix root = linalg::hermitian_sqrt(linalg::identity(ch.dim()) - std::exp(theta) * jump);

  std::vector<ComplexMatrix> ops;
  ops.reserve(ch.size());
  const double scale = std::exp(theta / 2);
  for (std::size_t m = 0; m < ch.size(); ++m) {
    ops.push_back(m == ch.no_jump_index() ? ComplexMatrix(u_v * root) : ComplexMatrix(scale * ch.op(m)));
  }
  return PerturbedChannel{theta, KrausChannel(std::move(ops), ch.no_jump_index())};
}

ComplexMatrix dv0_dtheta(const KrausChannel& ch) {
  const ComplexMatrix& v0 = ch.no_jump();
  return 0.5 * (v0 - linalg::inverse_via_gram(v0).adjoint());
}

KrausChannel amplitude_damping(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ContractError("amplitude_damping: gamma must be in [0, 1]");
  const double angle = 2.0 * std::asin(std::sqrt(gamma));
  const ComplexMatrix cry = gates::controlled_on(gates::ry(angle), 0, 1, 2);
  const ComplexMatrix cnot = gates::controlled_on(gates::pauli(1), 1, 0, 2);
  const ComplexMatrix u = cnot * cry;
  return kraus_from_unitary(u, SubsystemLayout({2, 2}, {"S", "E"}), 0);
}

KrausChannel random_channel(std::size_t dim_s, std::size_t dim_e, CounterRng& rng, double min_gram) {
  const SubsystemLayout layout({dim_s, dim_e}, {"S", "E"});
  for (int attempt = 0; attempt < 10000; ++attempt) {
    const ComplexMatrix u = random::unitary(dim_s * dim_e, rng);
    auto ch = kraus_from_unitary(u, layout, 0);
    if (linalg::hermitian_eigenvalues(ch.no_jump_gram()).front() >= min_gram) return ch;
  }
  throw ContractError("random_channel: could not draw an invertible no-jump operator");
}

}  // namespace turlab::channels
