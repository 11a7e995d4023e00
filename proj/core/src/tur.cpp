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

#include "turlab/tur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "turlab/errors.hpp"

namespace turlab::tur {

using linalg::Complex;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_state_dim(const ComplexMatrix& rho, const KrausChannel& ch, const char* who) {
  const auto d = static_cast<Eigen::Index>(ch.dim());
  if (rho.rows() != d || rho.cols() != d) {
    throw LayoutError(std::string(who) + ": state dimension does not match the channel");
  }
}

void require_observable(const ComplexMatrix& g, Eigen::Index dim, const char* who) {
  if (g.rows() != dim || g.cols() != dim) {
    std::ostringstream os;
    os << who << ": observable is " << g.rows() << "x" << g.cols() << ", expected " << dim << "x" << dim;
    throw LayoutError(os.str());
  }
  if (!linalg::is_hermitian(g, 1e-9)) throw ContractError(std::string(who) + ": observable is not Hermitian");
}

// Applies `op` (on S) to every R-block of a vector on R ⊗ S.
ComplexVector apply_on_system(const ComplexMatrix& op, const ComplexVector& joint_rs, std::size_t dim_r) {
  const auto ds = op.rows();
  const auto dr = static_cast<Eigen::Index>(dim_r);
  if (joint_rs.size() != dr * ds) throw LayoutError("joint vector does not match R ⊗ S dimensions");
  ComplexVector out(joint_rs.size());
  for (Eigen::Index r = 0; r < dr; ++r) out.segment(r * ds, ds) = op * joint_rs.segment(r * ds, ds);
  return out;
}

ComplexVector attach_env(const ComplexVector& v, std::size_t env_dim, std::size_t env_index) {
  return linalg::tensor_product(v, linalg::basis_vector(env_dim, env_index));
}

// ⟨Ψ| G |Ψ⟩ and ‖(G − ⟨G⟩)Ψ‖².
std::pair<double, double> moments_of(const ComplexMatrix& g, const ComplexVector& psi) {
  const ComplexVector gpsi = g * psi;
  const double mean = psi.dot(gpsi).real();
  const double var = (gpsi - mean * psi).squaredNorm();
  return {mean, var};
}

}  // namespace

ComplexMatrix PurifiedState::density() const {
  Eigen::VectorXd p(static_cast<Eigen::Index>(probabilities.size()));
  for (std::size_t i = 0; i < probabilities.size(); ++i) p(static_cast<Eigen::Index>(i)) = probabilities[i];
  return basis * p.cast<Complex>().asDiagonal() * basis.adjoint();
}

double TurReport::ratio() const {
  if (degenerate) return kInf;
  const double d = mean - q_baseline;
  return variance * xi / (d * d);
}

TurReport make_report(double mean, double variance, double q_baseline, double xi) {
  TurReport r;
  r.mean = mean;
  r.variance = variance;
  r.q_baseline = q_baseline;
  r.xi = xi;
  const double d = mean - q_baseline;
  r.degenerate = std::abs(d) <= kDegenerateTol;
  r.lhs = r.degenerate ? kInf : variance / (d * d);
  r.rhs = xi > 0.0 ? 1.0 / xi : kInf;
  r.holds = r.degenerate || r.lhs >= r.rhs - kHoldsTol;
  r.margin = r.degenerate ? kInf : r.lhs - r.rhs;
  return r;
}

void require_density(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ContractError("density matrix must be square");
  if (!linalg::is_hermitian(rho, kDensityTol)) throw ContractError("density matrix is not Hermitian");
  const Complex tr = rho.trace();
  if (std::abs(tr - 1.0) > kDensityTol) {
    std::ostringstream os;
    os << "density matrix trace is " << tr.real() << ", expected 1";
    throw ContractError(os.str());
  }
  const double lowest = linalg::hermitian_eigenvalues(rho).front();
  if (lowest < -kDensityTol) {
    std::ostringstream os;
    os << "density matrix is not positive semidefinite (eigenvalue " << lowest << ")";
    throw ContractError(os.str());
  }
}

PurifiedState purify(const ComplexMatrix& rho) {
  require_density(rho);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (rho + rho.adjoint()));
  const auto n = rho.rows();
  PurifiedState ps;
  ps.basis.resize(n, n);
  ps.probabilities.resize(static_cast<std::size_t>(n));
  ps.joint = ComplexVector::Zero(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = n - 1 - i;  // descending
    const double p = std::max(solver.eigenvalues()(src), 0.0);
    ps.probabilities[static_cast<std::size_t>(i)] = p;
    ps.basis.col(i) = solver.eigenvectors().col(src);
    ps.joint += std::sqrt(p) * linalg::tensor_product(ComplexVector(ps.basis.col(i)), ComplexVector(ps.basis.col(i)));
  }
  return ps;
}

ComplexVector evolve_joint(const ComplexVector& joint_rs, std::size_t dim_r, const KrausChannel& ch) {
  const auto dil = ch.dilation_or_synthesize();
  const auto ds = static_cast<Eigen::Index>(ch.dim());
  const auto block = ds * static_cast<Eigen::Index>(dil.env_dim);
  const auto dr = static_cast<Eigen::Index>(dim_r);
  if (joint_rs.size() != dr * ds) throw LayoutError("evolve_joint: joint vector does not match R ⊗ S");
  const ComplexVector start = attach_env(joint_rs, dil.env_dim, dil.env_initial);
  ComplexVector out(start.size());
  for (Eigen::Index r = 0; r < dr; ++r) out.segment(r * block, block) = dil.unitary * start.segment(r * block, block);
  return out;
}

ComplexVector tilde_joint(const ComplexVector& joint_rs, std::size_t dim_r, const KrausChannel& ch) {
  const ComplexMatrix inv_dag = linalg::inverse_via_gram(ch.no_jump()).adjoint();
  return attach_env(apply_on_system(inv_dag, joint_rs, dim_r), ch.size(), ch.no_jump_index());
}

ComplexVector final_joint_state(const PurifiedState& ps, const KrausChannel& ch) {
  if (ps.dim() != ch.dim()) throw LayoutError("final_joint_state: state dimension does not match the channel");
  return evolve_joint(ps.joint, ps.dim(), ch);
}

double survival_activity(const ComplexMatrix& rho, const KrausChannel& ch) {
  require_state_dim(rho, ch, "survival_activity");
  const ComplexMatrix inv = linalg::hermitian_inverse(ch.no_jump_gram());
  const double xi = linalg::trace_product(rho, inv).real() - 1.0;
  // Ξ ≥ 0 since V₀†V₀ ≤ I; snap rounding noise (e.g. Tr ρ − 1 for V₀ = I) to zero.
  return xi < 0.0 && xi > -kDensityTol ? 0.0 : xi;
}

std::vector<double> survival_moments(const ComplexMatrix& rho, const KrausChannel& ch, std::size_t order) {
  require_state_dim(rho, ch, "survival_moments");
  const ComplexMatrix gram = ch.no_jump_gram();
  ComplexMatrix power = linalg::identity(ch.dim());
  std::vector<double> out;
  out.reserve(order + 1);
  for (std::size_t n = 0; n <= order; ++n) {
    out.push_back(linalg::trace_product(rho, power).real());
    power = power * gram;
  }
  return out;
}

std::vector<double> series_from_moments(const std::vector<double>& moments) {
  std::vector<double> out;
  for (std::size_t big_n = 1; big_n < moments.size(); ++big_n) {
    // C(N+1, n+1) for n = 0..N, built incrementally from C(N+1, 1) = N+1.
    double binom = static_cast<double>(big_n + 1);
    double acc = 0.0;
    for (std::size_t n = 0; n <= big_n; ++n) {
      acc += ((n % 2 == 0) ? 1.0 : -1.0) * binom * moments[n];
      binom = binom * static_cast<double>(big_n - n) / static_cast<double>(n + 2);
    }
    out.push_back(acc - 1.0);
  }
  return out;
}

std::vector<double> survival_activity_series(const ComplexMatrix& rho, const KrausChannel& ch,
                                             std::size_t order) {
  if (order < 1) throw ContractError("survival_activity_series: order must be at least 1");
  return series_from_moments(survival_moments(rho, ch, order));
}

std::vector<double> survival_activity_protocol_sim(const ComplexMatrix& rho, const KrausChannel& ch,
                                                   std::size_t order) {
  require_state_dim(rho, ch, "survival_activity_protocol_sim");
  const auto dil = ch.dilation_or_synthesize();
  const auto ds = static_cast<Eigen::Index>(ch.dim());
  const auto de = static_cast<Eigen::Index>(dil.env_dim);
  const auto e0 = static_cast<Eigen::Index>(dil.env_initial);
  const ComplexMatrix env0 = linalg::projector(linalg::basis_vector(dil.env_dim, dil.env_initial));
  const ComplexMatrix u_dag = dil.unitary.adjoint();

  std::vector<double> out;
  out.reserve(order + 1);
  ComplexMatrix state = rho;
  out.push_back(state.trace().real());
  for (std::size_t n = 0; n < order; ++n) {
    const ComplexMatrix joint = linalg::tensor_product(state, env0);
    const ComplexMatrix evolved = (n % 2 == 0) ? ComplexMatrix(dil.unitary * joint * u_dag)
                                               : ComplexMatrix(u_dag * joint * dil.unitary);
    // Project E onto |φ₀⟩ and keep the (unnormalized) S block.
    ComplexMatrix next(ds, ds);
    for (Eigen::Index i = 0; i < ds; ++i) {
      for (Eigen::Index j = 0; j < ds; ++j) next(i, j) = evolved(i * de + e0, j * de + e0);
    }
    state = std::move(next);
    out.push_back(state.trace().real());
  }
  return out;
}

double q_baseline_general(const ComplexMatrix& g, const ComplexVector& joint_rs, std::size_t dim_r,
                          const KrausChannel& ch) {
  const ComplexVector psi = evolve_joint(joint_rs, dim_r, ch);
  require_observable(g, psi.size(), "q_baseline_general");
  const ComplexVector tilde = tilde_joint(joint_rs, dim_r, ch);
  return tilde.dot(g * psi).real();
}

double q_baseline_general(const ComplexMatrix& g, const PurifiedState& ps, const KrausChannel& ch) {
  if (ps.dim() != ch.dim()) throw LayoutError("q_baseline_general: state dimension does not match the channel");
  return q_baseline_general(g, ps.joint, ps.dim(), ch);
}

namespace {

double separable_baseline_impl(const ComplexMatrix& g0, const ComplexMatrix& rho_rs, std::size_t dim_r,
                               const KrausChannel& ch, const ComplexMatrix& inverse_on_s) {
  const auto n = static_cast<Eigen::Index>(dim_r * ch.dim());
  if (rho_rs.rows() != n || rho_rs.cols() != n) throw LayoutError("separable baseline: state does not match R ⊗ S");
  require_observable(g0, n, "separable baseline");
  const ComplexMatrix v = linalg::tensor_product(linalg::identity(dim_r), ch.no_jump());
  const ComplexMatrix post = v * rho_rs * v.adjoint();
  const double p0 = post.trace().real();
  if (p0 <= 1e-12) throw DegenerateChannel("no-jump probability vanishes (p0 = " + std::to_string(p0) + ")");
  const ComplexMatrix conditioned = post / p0;
  const ComplexMatrix h = 0.5 * linalg::anticommutator(g0, linalg::tensor_product(linalg::identity(dim_r), inverse_on_s));
  return p0 * linalg::trace_product(conditioned, h).real();
}

}  // namespace

double separable_baseline(const ComplexMatrix& g0, const ComplexMatrix& rho_rs, std::size_t dim_r,
                          const KrausChannel& ch) {
  const ComplexMatrix& v0 = ch.no_jump();
  return separable_baseline_impl(g0, rho_rs, dim_r, ch, linalg::hermitian_inverse(v0 * v0.adjoint()));
}

double separable_baseline_gram_variant(const ComplexMatrix& g0, const ComplexMatrix& rho_rs,
                                       std::size_t dim_r, const KrausChannel& ch) {
  return separable_baseline_impl(g0, rho_rs, dim_r, ch, linalg::hermitian_inverse(ch.no_jump_gram()));
}

double q_baseline_separable(const ComplexMatrix& g0, const PurifiedState& ps, const KrausChannel& ch) {
  if (ps.dim() != ch.dim()) throw LayoutError("q_baseline_separable: state dimension does not match the channel");
  return separable_baseline(g0, linalg::projector(ps.joint), ps.dim(), ch);
}

double no_jump_probability(const ComplexMatrix& rho, const KrausChannel& ch) {
  require_state_dim(rho, ch, "no_jump_probability");
  return linalg::trace_product(rho, ch.no_jump_gram()).real();
}

double qfi(const KrausChannel& ch, const PurifiedState& ps) {
  if (ps.dim() != ch.dim()) throw LayoutError("qfi: state dimension does not match the channel");
  const auto d = static_cast<Eigen::Index>(ch.dim());
  ComplexMatrix h1 = ComplexMatrix::Zero(d, d);
  ComplexMatrix h2 = ComplexMatrix::Zero(d, d);
  const ComplexMatrix dv0 = channels::dv0_dtheta(ch);
  for (std::size_t m = 0; m < ch.size(); ++m) {
    const ComplexMatrix dv = (m == ch.no_jump_index()) ? dv0 : ComplexMatrix(0.5 * ch.op(m));
    h1 += dv.adjoint() * dv;
    h2 += Complex(0.0, 1.0) * dv.adjoint() * ch.op(m);
  }
  // Expectations on |Ψ_RS(0)⟩ with I_R ⊗ H.
  const ComplexVector& psi = ps.joint;
  const double e1 = psi.dot(apply_on_system(h1, psi, ps.dim())).real();
  const double e2 = psi.dot(apply_on_system(h2, psi, ps.dim())).real();
  return 4.0 * (e1 - e2 * e2);
}

SldOperator sld(const PurifiedState& ps, const KrausChannel& ch) {
  const ComplexVector psi = final_joint_state(ps, ch);
  const ComplexVector tilde = tilde_joint(ps.joint, ps.dim(), ch);
  return SldOperator{2.0 * psi * psi.adjoint() - (tilde * psi.adjoint() + psi * tilde.adjoint())};
}

TurReport check_general_tur(const ComplexMatrix& g, const PurifiedState& ps, const KrausChannel& ch) {
  const ComplexVector psi = final_joint_state(ps, ch);
  require_observable(g, psi.size(), "check_general_tur");
  const auto [mean, var] = moments_of(g, psi);
  const double q = tilde_joint(ps.joint, ps.dim(), ch).dot(g * psi).real();
  return make_report(mean, var, q, survival_activity(ps.density(), ch));
}

double spectral_radius(const ComplexMatrix& h) {
  const auto eig = linalg::hermitian_eigenvalues(h);
  return std::max(std::abs(eig.front()), std::abs(eig.back()));
}

EvolutionBoundReport check_observable_evolution_bound(const KrausChannel& ch, const ComplexMatrix& rho,
                                                      const ComplexMatrix& g_env, double g0, double gmax) {
  require_state_dim(rho, ch, "check_observable_evolution_bound");
  require_observable(g_env, static_cast<Eigen::Index>(ch.size()), "check_observable_evolution_bound");
  const ComplexVector phi0 = linalg::basis_vector(ch.size(), ch.no_jump_index());
  if ((g_env * phi0 - g0 * phi0).norm() > 1e-9) {
    throw ContractError("g0 is not the eigenvalue of G_E on the no-jump environment state");
  }
  const double radius = spectral_radius(g_env);
  if (std::abs(gmax - radius) > 1e-9) {
    std::ostringstream os;
    os << "gmax = " << gmax << " differs from the largest absolute eigenvalue " << radius << " of G_E";
    throw ContractError(os.str());
  }

  const PurifiedState ps = purify(rho);
  const ComplexVector psi = final_joint_state(ps, ch);
  const ComplexMatrix g = linalg::tensor_product(linalg::identity(ps.dim() * ch.dim()), g_env);
  const auto [mean, var] = moments_of(g, psi);
  const double xi = survival_activity(rho, ch);

  EvolutionBoundReport out;
  out.tur = make_report(mean, var, g0, xi);
  out.g0 = g0;
  out.gmax = gmax;
  out.deviation = std::abs(mean - g0);
  out.evolution_bound = std::sqrt(gmax * gmax * std::max(xi, 0.0));
  out.evolution_holds = out.deviation <= out.evolution_bound + kHoldsTol;
  if (std::abs(g0) <= 1e-12) out.zero_baseline = make_report(mean, var, 0.0, xi);
  return out;
}

CorrelationBound classical_correlation_bound(const KrausChannel& ch, const ComplexMatrix& rho,
                                             const ComplexMatrix& g_r, const ComplexMatrix& g_s) {
  require_state_dim(rho, ch, "classical_correlation_bound");
  const auto d = static_cast<Eigen::Index>(ch.dim());
  require_observable(g_r, d, "classical_correlation_bound");
  require_observable(g_s, d, "classical_correlation_bound");
  const PurifiedState ps = purify(rho);

  Complex value = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double w = std::sqrt(ps.probabilities[static_cast<std::size_t>(i)] *
                                 ps.probabilities[static_cast<std::size_t>(j)]);
      if (w == 0.0) continue;
      const ComplexMatrix op = ps.basis.col(i) * ps.basis.col(j).adjoint();
      value += w * linalg::trace_product(g_r, op) * linalg::trace_product(g_s, channels::apply(ch, op));
    }
  }

  const ComplexMatrix g = linalg::tensor_product({g_r, g_s, linalg::identity(ch.size())});
  CorrelationBound out;
  out.value = value.real();
  out.q_baseline = q_baseline_general(g, ps, ch);
  out.xi = survival_activity(rho, ch);
  out.gmax = spectral_radius(g_r) * spectral_radius(g_s);
  const double half_width = std::sqrt(out.gmax * out.gmax * std::max(out.xi, 0.0));
  out.lower = out.q_baseline - half_width;
  out.upper = out.q_baseline + half_width;
  return out;
}

}  // namespace turlab::tur
