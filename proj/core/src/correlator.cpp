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

#include "turlab/correlator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "turlab/errors.hpp"
#include "turlab/gates.hpp"
#include "turlab/rng.hpp"

namespace turlab::correlator {

namespace {

constexpr double kStateTol = 1e-10;
constexpr double kPostselectTol = 1e-12;

void require_protocol_observable(const ComplexMatrix& m, std::size_t dim, const char* name) {
  const auto d = static_cast<Eigen::Index>(dim);
  if (m.rows() != d || m.cols() != d) {
    throw LayoutError(std::string("observable ") + name + " does not act on S");
  }
  if (!linalg::is_hermitian(m) || !linalg::is_unitary(m)) {
    throw ContractError(std::string("observable ") + name + " must be Hermitian and unitary");
  }
}

ComplexMatrix plus_state() { return ComplexMatrix::Constant(2, 2, Complex(0.5, 0.0)); }

ComplexMatrix env_projector(std::size_t dim, std::size_t index) {
  return linalg::projector(linalg::basis_vector(dim, index));
}

void conjugate(ComplexMatrix& rho, const ComplexMatrix& u) { rho = u * rho * u.adjoint(); }

void check_normalized(const ComplexMatrix& rho, Stage stage) {
  const double err = std::abs(rho.trace() - 1.0);
  if (err > kStateTol) {
    std::ostringstream os;
    os << "protocol state lost normalization at stage " << to_string(stage) << " (|Tr - 1| = " << err << ")";
    throw ContractError(os.str());
  }
}

// ⟨σ_z⟩ on `factor` of a register.
double z_expectation(const ComplexMatrix& rho, const SubsystemLayout& layout, std::size_t factor) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    const double sign = layout.digit(static_cast<std::size_t>(i), factor) == 0 ? 1.0 : -1.0;
    acc += sign * rho(i, i).real();
  }
  return acc;
}

ComplexMatrix basis_change(MeasureBasis basis) {
  return basis == MeasureBasis::x ? gates::hadamard() : ComplexMatrix(gates::hadamard() * gates::s_dagger());
}

std::string outcome_key(const SubsystemLayout& layout, const std::vector<std::size_t>& measured, std::size_t index) {
  std::string key;
  key.reserve(measured.size());
  for (std::size_t f : measured) key.push_back(static_cast<char>('0' + layout.digit(index, f)));
  return key;
}

}  // namespace

const char* to_string(Stage stage) {
  switch (stage) {
    case Stage::prepared: return "prepared";
    case Stage::after_ub: return "after_UB";
    case Stage::after_channel: return "after_channel";
    case Stage::after_ua: return "after_UA";
    case Stage::premeasure: return "premeasure";
  }
  return "unknown";
}

const char* to_string(BoundVariant variant) {
  return variant == BoundVariant::exact ? "exact" : "neumann1";
}

ProtocolState prepare_correlator_state(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                       const ComplexMatrix& b, MeasureBasis basis, Stage until) {
  tur::require_density(rho);
  require_protocol_observable(a, ch.dim(), "A");
  require_protocol_observable(b, ch.dim(), "B");
  const auto dil = ch.dilation_or_synthesize();

  ProtocolState st;
  st.layout = SubsystemLayout({2, ch.dim(), dil.env_dim}, {"S'", "S", "E"});
  st.rho = linalg::tensor_product({plus_state(), rho, env_projector(dil.env_dim, dil.env_initial)});
  st.stage = Stage::prepared;
  check_normalized(st.rho, st.stage);

  const std::pair<Stage, ComplexMatrix> steps[] = {
      {Stage::after_ub, linalg::embed(gates::controlled(b), st.layout, {0, 1})},
      {Stage::after_channel, linalg::embed(dil.unitary, st.layout, {1, 2})},
      {Stage::after_ua, linalg::embed(gates::controlled(a), st.layout, {0, 1})},
      {Stage::premeasure, linalg::embed(basis_change(basis), st.layout, {0})},
  };
  for (const auto& [stage, op] : steps) {
    if (st.stage == until) break;
    conjugate(st.rho, op);
    st.stage = stage;
    check_normalized(st.rho, st.stage);
  }
  if (st.stage == Stage::premeasure) st.measured = {0, 2};
  return st;
}

Complex exact_correlator(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                         const ComplexMatrix& b) {
  tur::require_density(rho);
  require_protocol_observable(a, ch.dim(), "A");
  require_protocol_observable(b, ch.dim(), "B");
  return linalg::trace_product(rho, channels::heisenberg(ch, a) * b);
}

Complex protocol_correlator(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                            const ComplexMatrix& b) {
  const auto sx = prepare_correlator_state(rho, ch, a, b, MeasureBasis::x);
  const auto sy = prepare_correlator_state(rho, ch, a, b, MeasureBasis::y);
  return {z_expectation(sx.rho, sx.layout, 0), z_expectation(sy.rho, sy.layout, 0)};
}

ComplexMatrix branch_state(const ComplexMatrix& rho, const ComplexMatrix& b) {
  const ComplexMatrix cb = gates::controlled(b);
  return cb * linalg::tensor_product(plus_state(), rho) * cb.adjoint();
}

ComplexMatrix reduced_branch_state(const ComplexMatrix& rho, const ComplexMatrix& b) {
  const SubsystemLayout layout({2, static_cast<std::size_t>(rho.rows())}, {"S'", "S"});
  return linalg::partial_trace(branch_state(rho, b), layout, {1});
}

ComplexMatrix protocol_observable(const ComplexMatrix& a, CorrelatorPart part) {
  const ComplexMatrix ca = gates::controlled(a);
  const ComplexMatrix sigma = gates::pauli(part == CorrelatorPart::real ? 1 : 2);
  return ca.adjoint() * linalg::tensor_product(sigma, linalg::identity(static_cast<std::size_t>(a.rows()))) * ca;
}

double approximate_q(double p0, double first_term, double nested_term, QApprox q_approx) {
  const double second = q_approx == QApprox::linear_p0 ? p0 : p0 * p0;
  return 2.0 * p0 * first_term - second * nested_term;
}

ApproxQuantities approx_bound_quantities(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                         const ComplexMatrix& b, CorrelatorPart part, QApprox q_approx) {
  tur::require_density(rho);
  require_protocol_observable(a, ch.dim(), "A");
  require_protocol_observable(b, ch.dim(), "B");
  const ComplexMatrix sigma_b = branch_state(rho, b);
  const ComplexMatrix g = protocol_observable(a, part);
  const ComplexMatrix& v0 = ch.no_jump();
  const ComplexMatrix v = linalg::tensor_product(linalg::identity(2), v0);

  ApproxQuantities out;
  const ComplexMatrix post = v * sigma_b * v.adjoint();
  out.p0 = post.trace().real();
  if (out.p0 <= kPostselectTol) throw DegenerateChannel("no-jump probability vanishes");
  const ComplexMatrix conditioned = post / out.p0;
  out.first_term = linalg::trace_product(conditioned, g).real();
  const ComplexMatrix outer = linalg::tensor_product(linalg::identity(2), v0 * v0.adjoint());
  out.nested_term = linalg::trace_product(conditioned, g * outer).real();
  out.xi_approx = 1.0 - out.p0;
  out.q_approx = approximate_q(out.p0, out.first_term, out.nested_term, q_approx);
  return out;
}

BoundReport correlator_bound(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                             const ComplexMatrix& b, BoundVariant variant, CorrelatorPart part, QApprox q_approx) {
  const Complex c = exact_correlator(rho, ch, a, b);
  BoundReport r;
  r.correlator_real = c.real();
  r.correlator_imag = c.imag();
  r.part = part;
  r.approx_variant = variant;
  if (variant == BoundVariant::exact) {
    r.xi_b = tur::survival_activity(reduced_branch_state(rho, b), ch);
    r.q_ab = tur::separable_baseline(protocol_observable(a, part), branch_state(rho, b), 2, ch);
  } else {
    const auto aq = approx_bound_quantities(rho, ch, a, b, part, q_approx);
    r.xi_b = aq.xi_approx;
    r.q_ab = aq.q_approx;
  }
  const double half = std::sqrt(std::max(r.xi_b, 0.0));
  r.lower = r.q_ab - half;
  r.upper = r.q_ab + half;
  r.holds = r.lower - tur::kHoldsTol <= r.value() && r.value() <= r.upper + tur::kHoldsTol;
  return r;
}

ProtocolState prepare_nested_state(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                   const ComplexMatrix& b, CorrelatorPart part) {
  tur::require_density(rho);
  require_protocol_observable(a, ch.dim(), "A");
  require_protocol_observable(b, ch.dim(), "B");
  const auto dil = ch.dilation_or_synthesize();
  const ComplexMatrix env0 = env_projector(dil.env_dim, dil.env_initial);

  ProtocolState st;
  st.layout = SubsystemLayout({2, ch.dim(), dil.env_dim, dil.env_dim, 2}, {"S'", "S", "E1", "E2", "S'1"});
  st.rho = linalg::tensor_product({plus_state(), rho, env0, env0, plus_state()});
  const ComplexMatrix ops[] = {
      linalg::embed(gates::controlled(b), st.layout, {0, 1}),
      linalg::embed(dil.unitary, st.layout, {1, 2}),
      linalg::embed(gates::controlled(protocol_observable(a, part)), st.layout, {4, 0, 1}),
      linalg::embed(dil.unitary.adjoint(), st.layout, {1, 3}),
      linalg::embed(gates::hadamard(), st.layout, {4}),
  };
  for (const auto& op : ops) {
    conjugate(st.rho, op);
    check_normalized(st.rho, Stage::premeasure);
  }
  st.stage = Stage::premeasure;
  st.measured = {2, 3, 4};
  return st;
}

NestedResult nested_expectation(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                const ComplexMatrix& b, CorrelatorPart part) {
  tur::require_density(rho);
  require_protocol_observable(a, ch.dim(), "A");
  require_protocol_observable(b, ch.dim(), "B");
  const auto dil = ch.dilation_or_synthesize();
  const ComplexMatrix env0 = env_projector(dil.env_dim, dil.env_initial);
  const SubsystemLayout layout({2, ch.dim(), dil.env_dim, dil.env_dim, 2}, {"S'", "S", "E1", "E2", "S'1"});

  NestedResult out;
  ComplexMatrix st = linalg::tensor_product({plus_state(), rho, env0, env0, plus_state()});
  conjugate(st, linalg::embed(gates::controlled(b), layout, {0, 1}));
  conjugate(st, linalg::embed(dil.unitary, layout, {1, 2}));

  const ComplexMatrix p1 = linalg::embed(env0, layout, {2});
  st = p1 * st * p1;
  out.p_e1 = st.trace().real();
  if (out.p_e1 <= kPostselectTol) throw DegenerateChannel("nested circuit: Pr[E1 = 0] vanishes");
  st /= out.p_e1;

  conjugate(st, linalg::embed(gates::controlled(protocol_observable(a, part)), layout, {4, 0, 1}));
  conjugate(st, linalg::embed(dil.unitary.adjoint(), layout, {1, 3}));
  const ComplexMatrix p2 = linalg::embed(env0, layout, {3});
  st = p2 * st * p2;
  out.p_e2_given_e1 = st.trace().real();
  if (out.p_e2_given_e1 <= kPostselectTol) throw DegenerateChannel("nested circuit: Pr[E2 = 0 | E1 = 0] vanishes");
  st /= out.p_e2_given_e1;

  conjugate(st, linalg::embed(gates::hadamard(), layout, {4}));
  out.conditional_expectation = z_expectation(st, layout, 4);
  out.value = out.p_e2_given_e1 * out.conditional_expectation;

  const auto probs = outcome_probabilities(prepare_nested_state(rho, ch, a, b, part));
  const std::string kept(2, static_cast<char>('0' + dil.env_initial));
  for (const auto& [key, p] : probs) {
    if (key.compare(0, 2, kept) == 0) out.p_joint += p;
  }
  return out;
}

tur::TurReport separable_tur_protocol_check(const ComplexMatrix& rho, const KrausChannel& ch,
                                            const ComplexMatrix& a, const ComplexMatrix& b, CorrelatorPart part) {
  const auto bound = correlator_bound(rho, ch, a, b, BoundVariant::exact, part);
  const double mean = bound.value();
  return tur::make_report(mean, std::max(1.0 - mean * mean, 0.0), bound.q_ab, bound.xi_b);
}

std::uint64_t ShotResult::count(const std::string& key) const {
  const auto it = counts.find(key);
  return it == counts.end() ? 0 : it->second;
}

std::map<std::string, double> outcome_probabilities(const ProtocolState& state) {
  if (state.stage != Stage::premeasure || state.measured.empty()) {
    throw ContractError("outcome probabilities need a premeasure state with measured factors");
  }
  std::map<std::string, double> out;
  for (Eigen::Index i = 0; i < state.rho.rows(); ++i) {
    out[outcome_key(state.layout, state.measured, static_cast<std::size_t>(i))] +=
        std::max(state.rho(i, i).real(), 0.0);
  }
  return out;
}

ShotResult sample_shots(const ProtocolState& state, std::uint64_t shots, std::uint64_t seed, std::uint64_t trial,
                        std::uint64_t stream) {
  const auto probs = outcome_probabilities(state);
  std::vector<std::string> keys;
  std::vector<double> cumulative;
  double total = 0.0;
  for (const auto& [key, p] : probs) {
    total += p;
    keys.push_back(key);
    cumulative.push_back(total);
  }

  ShotResult out;
  out.shots = shots;
  out.seed = seed;
  out.trial = trial;
  CounterRng rng(seed, stream, trial);
  for (std::uint64_t s = 0; s < shots; ++s) {
    const double u = rng.uniform() * total;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    ++out.counts[keys[static_cast<std::size_t>(it - cumulative.begin())]];
  }
  return out;
}

}  // namespace turlab::correlator
