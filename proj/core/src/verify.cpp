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

#include "turlab/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <map>
#include <sstream>

#include "turlab/correlator.hpp"
#include "turlab/errors.hpp"
#include "turlab/experiment.hpp"
#include "turlab/gates.hpp"
#include "turlab/rng.hpp"
#include "turlab/tur.hpp"

namespace turlab::verify {

namespace {

using channels::KrausChannel;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

constexpr std::uint64_t kStateStream = 4;
constexpr std::uint64_t kChannelStream = 5;

struct Accumulator {
  SuiteResult r;

  void check(double error) {
    ++r.checks;
    if (!(error <= r.tolerance)) ++r.failures;
    if (std::isnan(error) || error > r.max_error) r.max_error = error;
  }

  SuiteResult finish(const std::string& extra = {}) {
    r.passed = r.failures == 0 && r.checks > 0;
    std::ostringstream os;
    os << r.checks << " checks, " << r.failures << " failures, max error " << std::scientific
       << std::setprecision(3) << r.max_error << " (tolerance " << std::setprecision(0) << r.tolerance << ")";
    if (!extra.empty()) os << "; " << extra;
    r.detail = os.str();
    return r;
  }
};

Accumulator start(const char* name, const char* property, double tol) {
  Accumulator acc;
  acc.r.name = name;
  acc.r.property = property;
  acc.r.tolerance = tol;
  return acc;
}

experiment::ExperimentConfig family(const SuiteOptions& o) {
  experiment::ExperimentConfig cfg;
  cfg.seed = o.seed;
  return cfg;
}

SuiteResult qfi_suite(const SuiteOptions& o) {
  auto acc = start("qfi", "J(0) = Xi", 1e-8);
  const auto cfg = family(o);
  for (std::size_t k = 0; k < o.trials; ++k) {
    const auto in = experiment::generate_trial(cfg, k);
    const auto ch = experiment::trial_channel(in);
    CounterRng rng(o.seed, kStateStream, k);
    const ComplexMatrix rho =
        k % 2 == 0 ? experiment::preparation_state(in.theta) : random::density(ch.dim(), rng);
    const auto ps = tur::purify(rho);
    acc.check(std::abs(tur::qfi(ch, ps) - tur::survival_activity(rho, ch)));
  }
  return acc.finish();
}

ComplexVector derivative_state(const tur::PurifiedState& ps, const KrausChannel& ch, bool flip) {
  // ∂θ|Ψ⟩ = Σ_m dV_m |Ψ_RS⟩ ⊗ |m⟩.
  const auto ds = static_cast<Eigen::Index>(ch.dim());
  const auto m_count = static_cast<Eigen::Index>(ch.size());
  const auto dr = static_cast<Eigen::Index>(ps.dim());
  ComplexVector out = ComplexVector::Zero(dr * ds * m_count);
  const ComplexMatrix dv0 = (flip ? -1.0 : 1.0) * channels::dv0_dtheta(ch);
  for (Eigen::Index m = 0; m < m_count; ++m) {
    const ComplexMatrix dv =
        static_cast<std::size_t>(m) == ch.no_jump_index() ? dv0 : ComplexMatrix(0.5 * ch.op(static_cast<std::size_t>(m)));
    for (Eigen::Index r = 0; r < dr; ++r) {
      const ComplexVector block = dv * ps.joint.segment(r * ds, ds);
      for (Eigen::Index i = 0; i < ds; ++i) out((r * ds + i) * m_count + m) = block(i);
    }
  }
  return out;
}

SuiteResult scaling_suite(const SuiteOptions& o) {
  auto acc = start("scaling", "d<G>/dtheta = <G> - Q_G", 1e-6);
  const auto cfg = family(o);
  constexpr double h = 1e-5;
  double analytic_max = 0.0;
  std::size_t analytic_failures = 0;
  for (std::size_t k = 0; k < o.trials; ++k) {
    const auto ch = experiment::trial_channel(experiment::generate_trial(cfg, k));
    CounterRng rng(o.seed, kStateStream, k);
    const auto ps = tur::purify(random::density(ch.dim(), rng));
    const ComplexMatrix g = random::hermitian(ps.dim() * ch.dim() * ch.size(), rng);

    auto mean_at = [&](const KrausChannel& c) {
      const ComplexVector psi = tur::final_joint_state(ps, c);
      return psi.dot(g * psi).real();
    };
    const ComplexVector psi = tur::final_joint_state(ps, ch);
    const double mean = psi.dot(g * psi).real();
    const double target = mean - tur::q_baseline_general(g, ps, ch);
    const double fd = (mean_at(channels::perturbed_kraus(ch, h).channel) -
                       mean_at(channels::perturbed_kraus(ch, -h).channel)) / (2.0 * h);
    const double analytic = 2.0 * psi.dot(g * derivative_state(ps, ch, o.inject_dv0_sign_fault)).real();

    acc.check(std::abs(fd - target));
    const double err = std::abs(analytic - target);
    analytic_max = std::max(analytic_max, err);
    if (!(err <= acc.r.tolerance)) ++analytic_failures;
  }
  acc.r.failures += analytic_failures;
  acc.r.max_error = std::max(acc.r.max_error, analytic_max);
  std::ostringstream os;
  os << "analytic derivative max error " << std::scientific << std::setprecision(3) << analytic_max;
  return acc.finish(os.str());
}

SuiteResult protocol_suite(const SuiteOptions& o) {
  auto acc = start("protocol", "protocol C(T) = exact C(T)", 1e-10);
  const auto cfg = family(o);
  for (std::size_t k = 0; k < o.trials; ++k) {
    const auto in = experiment::generate_trial(cfg, k);
    const auto ch = experiment::trial_channel(in);
    const ComplexMatrix rho = experiment::preparation_state(in.theta);
    const ComplexMatrix a = gates::pauli_string(in.a.label());
    const ComplexMatrix b = gates::pauli_string(in.b.label());
    acc.check(std::abs(correlator::protocol_correlator(rho, ch, a, b) - correlator::exact_correlator(rho, ch, a, b)));
  }
  return acc.finish();
}

SuiteResult saturation_suite(const SuiteOptions& o) {
  auto acc = start("saturation", "TUR ratio = 1 for G in the SLD eigenbasis", 1e-6);
  for (std::size_t k = 0; k < o.trials; ++k) {
    CounterRng rng(o.seed, kChannelStream, k);
    const auto ch = channels::random_channel(4, 2, rng);
    const auto ps = tur::purify(random::density(ch.dim(), rng));
    const auto spec = linalg::spectral(tur::sld(ps, ch).matrix);
    const auto n = spec.projectors.front().rows();
    ComplexMatrix g = ComplexMatrix::Zero(n, n);
    for (const auto& p : spec.projectors) g += rng.normal() * p;
    const auto report = tur::check_general_tur(g, ps, ch);
    acc.check(std::abs(report.ratio() - 1.0));
  }
  return acc.finish();
}

SuiteResult series_suite(const SuiteOptions& o) {
  auto acc = start("series", "protocol moments = matrix powers; N=1 estimate = 1 - p0", 1e-10);
  const auto cfg = family(o);
  constexpr std::size_t kOrder = 4;
  std::vector<std::vector<double>> errors(kOrder);
  for (std::size_t k = 0; k < o.trials; ++k) {
    const auto in = experiment::generate_trial(cfg, k);
    const auto ch = experiment::trial_channel(in);
    CounterRng rng(o.seed, kStateStream, k);
    const ComplexMatrix rho = random::density(ch.dim(), rng);

    const auto direct = tur::survival_moments(rho, ch, kOrder);
    const auto simulated = tur::survival_activity_protocol_sim(rho, ch, kOrder);
    double moment_err = 0.0;
    for (std::size_t n = 0; n <= kOrder; ++n) moment_err = std::max(moment_err, std::abs(direct[n] - simulated[n]));
    acc.check(moment_err);

    const auto series = tur::survival_activity_series(rho, ch, kOrder);
    acc.check(std::abs(series[0] - (1.0 - tur::no_jump_probability(rho, ch))));
    const double xi = tur::survival_activity(rho, ch);
    for (std::size_t n = 0; n < kOrder; ++n) errors[n].push_back(std::abs(xi - series[n]));
  }
  std::vector<double> medians;
  for (auto& e : errors) medians.push_back(experiment::compute_stats(e).median);
  bool decreasing = true;
  for (std::size_t n = 1; n < medians.size(); ++n) decreasing = decreasing && medians[n] < medians[n - 1];
  ++acc.r.checks;
  if (!decreasing) ++acc.r.failures;
  std::ostringstream os;
  os << "median series error N=1..4:" << std::scientific << std::setprecision(3);
  for (double m : medians) os << ' ' << m;
  return acc.finish(os.str());
}

const std::map<std::string, std::function<SuiteResult(const SuiteOptions&)>>& registry() {
  static const std::map<std::string, std::function<SuiteResult(const SuiteOptions&)>> suites{
      {"qfi", qfi_suite},
      {"scaling", scaling_suite},
      {"protocol", protocol_suite},
      {"saturation", saturation_suite},
      {"series", series_suite},
  };
  return suites;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"qfi", "scaling", "protocol", "saturation", "series"};
  return names;
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& options) {
  const auto it = registry().find(name);
  if (it == registry().end()) throw ContractError("unknown verify suite '" + name + "'");
  if (options.trials < 1) throw ContractError("verify needs at least one trial");
  return it->second(options);
}

std::vector<SuiteResult> run_all(const SuiteOptions& options) {
  std::vector<SuiteResult> out;
  for (const auto& name : suite_names()) out.push_back(run_suite(name, options));
  return out;
}

}  // namespace turlab::verify
