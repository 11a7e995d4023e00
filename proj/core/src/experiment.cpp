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

#include "turlab/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "turlab/errors.hpp"
#include "turlab/gates.hpp"
#include "turlab/rng.hpp"

namespace turlab::experiment {

using correlator::BoundVariant;
using correlator::CorrelatorPart;
using linalg::ComplexVector;

namespace {

PauliPair draw_pauli_pair(CounterRng& rng) {
  const int k = 1 + static_cast<int>(rng.index(15));
  return {k / 4, k % 4};
}

// RX(θ_a) followed by RY(θ_b).
ComplexMatrix rx_then_ry(double theta_a, double theta_b) { return gates::ry(theta_b) * gates::rx(theta_a); }

ComplexMatrix random_product_observable(const tur::PurifiedState& ps, const KrausChannel& ch, CounterRng& rng,
                                        ComplexMatrix& g0) {
  const std::size_t rs = ps.dim() * ch.dim();
  const std::size_t env = ch.size();
  const ComplexMatrix w = random::unitary(rs, rng);
  const auto n = static_cast<Eigen::Index>(rs * env);
  ComplexMatrix g = ComplexMatrix::Zero(n, n);
  g0 = ComplexMatrix::Zero(static_cast<Eigen::Index>(rs), static_cast<Eigen::Index>(rs));
  for (std::size_t l = 0; l < rs; ++l) {
    const ComplexMatrix pl = linalg::projector(w.col(static_cast<Eigen::Index>(l)));
    for (std::size_t m = 0; m < env; ++m) {
      const double glm = rng.normal();
      g += glm * linalg::tensor_product(pl, linalg::projector(linalg::basis_vector(env, m)));
      if (m == ch.no_jump_index()) g0 += glm * pl;
    }
  }
  return g;
}

ExactValues evaluate_exact(const ExperimentConfig& config, const TrialInputs& in, const ComplexMatrix& rho,
                           const KrausChannel& ch, const ComplexMatrix& a, const ComplexMatrix& b) {
  ExactValues ex;
  const auto re = correlator::correlator_bound(rho, ch, a, b, BoundVariant::exact, CorrelatorPart::real);
  const auto im = correlator::correlator_bound(rho, ch, a, b, BoundVariant::exact, CorrelatorPart::imag);
  ex.c_real = re.correlator_real;
  ex.c_imag = re.correlator_imag;
  ex.xi_b = re.xi_b;
  ex.q_ab = re.q_ab;
  ex.lower = re.lower;
  ex.upper = re.upper;
  ex.bound_holds = re.holds;
  ex.q_ab_imag = im.q_ab;
  ex.lower_imag = im.lower;
  ex.upper_imag = im.upper;
  ex.imag_bound_holds = im.holds;
  ex.separable = tur::make_report(re.correlator_real, std::max(1.0 - re.correlator_real * re.correlator_real, 0.0),
                                  re.q_ab, re.xi_b);

  if (config.check_general) {
    CounterRng rng(config.seed, kObservableStream, in.id);
    const auto ps = tur::purify(rho);
    const std::size_t joint_dim = ps.dim() * ch.dim() * ch.size();
    ex.general = tur::check_general_tur(random::hermitian(joint_dim, rng), ps, ch);

    ComplexMatrix g0;
    const ComplexMatrix g = random_product_observable(ps, ch, rng, g0);
    const ComplexVector psi = tur::final_joint_state(ps, ch);
    const ComplexVector gpsi = g * psi;
    const double mean = psi.dot(gpsi).real();
    const double var = (gpsi - mean * psi).squaredNorm();
    ex.product = tur::make_report(mean, var, tur::q_baseline_separable(g0, ps, ch), tur::survival_activity(rho, ch));
  }
  return ex;
}

SampledValues evaluate_sampled(const ExperimentConfig& config, const TrialInputs& in, const ComplexMatrix& rho,
                               const KrausChannel& ch, const ComplexMatrix& a, const ComplexMatrix& b) {
  SampledValues s;
  s.shots = config.shots;
  const auto protocol = correlator::prepare_correlator_state(rho, ch, a, b, correlator::MeasureBasis::x);
  s.protocol_counts = correlator::sample_shots(protocol, config.shots, config.seed, in.id, kProtocolStream);
  const auto nested = correlator::prepare_nested_state(rho, ch, a, b, CorrelatorPart::real);
  s.nested_counts = correlator::sample_shots(nested, config.shots, config.seed, in.id, kNestedStream);

  // Protocol keys: (S', E). Nested keys: (E1, E2, S'1).
  const char e0 = static_cast<char>('0' + ch.no_jump_index());
  double signed_all = 0.0, signed_kept = 0.0, kept = 0.0;
  for (const auto& [key, n] : s.protocol_counts.counts) {
    const double sign = key[0] == '0' ? 1.0 : -1.0;
    signed_all += sign * static_cast<double>(n);
    if (key[1] == e0) {
      kept += static_cast<double>(n);
      signed_kept += sign * static_cast<double>(n);
    }
  }
  double nested_e1 = 0.0, nested_signed = 0.0;
  for (const auto& [key, n] : s.nested_counts.counts) {
    if (key[0] != e0) continue;
    nested_e1 += static_cast<double>(n);
    if (key[1] == e0) nested_signed += (key[2] == '0' ? 1.0 : -1.0) * static_cast<double>(n);
  }
  if (kept == 0.0 || nested_e1 == 0.0) throw DegenerateChannel("no shots survived postselection");

  const auto shots = static_cast<double>(config.shots);
  s.c_real = signed_all / shots;
  s.p0 = kept / shots;
  s.first_term = signed_kept / kept;
  s.nested_term = nested_signed / nested_e1;
  s.xi_b = 1.0 - s.p0;
  s.q_ab = correlator::approximate_q(s.p0, s.first_term, s.nested_term, config.q_approx);
  const double half = std::sqrt(std::max(s.xi_b, 0.0));
  s.lower = s.q_ab - half;
  s.upper = s.q_ab + half;
  s.bound_holds = s.lower - tur::kHoldsTol <= s.c_real && s.c_real <= s.upper + tur::kHoldsTol;
  s.separable = tur::make_report(s.c_real, std::max(1.0 - s.c_real * s.c_real, 0.0), s.q_ab, s.xi_b);
  return s;
}

template <typename F>
void guarded(TrialRecord& rec, F&& f) {
  try {
    f();
  } catch (const DegenerateChannel& e) {
    if (!rec.failure) rec.failure = e.what();
  } catch (const SingularOperator& e) {
    if (!rec.failure) rec.failure = e.what();
  }
}

}  // namespace

const char* to_string(Variant v) {
  switch (v) {
    case Variant::exact: return "exact";
    case Variant::neumann1: return "neumann1";
    case Variant::sampled: return "sampled";
  }
  return "unknown";
}

Variant parse_variant(const std::string& name) {
  if (name == "exact") return Variant::exact;
  if (name == "neumann1" || name == "approx") return Variant::neumann1;
  if (name == "sampled") return Variant::sampled;
  throw ContractError("unknown variant '" + name + "' (expected exact, neumann1 or sampled)");
}

void ExperimentConfig::validate() const {
  if (n_trials < 1) throw ContractError("n_trials must be at least 1");
  if (!(gamma_range.lo >= 0.0 && gamma_range.lo <= gamma_range.hi && gamma_range.hi < 1.0)) {
    throw ContractError("gamma range must satisfy 0 <= min <= max < 1");
  }
  if (!(theta_range.lo >= 0.0 && theta_range.lo <= theta_range.hi && theta_range.hi <= 2.0 * std::numbers::pi)) {
    throw ContractError("theta range must lie within [0, 2*pi]");
  }
  if (variants.empty()) throw ContractError("at least one variant must be requested");
  if (has(Variant::sampled) && shots < 1) throw ContractError("the sampled variant needs shots >= 1");
}

std::string PauliPair::label() const { return gates::pauli_label(i, j); }

TrialInputs generate_trial(const ExperimentConfig& config, std::size_t id) {
  CounterRng rng(config.seed, kParameterStream, id);
  TrialInputs in;
  in.id = id;
  in.gamma = rng.uniform(config.gamma_range.lo, config.gamma_range.hi);
  for (double& t : in.theta) t = rng.uniform(config.theta_range.lo, config.theta_range.hi);
  in.a = draw_pauli_pair(rng);
  in.b = draw_pauli_pair(rng);
  return in;
}

ComplexMatrix preparation_state(const std::array<double, 12>& theta) {
  const ComplexMatrix prep = linalg::tensor_product(rx_then_ry(theta[0], theta[1]), rx_then_ry(theta[2], theta[3]));
  return linalg::projector(prep.col(0));
}

ComplexMatrix dilation_unitary(const std::array<double, 12>& theta, double gamma) {
  const ComplexMatrix i2 = linalg::identity(2);
  const ComplexMatrix first =
      linalg::tensor_product({rx_then_ry(theta[4], theta[5]), rx_then_ry(theta[6], theta[7]), i2});
  const ComplexMatrix coupling = gates::controlled_on(gates::ry(std::numbers::pi * gamma), 0, 2, 3);
  const ComplexMatrix last =
      linalg::tensor_product({rx_then_ry(theta[8], theta[9]), rx_then_ry(theta[10], theta[11]), i2});
  return last * coupling * first;
}

KrausChannel trial_channel(const TrialInputs& in) {
  return channels::kraus_from_unitary(dilation_unitary(in.theta, in.gamma),
                                      linalg::SubsystemLayout({4, 2}, {"S", "E"}), 0);
}

bool ExactValues::violated() const {
  return !bound_holds || !imag_bound_holds || !separable.holds || (general && !general->holds) ||
         (product && !product->holds);
}

TrialRecord evaluate_trial(const ExperimentConfig& config, const TrialInputs& inputs) {
  TrialRecord rec;
  rec.inputs = inputs;
  const KrausChannel ch = trial_channel(inputs);
  const ComplexMatrix rho = preparation_state(inputs.theta);
  const ComplexMatrix a = gates::pauli_string(inputs.a.label());
  const ComplexMatrix b = gates::pauli_string(inputs.b.label());
  rec.postselect_p0 = tur::no_jump_probability(correlator::reduced_branch_state(rho, b), ch);

  if (config.has(Variant::exact)) {
    guarded(rec, [&] { rec.exact = evaluate_exact(config, inputs, rho, ch, a, b); });
  }
  if (config.has(Variant::neumann1)) {
    guarded(rec, [&] {
      const auto r = correlator::correlator_bound(rho, ch, a, b, BoundVariant::neumann1, CorrelatorPart::real,
                                                  config.q_approx);
      ApproxValues ap;
      ap.xi_b = r.xi_b;
      ap.q_ab = r.q_ab;
      ap.lower = r.lower;
      ap.upper = r.upper;
      ap.bound_holds = r.holds;
      ap.separable = tur::make_report(r.correlator_real,
                                      std::max(1.0 - r.correlator_real * r.correlator_real, 0.0), r.q_ab, r.xi_b);
      rec.approx = ap;
    });
  }
  if (config.has(Variant::sampled)) {
    guarded(rec, [&] { rec.sampled = evaluate_sampled(config, inputs, rho, ch, a, b); });
  }
  return rec;
}

Stats compute_stats(std::vector<double> values) {
  Stats s;
  s.count = values.size();
  if (values.empty()) {
    s.min = s.median = s.max = std::numeric_limits<double>::quiet_NaN();
    return s;
  }
  std::sort(values.begin(), values.end());
  s.min = values.front();
  s.max = values.back();
  const std::size_t mid = values.size() / 2;
  s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
  return s;
}

RunSummary summarize(const std::vector<TrialRecord>& records, const std::vector<double>& gamma_edges) {
  if (records.empty()) throw ContractError("summarize needs at least one record");
  if (gamma_edges.size() < 2) throw ContractError("summarize needs at least two gamma bucket edges");
  std::vector<const TrialRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const TrialRecord* x, const TrialRecord* y) { return x->inputs.id < y->inputs.id; });

  RunSummary s;
  s.n_trials = sorted.size();
  std::vector<double> tur_margins, bound_margins, sampled_ratios;
  std::vector<std::vector<double>> gaps(gamma_edges.size() - 1);
  for (const TrialRecord* r : sorted) {
    if (r->failure) ++s.failed_trials;
    if (r->exact) {
      const auto& ex = *r->exact;
      ++s.exact.evaluated;
      if (!ex.separable.holds) ++s.exact.tur_violations;
      if (!ex.bound_holds) ++s.exact.bound_violations;
      if (!ex.imag_bound_holds) ++s.exact_imag_violations;
      if (ex.general && !ex.general->holds) ++s.exact_general_violations;
      if (ex.product && !ex.product->holds) ++s.exact_product_violations;
      if (ex.separable.degenerate) {
        ++s.degenerate_trials;
      } else {
        tur_margins.push_back(ex.separable.margin);
      }
      bound_margins.push_back(std::min(ex.c_real - ex.lower, ex.upper - ex.c_real));
    }
    if (r->approx) {
      ++s.approx.evaluated;
      if (!r->approx->separable.holds) ++s.approx.tur_violations;
      if (!r->approx->bound_holds) ++s.approx.bound_violations;
      if (r->exact) {
        const double g = r->inputs.gamma;
        for (std::size_t k = 0; k + 1 < gamma_edges.size(); ++k) {
          const bool last = k + 2 == gamma_edges.size();
          if (g >= gamma_edges[k] && (g < gamma_edges[k + 1] || (last && g <= gamma_edges[k + 1]))) {
            gaps[k].push_back(std::abs(r->approx->upper - r->exact->upper));
            break;
          }
        }
      }
    }
    if (r->sampled) {
      ++s.sampled.evaluated;
      if (!r->sampled->separable.holds) ++s.sampled.tur_violations;
      if (!r->sampled->bound_holds) ++s.sampled.bound_violations;
      const double ratio = r->sampled->separable.ratio();
      if (std::isfinite(ratio)) sampled_ratios.push_back(ratio);
    }
  }
  s.tur_margin_exact = compute_stats(std::move(tur_margins));
  s.bound_margin_exact = compute_stats(std::move(bound_margins));
  s.tur_ratio_sampled = compute_stats(std::move(sampled_ratios));
  for (std::size_t k = 0; k + 1 < gamma_edges.size(); ++k) {
    s.approx_gap.push_back({gamma_edges[k], gamma_edges[k + 1], compute_stats(std::move(gaps[k]))});
  }
  return s;
}

std::size_t worker_count(const ExperimentConfig& config) {
  std::size_t n = config.threads;
  if (n == 0) {
    if (const char* env = std::getenv("TURLAB_THREADS")) {
      char* end = nullptr;
      const long v = std::strtol(env, &end, 10);
      if (end != env && v > 0) n = static_cast<std::size_t>(v);
    }
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, std::min(n, config.n_trials));
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  ExperimentResult result;
  result.records.resize(config.n_trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t id = next++; id < config.n_trials; id = next++) {
      try {
        result.records[id] = evaluate_trial(config, generate_trial(config, id));
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = worker_count(config);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  std::vector<double> edges{config.gamma_range.lo};
  for (int k = 1; k <= 4; ++k) edges.push_back(config.gamma_range.lo + (config.gamma_range.hi - config.gamma_range.lo) * k / 4.0);
  if (config.gamma_range.hi == config.gamma_range.lo) edges = {config.gamma_range.lo, config.gamma_range.hi};
  result.summary = summarize(result.records, edges);
  result.summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace turlab::experiment
