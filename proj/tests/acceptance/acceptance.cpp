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


// Acceptance suite: one PASS/FAIL line per criterion, each with its runtime
// and budget. Exit status is nonzero if any criterion fails.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"
#include "turlab/channels.hpp"
#include "turlab/correlator.hpp"
#include "turlab/errors.hpp"
#include "turlab/experiment.hpp"
#include "turlab/gates.hpp"
#include "turlab/rng.hpp"
#include "turlab/tur.hpp"
#include "turlab/verify.hpp"

namespace {

using namespace turlab;
using linalg::ComplexMatrix;

constexpr std::uint64_t kSeed = 2026;
constexpr std::uint64_t kShotSeed = 7;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  const char* title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Outcome from_suite(const verify::SuiteResult& r) { return {r.passed, r.detail}; }

verify::SuiteOptions suite_options(std::size_t trials) {
  verify::SuiteOptions o;
  o.trials = trials;
  o.seed = kSeed;
  return o;
}

Outcome qfi_identity() {
  auto out = from_suite(verify::run_suite("qfi", suite_options(100)));
  // Independent cross-check: finite-difference QFI of the perturbed family on the same channels.
  experiment::ExperimentConfig cfg;
  cfg.seed = kSeed;
  double worst = 0.0;
  for (std::size_t k = 0; k < 100; ++k) {
    const auto in = experiment::generate_trial(cfg, k);
    const auto ch = experiment::trial_channel(in);
    const ComplexMatrix rho = experiment::preparation_state(in.theta);
    const double xi = tur::survival_activity(rho, ch);
    worst = std::max(worst, std::abs(oracle::qfi_finite_difference(ch, rho) - xi) / std::max(1.0, xi));
  }
  out.passed = out.passed && worst <= 1e-6;
  out.detail += "; finite-difference QFI max rel. error " + fmt_sci(worst);
  return out;
}

Outcome exact_soundness() {
  experiment::ExperimentConfig cfg;
  cfg.seed = kSeed;
  cfg.n_trials = 500;
  cfg.variants = {experiment::Variant::exact};
  const auto result = experiment::run_experiment(cfg);
  const auto& s = result.summary;
  const std::size_t bad = s.exact.tur_violations + s.exact.bound_violations + s.exact_imag_violations +
                          s.exact_general_violations + s.exact_product_violations;
  std::ostringstream os;
  os << s.exact.evaluated << " trials; violations: Eq.1 " << s.exact_general_violations << ", Eq.2 "
     << s.exact_product_violations << ", Eq.4 re " << s.exact.bound_violations << ", Eq.4 im "
     << s.exact_imag_violations << ", separable " << s.exact.tur_violations << "; " << s.failed_trials
     << " failed, " << s.degenerate_trials << " degenerate";
  return {bad == 0 && s.failed_trials == 0 && s.exact.evaluated == 500, os.str()};
}

Outcome approximation_trend() {
  std::vector<double> medians;
  std::ostringstream os;
  os << "median |upper_exact - upper_neumann1|:";
  for (double gamma : {0.1, 0.3, 0.5, 0.75}) {
    experiment::ExperimentConfig cfg;
    cfg.seed = kSeed;
    cfg.n_trials = 100;
    cfg.gamma_range = {gamma, gamma};
    cfg.variants = {experiment::Variant::exact, experiment::Variant::neumann1};
    cfg.check_general = false;
    const auto s = experiment::run_experiment(cfg).summary;
    medians.push_back(s.approx_gap.front().gap.median);
    os << " g=" << gamma << ' ' << fmt_sci(medians.back());
  }
  bool increasing = true;
  for (std::size_t k = 1; k < medians.size(); ++k) increasing = increasing && medians[k] > medians[k - 1];
  return {increasing, os.str()};
}

// Bit-exact digest of everything the sampled variant produced.
std::string digest(const experiment::ExperimentResult& r) {
  std::ostringstream os;
  char buf[64];
  for (const auto& rec : r.records) {
    os << rec.inputs.id << ':' << rec.failure.value_or("") << ';';
    if (!rec.sampled) continue;
    for (double v : {rec.sampled->c_real, rec.sampled->p0, rec.sampled->q_ab, rec.sampled->xi_b}) {
      std::snprintf(buf, sizeof buf, "%a,", v);
      os << buf;
    }
    for (const auto* counts : {&rec.sampled->protocol_counts, &rec.sampled->nested_counts}) {
      for (const auto& [key, n] : counts->counts) os << key << '=' << n << ',';
    }
  }
  return os.str();
}

Outcome shot_noise() {
  experiment::ExperimentConfig cfg;
  cfg.seed = kShotSeed;
  cfg.n_trials = 50;
  cfg.shots = 1000;
  cfg.variants = {experiment::Variant::exact, experiment::Variant::sampled};
  cfg.check_general = false;
  const auto first = experiment::run_experiment(cfg);
  const auto second = experiment::run_experiment(cfg);
  const auto& s = first.summary;
  const bool repeat = digest(first) == digest(second);
  std::ostringstream os;
  os << "sampled separable-TUR violations " << s.sampled.tur_violations << " of " << s.sampled.evaluated
     << " (hardware reference: 4 of 50), bound violations " << s.sampled.bound_violations << ", "
     << s.failed_trials << " failed; repeat run " << (repeat ? "identical" : "DIFFERS");
  return {repeat && s.sampled.evaluated == 50 && s.sampled.tur_violations <= 6, os.str()};
}

Outcome degenerate_handling() {
  std::vector<std::string> problems;
  CounterRng rng(kSeed, 9);

  const auto id2 = channels::KrausChannel::identity(2);
  const auto ps = tur::purify(random::density(2, rng));
  const auto general = tur::check_general_tur(random::hermitian(4, rng), ps, id2);
  // Ξ vanishes analytically; allow round-off from Tr ρ.
  if (!(general.degenerate && general.holds && std::abs(general.xi) <= 1e-12) || std::isnan(general.lhs) ||
      std::isnan(general.rhs) || std::isnan(general.margin)) {
    std::ostringstream os;
    os << "general TUR on identity channel: degenerate=" << general.degenerate << " holds=" << general.holds
       << " xi=" << general.xi << " mean-Q=" << general.mean - general.q_baseline;
    problems.push_back(os.str());
  }
  const ComplexMatrix rho = random::density(2, rng);
  const auto sep = correlator::separable_tur_protocol_check(rho, id2, gates::pauli(1), gates::pauli(3));
  if (!(sep.degenerate && sep.holds) || std::isnan(sep.ratio())) problems.push_back("protocol TUR on identity channel");
  const auto bound = correlator::correlator_bound(rho, id2, gates::pauli(1), gates::pauli(3));
  if (!(bound.holds && std::abs(bound.xi_b) <= 1e-12)) problems.push_back("bound on identity channel");

  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  const auto full = channels::amplitude_damping(1.0);
  auto expect_singular = [&](const char* what, const std::function<void()>& f) {
    try {
      f();
      problems.push_back(std::string(what) + ": no exception");
    } catch (const SingularOperator& e) {
      if (!(std::abs(e.eigenvalue()) <= 1e-12)) problems.push_back(std::string(what) + ": wrong eigenvalue");
    } catch (const std::exception& e) {
      problems.push_back(std::string(what) + ": " + e.what());
    }
  };
  expect_singular("survival_activity", [&] { tur::survival_activity(excited, full); });
  expect_singular("qfi", [&] { tur::qfi(full, tur::purify(excited)); });
  expect_singular("correlator_bound",
                  [&] { correlator::correlator_bound(excited, full, gates::pauli(3), gates::pauli(3)); });

  std::string detail = "identity channel degenerate, singular V0 raises SingularOperator (3 paths)";
  if (!problems.empty()) {
    detail.clear();
    for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
  }
  return {problems.empty(), detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "QFI equals survival activity", 10.0, qfi_identity},
      {2, "scaling identity vs finite difference", 30.0,
       [] { return from_suite(verify::run_suite("scaling", suite_options(100))); }},
      {3, "exact-arithmetic soundness (500 trials)", 120.0, exact_soundness},
      {4, "saturation in the SLD eigenbasis", 10.0,
       [] { return from_suite(verify::run_suite("saturation", suite_options(20))); }},
      {5, "protocol equals exact correlator", 30.0,
       [] { return from_suite(verify::run_suite("protocol", suite_options(100))); }},
      {6, "series and protocol estimates of Xi", 30.0,
       [] { return from_suite(verify::run_suite("series", suite_options(50))); }},
      {7, "approximation gap grows with coupling", 60.0, approximation_trend},
      {8, "shot-noise realism and determinism", 120.0, shot_noise},
      {9, "degenerate and singular handling", 10.0, degenerate_handling},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool within = secs <= c.budget_seconds;
    const bool ok = o.passed && within;
    if (!ok) ++failed;
    std::printf("%s  criterion %d: %s [%.2f s of %.0f s%s] %s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs,
                c.budget_seconds, within ? "" : ", over budget", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
