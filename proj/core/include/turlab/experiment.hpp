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

#ifndef TURLAB_EXPERIMENT_HPP
#define TURLAB_EXPERIMENT_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "turlab/channels.hpp"
#include "turlab/correlator.hpp"
#include "turlab/tur.hpp"

// Randomized two-qubit experiment family.
//
// Qubits: S = (q0, q1), E = q2, all starting in |0⟩.
//   preparation  RX(θ1)→RY(θ2) on q0, RX(θ3)→RY(θ4) on q1
//   dilation     RX(θ5)→RY(θ6) on q0, RX(θ7)→RY(θ8) on q1,
//                controlled-RY(πγ) with control q0 and target E,
//                RX(θ9)→RY(θ10) on q0, RX(θ11)→RY(θ12) on q1
// A and B are drawn from the 15 Pauli pairs σ_i ⊗ σ_j other than I ⊗ I.
//
// Random streams: CounterRng(seed, kParameterStream, trial) for the trial
// parameters, kObservableStream for the random Eq. (1)/(2) observables, and
// kProtocolStream / kNestedStream for shot sampling.
namespace turlab::experiment {

using channels::KrausChannel;
using linalg::ComplexMatrix;

inline constexpr std::uint64_t kParameterStream = 0;
inline constexpr std::uint64_t kProtocolStream = 1;
inline constexpr std::uint64_t kNestedStream = 2;
inline constexpr std::uint64_t kObservableStream = 3;

enum class Variant { exact, neumann1, sampled };

const char* to_string(Variant v);
/// Parses "exact", "neumann1"/"approx", or "sampled"; ContractError otherwise.
Variant parse_variant(const std::string& name);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t n_trials = 50;
  std::size_t shots = 1000;
  Interval gamma_range{0.0, 0.75};
  Interval theta_range{0.0, 3.141592653589793};
  std::set<Variant> variants{Variant::exact, Variant::neumann1, Variant::sampled};
  correlator::QApprox q_approx = correlator::QApprox::linear_p0;
  /// Also evaluate Eq. (1) and Eq. (2) with random observables each trial.
  bool check_general = true;
  /// Worker threads; 0 = TURLAB_THREADS or the hardware concurrency.
  std::size_t threads = 0;

  /// ContractError unless gamma ⊆ [0, 1), theta ⊆ [0, 2π], n_trials ≥ 1,
  /// and shots ≥ 1 when the sampled variant is requested.
  void validate() const;
  bool has(Variant v) const { return variants.count(v) != 0; }
};

struct PauliPair {
  int i = 0;
  int j = 0;
  std::string label() const;
};

struct TrialInputs {
  std::size_t id = 0;
  double gamma = 0.0;
  std::array<double, 12> theta{};
  PauliPair a;
  PauliPair b;
};

/// Deterministic function of (config.seed, id).
TrialInputs generate_trial(const ExperimentConfig& config, std::size_t id);

/// ρ_S(0) produced by the preparation circuit.
ComplexMatrix preparation_state(const std::array<double, 12>& theta);
/// Dilation unitary on q0 ⊗ q1 ⊗ E.
ComplexMatrix dilation_unitary(const std::array<double, 12>& theta, double gamma);
KrausChannel trial_channel(const TrialInputs& in);

struct ExactValues {
  double c_real = 0.0;
  double c_imag = 0.0;
  double xi_b = 0.0;
  double q_ab = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool bound_holds = true;
  double q_ab_imag = 0.0;
  double lower_imag = 0.0;
  double upper_imag = 0.0;
  bool imag_bound_holds = true;
  tur::TurReport separable;                // protocol observable, Re part
  std::optional<tur::TurReport> general;   // Eq. (1), random Hermitian G
  std::optional<tur::TurReport> product;   // Eq. (2), random separable G

  bool violated() const;
};

struct ApproxValues {
  double xi_b = 0.0;
  double q_ab = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool bound_holds = true;
  tur::TurReport separable;
};

struct SampledValues {
  std::uint64_t shots = 0;
  double c_real = 0.0;
  double p0 = 0.0;
  double first_term = 0.0;
  double nested_term = 0.0;
  double xi_b = 0.0;
  double q_ab = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool bound_holds = true;
  tur::TurReport separable;
  correlator::ShotResult protocol_counts;
  correlator::ShotResult nested_counts;
};

struct TrialRecord {
  TrialInputs inputs;
  double postselect_p0 = 0.0;
  std::optional<ExactValues> exact;
  std::optional<ApproxValues> approx;
  std::optional<SampledValues> sampled;
  /// Set when the trial hit a DegenerateChannel / SingularOperator.
  std::optional<std::string> failure;

  bool violated_exact() const { return exact && exact->violated(); }
  /// The separable TUR evaluated from the shot estimates fails.
  bool violated_sampled() const { return sampled && !sampled->separable.holds; }
};

/// Evaluates one trial for every requested variant.
TrialRecord evaluate_trial(const ExperimentConfig& config, const TrialInputs& inputs);

struct VariantCounts {
  std::size_t evaluated = 0;
  std::size_t tur_violations = 0;
  std::size_t bound_violations = 0;
};

struct Stats {
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

/// Median |upper_approx − upper_exact| for trials with gamma in [lo, hi).
struct GapBucket {
  double lo = 0.0;
  double hi = 0.0;
  Stats gap;
};

struct RunSummary {
  std::size_t n_trials = 0;
  std::size_t failed_trials = 0;
  std::size_t degenerate_trials = 0;
  VariantCounts exact;
  std::size_t exact_imag_violations = 0;
  std::size_t exact_general_violations = 0;
  std::size_t exact_product_violations = 0;
  VariantCounts approx;
  VariantCounts sampled;
  Stats tur_margin_exact;    // lhs − rhs over non-degenerate trials
  Stats bound_margin_exact;  // min(value − lower, upper − value)
  Stats tur_ratio_sampled;
  std::vector<GapBucket> approx_gap;
  double runtime_seconds = 0.0;
};

Stats compute_stats(std::vector<double> values);

/// Aggregates records (sorted by trial id). ContractError on empty input.
RunSummary summarize(const std::vector<TrialRecord>& records,
                     const std::vector<double>& gamma_edges = {0.0, 0.2, 0.4, 0.6, 0.8});

struct ExperimentResult {
  std::vector<TrialRecord> records;
  RunSummary summary;
};

/// Runs every trial on a worker pool. Output is independent of thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Resolves config.threads: explicit value, else TURLAB_THREADS, else hardware.
std::size_t worker_count(const ExperimentConfig& config);

}  // namespace turlab::experiment

#endif  // TURLAB_EXPERIMENT_HPP
