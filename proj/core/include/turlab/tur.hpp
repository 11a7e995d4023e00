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

#ifndef TURLAB_TUR_HPP
#define TURLAB_TUR_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "turlab/channels.hpp"
#include "turlab/linalg.hpp"

// Thermodynamic uncertainty relations for TPCP maps.
//
// All joint states live on R ⊗ S ⊗ E: R purifies the initial state of S, E is
// the dilation environment (dimension = number of Kraus operators, outcome |m⟩
// ↔ V_m). The no-cost baseline of an observable G is
//
//   Q_G = Re ⟨Ψ̃(0)| G |Ψ(T)⟩,  |Ψ̃(0)⟩ = (I_R ⊗ (V₀⁻¹)† ⊗ I_E) |Ψ_RS(0)⟩ ⊗ |φ₀⟩,
//
// and the survival activity is Ξ = Tr[ρ (V₀†V₀)⁻¹] − 1. Every report here
// checks Var[G] / (⟨G⟩ − Q_G)² ≥ 1/Ξ or one of its corollaries.
namespace turlab::tur {

using channels::KrausChannel;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

inline constexpr double kDensityTol = 1e-10;
inline constexpr double kDegenerateTol = 1e-10;
inline constexpr double kHoldsTol = 1e-9;

/// Canonical purification Σ_i √p_i |ψ_i⟩_R ⊗ |ψ_i⟩_S in the eigenbasis of ρ
/// (eigenvalues descending, zero weights kept so dim_R = dim_S).
struct PurifiedState {
  std::vector<double> probabilities;
  ComplexMatrix basis;   // column i is |ψ_i⟩
  ComplexVector joint;   // on R ⊗ S

  std::size_t dim() const { return static_cast<std::size_t>(basis.rows()); }
  ComplexMatrix density() const;
};

/// One evaluation of the general TUR.
struct TurReport {
  double mean = 0.0;
  double variance = 0.0;
  double q_baseline = 0.0;
  double xi = 0.0;
  double lhs = 0.0;      // Var / (mean − Q)²; +inf when degenerate
  double rhs = 0.0;      // 1 / Ξ; +inf when Ξ = 0
  bool holds = true;
  double margin = 0.0;   // lhs − rhs
  bool degenerate = false;

  /// Var·Ξ / (mean − Q)²: ≥ 1 whenever the relation holds, = 1 at saturation.
  double ratio() const;
};

/// Builds a report from its four inputs, applying the degenerate and holds rules.
TurReport make_report(double mean, double variance, double q_baseline, double xi);

/// Throws ContractError unless rho is Hermitian, unit-trace and PSD within kDensityTol.
void require_density(const ComplexMatrix& rho);

PurifiedState purify(const ComplexMatrix& rho);

/// (I_R ⊗ U)(|Ψ_RS⟩ ⊗ |φ₀⟩) for a joint vector on R ⊗ S with R of dimension dim_r.
ComplexVector evolve_joint(const ComplexVector& joint_rs, std::size_t dim_r, const KrausChannel& ch);
/// (I_R ⊗ (V₀⁻¹)† ⊗ I_E) |Ψ_RS⟩ ⊗ |φ₀⟩ (unnormalized).
ComplexVector tilde_joint(const ComplexVector& joint_rs, std::size_t dim_r, const KrausChannel& ch);

ComplexVector final_joint_state(const PurifiedState& ps, const KrausChannel& ch);

/// Ξ = Tr[ρ (V₀†V₀)⁻¹] − 1. SingularOperator when V₀†V₀ has an eigenvalue ≤ 1e-12.
double survival_activity(const ComplexMatrix& rho, const KrausChannel& ch);

/// Moments Tr[ρ (V₀†V₀)ⁿ] for n = 0..order by direct matrix powers.
std::vector<double> survival_moments(const ComplexMatrix& rho, const KrausChannel& ch, std::size_t order);

/// Truncated binomial-series estimates of Ξ for N = 1..order:
/// Σ_{n=0}^{N} (−1)ⁿ C(N+1, n+1) Tr[ρ (V₀†V₀)ⁿ] − 1.
std::vector<double> survival_activity_series(const ComplexMatrix& rho, const KrausChannel& ch,
                                             std::size_t order);

/// Same estimates from externally supplied moments (moments[0] = Tr ρ).
std::vector<double> series_from_moments(const std::vector<double>& moments);

/// Simulates the postselection protocol on S ⊗ E: alternately apply U (even
/// steps) or U† (odd steps) to ρ⁽ⁿ⁾ ⊗ |φ₀⟩⟨φ₀| and project E back onto |φ₀⟩.
/// Returns the success probabilities Tr ρ⁽ⁿ⁾ = Tr[ρ (V₀†V₀)ⁿ], n = 0..order.
std::vector<double> survival_activity_protocol_sim(const ComplexMatrix& rho, const KrausChannel& ch,
                                                   std::size_t order);

/// Q_G for G on R ⊗ S ⊗ E.
double q_baseline_general(const ComplexMatrix& g, const PurifiedState& ps, const KrausChannel& ch);
double q_baseline_general(const ComplexMatrix& g, const ComplexVector& joint_rs, std::size_t dim_r,
                          const KrausChannel& ch);

/// p₀ Tr[ρ_RS^{V₀} H], H = ½{G₀, I_R ⊗ (V₀V₀†)⁻¹}, for the E = |φ₀⟩ block G₀ of a
/// separable observable. DegenerateChannel when p₀ ≤ 1e-12.
double q_baseline_separable(const ComplexMatrix& g0, const PurifiedState& ps, const KrausChannel& ch);

/// Separable baseline for an arbitrary (possibly mixed) state on R ⊗ S.
double separable_baseline(const ComplexMatrix& g0, const ComplexMatrix& rho_rs, std::size_t dim_r,
                          const KrausChannel& ch);

/// Same, with the (V₀†V₀)⁻¹ operator in H instead of (V₀V₀†)⁻¹. Only for
/// comparison; this form does not agree with q_baseline_general in general.
double separable_baseline_gram_variant(const ComplexMatrix& g0, const ComplexMatrix& rho_rs,
                                       std::size_t dim_r, const KrausChannel& ch);

/// No-jump probability p₀ = Tr[ρ V₀†V₀].
double no_jump_probability(const ComplexMatrix& rho, const KrausChannel& ch);

/// QFI at θ = 0 from J = 4[⟨H₁⟩ − ⟨H₂⟩²] with H₁ = Σ dV_m†dV_m, H₂ = iΣ dV_m†V_m.
double qfi(const KrausChannel& ch, const PurifiedState& ps);

/// Symmetric logarithmic derivative of the pure final state, L = 2 ∂_θ ρ_RSE(T),
/// i.e. 2|Ψ⟩⟨Ψ| − (|Ψ̃⟩⟨Ψ| + |Ψ⟩⟨Ψ̃|).
struct SldOperator {
  ComplexMatrix matrix;
};
SldOperator sld(const PurifiedState& ps, const KrausChannel& ch);

TurReport check_general_tur(const ComplexMatrix& g, const PurifiedState& ps, const KrausChannel& ch);

/// Eq. for an environment observable G = I_R ⊗ I_S ⊗ G_E whose eigenvector
/// |φ₀⟩ has eigenvalue g0.
struct EvolutionBoundReport {
  TurReport tur;                 // with Q = g0
  double g0 = 0.0;
  double gmax = 0.0;
  double deviation = 0.0;        // |⟨G⟩ − g0|
  double evolution_bound = 0.0;  // √(g_max² Ξ)
  bool evolution_holds = true;
  /// Var/⟨G⟩² ≥ 1/Ξ, evaluated only when g0 = 0.
  std::optional<TurReport> zero_baseline;
};

EvolutionBoundReport check_observable_evolution_bound(const KrausChannel& ch, const ComplexMatrix& rho,
                                                      const ComplexMatrix& g_env, double g0, double gmax);

/// R(0,T) = Σ_ij √(p_i p_j) Tr[G_R |ψ_i⟩⟨ψ_j|] Tr[G_S E(|ψ_i⟩⟨ψ_j|)] with the
/// bounds Q_G ± √(g_max² Ξ) for G = G_R ⊗ G_S ⊗ I_E.
struct CorrelationBound {
  double lower = 0.0;
  double value = 0.0;
  double upper = 0.0;
  double q_baseline = 0.0;
  double xi = 0.0;
  double gmax = 0.0;
  bool holds() const { return lower - kHoldsTol <= value && value <= upper + kHoldsTol; }
};

CorrelationBound classical_correlation_bound(const KrausChannel& ch, const ComplexMatrix& rho,
                                             const ComplexMatrix& g_r, const ComplexMatrix& g_s);

/// Largest absolute eigenvalue of a Hermitian matrix.
double spectral_radius(const ComplexMatrix& h);

}  // namespace turlab::tur

#endif  // TURLAB_TUR_HPP
