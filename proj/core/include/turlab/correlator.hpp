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

#ifndef TURLAB_CORRELATOR_HPP
#define TURLAB_CORRELATOR_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "turlab/channels.hpp"
#include "turlab/linalg.hpp"
#include "turlab/tur.hpp"

// Ancilla protocol for C(T) = Tr[ρ A(T) B] and its survival-activity bound.
//
// Register order is S' ⊗ S ⊗ E. The protocol prepares S' in |+⟩, applies
// B controlled on S', the dilation U on S ⊗ E, A controlled on S', and reads
// C(T) = ⟨σ_x⟩ + i⟨σ_y⟩ on S'. The measured observable is
// G = U_A (σ ⊗ I_S) U_A with U_A = |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ A, evaluated on the
// S' ⊗ S state σ_B = U_B (|+⟩⟨+| ⊗ ρ) U_B before the channel, so S' plays the
// role of the purifying reference in the separable TUR.
namespace turlab::correlator {

using channels::KrausChannel;
using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::SubsystemLayout;

enum class Stage { prepared, after_ub, after_channel, after_ua, premeasure };
enum class MeasureBasis { x, y };
enum class CorrelatorPart { real, imag };
enum class BoundVariant { exact, neumann1 };

/// Second-order term of the approximate Q: multiplied by p₀ (converges to the
/// exact Q as the coupling vanishes) or by p₀² (kept for comparison).
enum class QApprox { linear_p0, squared_p0 };

const char* to_string(Stage stage);
const char* to_string(BoundVariant variant);

/// Density matrix of a protocol register plus the factors read out in the
/// computational basis once the state reaches Stage::premeasure.
struct ProtocolState {
  SubsystemLayout layout;
  ComplexMatrix rho;
  Stage stage = Stage::prepared;
  std::vector<std::size_t> measured;
};

/// Runs the correlator protocol up to `until`. At premeasure the basis change
/// (H for x, H·S† for y) has been applied to S' and S', E are measured.
ProtocolState prepare_correlator_state(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                       const ComplexMatrix& b, MeasureBasis basis,
                                       Stage until = Stage::premeasure);

/// Tr[ρ A(T) B] with A(T) the Heisenberg-evolved A.
Complex exact_correlator(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                         const ComplexMatrix& b);

/// ⟨σ_x⟩ + i⟨σ_y⟩ on S' from two full protocol simulations.
Complex protocol_correlator(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                            const ComplexMatrix& b);

/// σ_B on S' ⊗ S.
ComplexMatrix branch_state(const ComplexMatrix& rho, const ComplexMatrix& b);
/// ρ_S^B = Tr_S'[σ_B] = ½(ρ + BρB).
ComplexMatrix reduced_branch_state(const ComplexMatrix& rho, const ComplexMatrix& b);
/// U_A (σ_x ⊗ I) U_A for the real part, σ_y for the imaginary part.
ComplexMatrix protocol_observable(const ComplexMatrix& a, CorrelatorPart part);

struct BoundReport {
  double correlator_real = 0.0;
  double correlator_imag = 0.0;
  CorrelatorPart part = CorrelatorPart::real;
  double q_ab = 0.0;
  double xi_b = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  bool holds = true;
  BoundVariant approx_variant = BoundVariant::exact;

  /// The bounded component: Re C(T) or Im C(T).
  double value() const { return part == CorrelatorPart::real ? correlator_real : correlator_imag; }
};

BoundReport correlator_bound(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                             const ComplexMatrix& b, BoundVariant variant = BoundVariant::exact,
                             CorrelatorPart part = CorrelatorPart::real, QApprox q_approx = QApprox::linear_p0);

/// Inputs of the neumann1 bound. first_term = Tr[ρ_B^{V₀} G],
/// nested_term = Re Tr[ρ_B^{V₀} G V₀V₀†] with ρ_B^{V₀} the normalized no-jump state.
struct ApproxQuantities {
  double p0 = 0.0;
  double xi_approx = 0.0;
  double q_approx = 0.0;
  double first_term = 0.0;
  double nested_term = 0.0;
};

ApproxQuantities approx_bound_quantities(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                         const ComplexMatrix& b, CorrelatorPart part = CorrelatorPart::real,
                                         QApprox q_approx = QApprox::linear_p0);

/// q from p₀ and the two circuit expectations.
double approximate_q(double p0, double first_term, double nested_term, QApprox q_approx);

/// Nested circuit on S' ⊗ S ⊗ E₁ ⊗ E₂ ⊗ S'₁: the correlator preparation,
/// U on S ⊗ E₁, G controlled on S'₁, U† on S ⊗ E₂, H on S'₁. E₁, E₂ and S'₁
/// are measured; postselection keeps E₁ = E₂ = |φ₀⟩.
ProtocolState prepare_nested_state(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                   const ComplexMatrix& b, CorrelatorPart part = CorrelatorPart::real);

struct NestedResult {
  double value = 0.0;                    // Re Tr[ρ_B^{V₀} G V₀V₀†]
  double p_e1 = 0.0;                     // Pr[E₁ = φ₀]
  double p_e2_given_e1 = 0.0;            // Pr[E₂ = φ₀ | E₁ = φ₀]
  double p_joint = 0.0;                  // Pr[E₁ = E₂ = φ₀] from the unprojected circuit
  double conditional_expectation = 0.0;  // ⟨σ_x on S'₁⟩ given both postselections
};

/// Sequential-projection simulation of the nested circuit. DegenerateChannel
/// when either postselection probability is ≤ 1e-12.
NestedResult nested_expectation(const ComplexMatrix& rho, const KrausChannel& ch, const ComplexMatrix& a,
                                const ComplexMatrix& b, CorrelatorPart part = CorrelatorPart::real);

/// Separable TUR for the protocol observable: Var[G] = 1 − ⟨G⟩², Q = Q_{A,B}, Ξ = Ξ_B.
tur::TurReport separable_tur_protocol_check(const ComplexMatrix& rho, const KrausChannel& ch,
                                            const ComplexMatrix& a, const ComplexMatrix& b,
                                            CorrelatorPart part = CorrelatorPart::real);

/// Outcome counts keyed by the digits of the measured factors, in the order of
/// ProtocolState::measured (e.g. "01" = S' in 0, E in 1).
struct ShotResult {
  std::map<std::string, std::uint64_t> counts;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  std::uint64_t count(const std::string& key) const;
};

/// Per-shot inverse-CDF draws from the computational-basis distribution of the
/// measured factors. The stream is CounterRng(seed, stream, trial).
ShotResult sample_shots(const ProtocolState& state, std::uint64_t shots, std::uint64_t seed,
                        std::uint64_t trial = 0, std::uint64_t stream = 1);

/// Exact outcome distribution over the measured factors (same keys as ShotResult).
std::map<std::string, double> outcome_probabilities(const ProtocolState& state);

}  // namespace turlab::correlator

#endif  // TURLAB_CORRELATOR_HPP
