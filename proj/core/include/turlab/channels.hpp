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

#ifndef TURLAB_CHANNELS_HPP
#define TURLAB_CHANNELS_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "turlab/linalg.hpp"
#include "turlab/rng.hpp"

namespace turlab::channels {

using linalg::ComplexMatrix;
using linalg::SubsystemLayout;

inline constexpr double kCompletenessTol = 1e-9;
inline constexpr double kAdmissibilityMargin = 1e-12;

/// Unitary U on S ⊗ E whose blocks are the Kraus operators:
/// V_m = (I_S ⊗ ⟨m|) U (I_S ⊗ |env_initial⟩).
struct Dilation {
  ComplexMatrix unitary;
  std::size_t env_dim = 0;
  std::size_t env_initial = 0;
};

/// Ordered Kraus operators {V_m} of a TPCP map on S. Operator m belongs to
/// environment outcome |m⟩; `no_jump_index` designates V₀. Zero operators are
/// kept so outcome indices stay aligned with circuits.
class KrausChannel {
 public:
  /// Throws ContractError when operators are empty, non-square, of mixed
  /// dimension, or violate Σ V_m†V_m = I by more than kCompletenessTol.
  KrausChannel(std::vector<ComplexMatrix> operators, std::size_t no_jump_index = 0,
               std::optional<Dilation> dilation = std::nullopt);

  static KrausChannel identity(std::size_t dim);

  const std::vector<ComplexMatrix>& operators() const { return operators_; }
  const ComplexMatrix& op(std::size_t m) const { return operators_.at(m); }
  std::size_t size() const { return operators_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(operators_.front().rows()); }
  std::size_t no_jump_index() const { return no_jump_index_; }
  const ComplexMatrix& no_jump() const { return operators_[no_jump_index_]; }

  /// V₀†V₀.
  ComplexMatrix no_jump_gram() const;
  /// Σ_{m ≠ no_jump} V_m†V_m.
  ComplexMatrix jump_gram() const;

  const std::optional<Dilation>& dilation() const { return dilation_; }
  /// The stored dilation, or one synthesized by orthonormal completion of the
  /// block column {V_m} (environment dimension = size(), initial state |V₀'s index⟩).
  Dilation dilation_or_synthesize() const;

 private:
  std::vector<ComplexMatrix> operators_;
  std::size_t no_jump_index_;
  std::optional<Dilation> dilation_;
};

/// One Kraus operator per computational-basis environment state; V₀ is the
/// one for the environment returning to |env_initial⟩. `layout` must be
/// [dim_S, dim_E].
KrausChannel kraus_from_unitary(const ComplexMatrix& u, const SubsystemLayout& layout,
                                std::size_t env_initial = 0);

/// Completes {V_m} (Σ V_m†V_m = I) to a unitary on S ⊗ E, E of dimension M.
Dilation synthesize_dilation(const std::vector<ComplexMatrix>& operators, std::size_t env_initial);

/// ρ ↦ Σ V_m ρ V_m†.
ComplexMatrix apply(const KrausChannel& ch, const ComplexMatrix& rho);

/// A ↦ Σ V_m† A V_m.
ComplexMatrix heisenberg(const KrausChannel& ch, const ComplexMatrix& a);

/// Kraus family V_m(θ) = e^{θ/2}V_m (m jump), V₀(θ) = U_V sqrt(I − e^θ Σ_jump V_m†V_m).
struct PerturbedChannel {
  double theta = 0.0;
  KrausChannel channel;
};

/// Throws AdmissibilityError if e^θ·λ_max(Σ_jump V†V) > 1 − kAdmissibilityMargin
/// and SingularOperator if V₀ is singular.
PerturbedChannel perturbed_kraus(const KrausChannel& ch, double theta);

/// dV₀(θ)/dθ at θ = 0: ½(V₀ − (V₀⁻¹)†).
ComplexMatrix dv0_dtheta(const KrausChannel& ch);

/// Amplitude damping on a qubit with its explicit dilation: controlled-RY(2 asin√γ)
/// (S control, E target) followed by CNOT (E control, S target).
KrausChannel amplitude_damping(double gamma);

/// Random channel from a Haar dilation on S ⊗ E, redrawn until
/// λ_min(V₀†V₀) ≥ min_gram so V₀ is comfortably invertible.
KrausChannel random_channel(std::size_t dim_s, std::size_t dim_e, CounterRng& rng,
                            double min_gram = 0.05);

}  // namespace turlab::channels

#endif  // TURLAB_CHANNELS_HPP
