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

#ifndef TURLAB_GATES_HPP
#define TURLAB_GATES_HPP

#include <cstddef>
#include <string>

#include "turlab/linalg.hpp"

// Qubit gates. Multi-qubit registers are big-endian: qubit 0 is the
// leftmost Kronecker factor.
namespace turlab::gates {

using linalg::ComplexMatrix;

/// σ_0 = I, σ_1 = X, σ_2 = Y, σ_3 = Z.
ComplexMatrix pauli(int index);

/// σ_i ⊗ σ_j ⊗ ... from a label such as "XZ" or "IY" (characters I, X, Y, Z).
ComplexMatrix pauli_string(const std::string& label);

/// Label for σ_i ⊗ σ_j, e.g. (1, 3) -> "XZ".
std::string pauli_label(int i, int j);

ComplexMatrix hadamard();
ComplexMatrix s_dagger();
ComplexMatrix rx(double theta);
ComplexMatrix ry(double theta);

/// |0⟩⟨0| ⊗ I + |1⟩⟨1| ⊗ u with the control as the leftmost qubit.
ComplexMatrix controlled(const ComplexMatrix& u);

/// Single-qubit gate `g` on `qubit` of an n-qubit register.
ComplexMatrix on_qubit(const ComplexMatrix& g, std::size_t qubit, std::size_t n_qubits);

/// Controlled single-qubit gate with arbitrary control/target positions.
ComplexMatrix controlled_on(const ComplexMatrix& g, std::size_t control, std::size_t target,
                            std::size_t n_qubits);

}  // namespace turlab::gates

#endif  // TURLAB_GATES_HPP
