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

#include "turlab/gates.hpp"

#include <cmath>

#include "turlab/errors.hpp"

namespace turlab::gates {

using linalg::Complex;

ComplexMatrix pauli(int index) {
  ComplexMatrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (index) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -i, i, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: throw ContractError("pauli index must be in 0..3");
  }
  return m;
}

ComplexMatrix pauli_string(const std::string& label) {
  if (label.empty()) throw ContractError("empty Pauli label");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (char c : label) {
    int idx = -1;
    switch (c) {
      case 'I': case 'i': case '0': idx = 0; break;
      case 'X': case 'x': case '1': idx = 1; break;
      case 'Y': case 'y': case '2': idx = 2; break;
      case 'Z': case 'z': case '3': idx = 3; break;
      default: throw ContractError(std::string("bad Pauli character '") + c + "'");
    }
    out = linalg::tensor_product(out, pauli(idx));
  }
  return out;
}

std::string pauli_label(int i, int j) {
  static constexpr char kNames[] = {'I', 'X', 'Y', 'Z'};
  if (i < 0 || i > 3 || j < 0 || j > 3) throw ContractError("pauli index must be in 0..3");
  return {kNames[i], kNames[j]};
}

ComplexMatrix hadamard() {
  ComplexMatrix h(2, 2);
  h << 1, 1, 1, -1;
  return h / std::sqrt(2.0);
}

ComplexMatrix s_dagger() {
  ComplexMatrix s(2, 2);
  s << 1, 0, 0, Complex(0.0, -1.0);
  return s;
}

ComplexMatrix rx(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  ComplexMatrix m(2, 2);
  m << c, Complex(0, -s), Complex(0, -s), c;
  return m;
}

ComplexMatrix ry(double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  ComplexMatrix m(2, 2);
  m << c, -s, s, c;
  return m;
}

ComplexMatrix controlled(const ComplexMatrix& u) {
  const auto n = u.rows();
  ComplexMatrix out = ComplexMatrix::Zero(2 * n, 2 * n);
  out.topLeftCorner(n, n).setIdentity();
  out.bottomRightCorner(n, n) = u;
  return out;
}

ComplexMatrix on_qubit(const ComplexMatrix& g, std::size_t qubit, std::size_t n_qubits) {
  if (qubit >= n_qubits) throw ContractError("qubit index out of range");
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    out = linalg::tensor_product(out, q == qubit ? g : linalg::identity(2));
  }
  return out;
}

ComplexMatrix controlled_on(const ComplexMatrix& g, std::size_t control, std::size_t target,
                            std::size_t n_qubits) {
  if (control == target || control >= n_qubits || target >= n_qubits) {
    throw ContractError("controlled_on: bad control/target");
  }
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2), p1 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  ComplexMatrix idle = ComplexMatrix::Identity(1, 1), active = ComplexMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < n_qubits; ++q) {
    const ComplexMatrix id2 = linalg::identity(2);
    idle = linalg::tensor_product(idle, q == control ? p0 : id2);
    active = linalg::tensor_product(active, q == control ? p1 : (q == target ? g : id2));
  }
  return idle + active;
}

}  // namespace turlab::gates
