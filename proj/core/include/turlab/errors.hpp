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

#ifndef TURLAB_ERRORS_HPP
#define TURLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace turlab {

/// Base of every exception thrown by turlab.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated (non-Hermitian input, bad index, ...).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Matrix dimensions disagree with a SubsystemLayout or with each other.
class LayoutError : public Error {
 public:
  using Error::Error;
};

/// An operator that must be inverted has an eigenvalue at or below the
/// singularity threshold. Carries the offending eigenvalue.
class SingularOperator : public Error {
 public:
  SingularOperator(const std::string& what, double eigenvalue)
      : Error(what + " (eigenvalue " + std::to_string(eigenvalue) + ")"), eigenvalue_(eigenvalue) {}

  double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// The perturbation strength makes the no-jump square root complex.
class AdmissibilityError : public Error {
 public:
  using Error::Error;
};

/// A postselection probability vanished.
class DegenerateChannel : public Error {
 public:
  using Error::Error;
};

}  // namespace turlab

#endif  // TURLAB_ERRORS_HPP
