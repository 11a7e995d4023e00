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

#ifndef TURLAB_VERIFY_HPP
#define TURLAB_VERIFY_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

// Randomized property suites shared by `turlab verify` and the tests.
namespace turlab::verify {

struct SuiteOptions {
  std::size_t trials = 100;
  std::uint64_t seed = 2026;
  /// Test-only: flips the sign of dV₀/dθ inside the scaling suite.
  bool inject_dv0_sign_fault = false;
};

struct SuiteResult {
  std::string name;
  std::string property;
  bool passed = true;
  std::size_t checks = 0;
  std::size_t failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// qfi, scaling, protocol, saturation, series.
const std::vector<std::string>& suite_names();

/// ContractError for an unknown name.
SuiteResult run_suite(const std::string& name, const SuiteOptions& options);

std::vector<SuiteResult> run_all(const SuiteOptions& options);

}  // namespace turlab::verify

#endif  // TURLAB_VERIFY_HPP
