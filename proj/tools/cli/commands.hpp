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

#ifndef TURLAB_TOOLS_CLI_COMMANDS_HPP
#define TURLAB_TOOLS_CLI_COMMANDS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "turlab/experiment.hpp"

namespace turlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 2;
inline constexpr int kExitInput = 3;
inline constexpr int kExitDegenerate = 4;

struct VerifyOptions {
  std::vector<std::string> suites;  // empty = all
  std::size_t trials = 100;
  std::uint64_t seed = 2026;
  bool inject_dv0_sign_fault = false;
  bool json = false;                          // JSON on stdout instead of text
  std::optional<std::filesystem::path> report;  // JSON report file
};

struct ExperimentOptions {
  experiment::ExperimentConfig config;
  std::filesystem::path out_dir;
};

struct BoundOptions {
  std::filesystem::path spec;
  std::optional<std::filesystem::path> rho;
  std::optional<std::string> a_label;
  std::optional<std::string> b_label;
};

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err);
int cmd_bound(const BoundOptions& opts, std::ostream& out, std::ostream& err);

/// Parses argv, dispatches, and maps exceptions onto the exit-code contract.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace turlab::cli

#endif  // TURLAB_TOOLS_CLI_COMMANDS_HPP
