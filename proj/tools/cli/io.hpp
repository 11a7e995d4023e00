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

#ifndef TURLAB_TOOLS_CLI_IO_HPP
#define TURLAB_TOOLS_CLI_IO_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "turlab/channels.hpp"
#include "turlab/correlator.hpp"
#include "turlab/errors.hpp"
#include "turlab/experiment.hpp"
#include "turlab/tur.hpp"

namespace turlab::cli {

using Json = nlohmann::ordered_json;
using linalg::ComplexMatrix;

/// Malformed user input. The message starts with the JSON path or flag name.
class InputError : public Error {
 public:
  using Error::Error;
};

Json load_json_file(const std::filesystem::path& path);

/// Rows of [re, im] pairs (a bare number is read as a real entry).
ComplexMatrix parse_matrix(const Json& node, const std::string& path);
Json matrix_to_json(const ComplexMatrix& m);

/// Single-instance problem for `turlab bound`.
struct BoundSpec {
  std::optional<channels::KrausChannel> channel;
  std::optional<ComplexMatrix> rho;
  std::optional<ComplexMatrix> a;
  std::optional<ComplexMatrix> b;
};

/// {"channel": {"unitary": M, "layout": [dS, dE], "env_initial": 0} |
///             {"kraus": [M, ...], "no_jump_index": 0},
///  "rho": M, "A": M, "B": M}; every key optional.
BoundSpec parse_bound_spec(const Json& root);

/// %.17g, or "inf" / "-inf" / "nan".
std::string format_number(double v);
/// Finite doubles as numbers, everything else as null.
Json number_or_null(double v);

Json to_json(const tur::TurReport& r);
Json to_json(const correlator::BoundReport& r);
Json to_json(const experiment::Stats& s);
Json to_json(const experiment::ExperimentConfig& c);
Json to_json(const experiment::RunSummary& s, bool include_runtime);

/// Column names of trials.csv, in order.
const std::vector<std::string>& trial_columns();
/// One row per record; uncomputed cells are empty.
void write_trials_csv(const std::vector<experiment::TrialRecord>& records, std::ostream& out);
/// The same cells as objects keyed by column name (uncomputed / non-finite → null),
/// plus the failure message and shot counts.
Json trials_to_json(const std::vector<experiment::TrialRecord>& records);

std::string sha256_hex(const std::string& bytes);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& bytes);

/// UTC ISO-8601 timestamp, second resolution.
std::string utc_timestamp();

}  // namespace turlab::cli

#endif  // TURLAB_TOOLS_CLI_IO_HPP
