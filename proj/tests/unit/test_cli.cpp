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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <set>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/io.hpp"

namespace {

namespace fs = std::filesystem;
using namespace turlab;
using cli::Json;

struct Invocation {
  int code = 0;
  std::string out;
  std::string err;
};

Invocation invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "turlab");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("turlab-test-" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string spec(const std::string& name) { return std::string(TURLAB_SPEC_DIR) + "/" + name; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, sep)) cells.push_back(cell);
  if (!line.empty() && line.back() == sep) cells.emplace_back();
  return cells;
}

std::vector<std::string> csv_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = text.find("\r\n", pos);
    EXPECT_NE(end, std::string::npos) << "rows must end in CRLF";
    if (end == std::string::npos) break;
    lines.push_back(text.substr(pos, end - pos));
    pos = end + 2;
  }
  return lines;
}

TEST(Parse, MatrixErrorsNameTheRow) {
  const Json good = Json::parse(R"([[[1, 0], 0], [0, [1, 0]]])");
  const auto m = cli::parse_matrix(good, "$.rho");
  EXPECT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 0), linalg::Complex(1.0, 0.0));

  try {
    cli::parse_matrix(Json::parse(R"([[[1, 0], [0, 0]], [[0, 0]]])"), "$.channel.kraus[0]");
    FAIL() << "expected InputError";
  } catch (const cli::InputError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("$.channel.kraus[0]"), std::string::npos) << what;
    EXPECT_NE(what.find("row 1"), std::string::npos) << what;
  }
  EXPECT_THROW(cli::parse_matrix(Json::parse(R"("nope")"), "$.A"), cli::InputError);
  EXPECT_THROW(cli::parse_matrix(Json::parse(R"([[[1, 2, 3]]])"), "$.A"), cli::InputError);
}

TEST(Parse, BoundSpecRoundTripsMatrices) {
  const auto root = cli::load_json_file(spec("amplitude_damping.json"));
  const auto s = cli::parse_bound_spec(root);
  ASSERT_TRUE(s.channel && s.rho && s.a && s.b);
  EXPECT_EQ(s.channel->size(), 2u);
  const auto back = cli::parse_matrix(cli::matrix_to_json(*s.rho), "$");
  EXPECT_EQ(linalg::max_abs(back - *s.rho), 0.0);
  EXPECT_THROW(cli::load_json_file(spec("missing.json")), cli::InputError);
}

TEST(Format, NumbersRoundTripAndSpecials) {
  for (double v : {0.0, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    EXPECT_EQ(std::stod(cli::format_number(v)), v);
  }
  EXPECT_EQ(cli::format_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(cli::format_number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(cli::format_number(std::numeric_limits<double>::quiet_NaN()), "nan");
  EXPECT_TRUE(cli::number_or_null(std::numeric_limits<double>::infinity()).is_null());
  EXPECT_EQ(cli::number_or_null(0.5).get<double>(), 0.5);
}

TEST(Format, Sha256KnownVector) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Run, VerifyPassesAndFaultInjectionFails) {
  const auto ok = invoke({"verify", "--trials", "20"});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  EXPECT_NE(ok.out.find("PASS"), std::string::npos);

  const auto bad = invoke({"verify", "--trials", "20", "--suite", "scaling", "--inject-fault", "dv0-sign"});
  EXPECT_EQ(bad.code, cli::kExitInvariant);
  EXPECT_NE(bad.err.find("scaling"), std::string::npos) << bad.err;

  EXPECT_EQ(invoke({"verify", "--suite", "nosuch"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"verify", "--trials", "0"}).code, cli::kExitInput);
}

TEST(Run, VerifyJsonReport) {
  const auto dir = scratch_dir("verify");
  const auto r = invoke({"verify", "--trials", "5", "--suite", "qfi,protocol", "--json", "--report",
                         (dir / "report.json").string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_EQ(j["suites"].size(), 2u);
  EXPECT_EQ(Json::parse(cli::read_file(dir / "report.json")), j);
}

TEST(Run, BoundExitCodes) {
  const auto ok = invoke({"bound", spec("amplitude_damping.json")});
  EXPECT_EQ(ok.code, cli::kExitOk) << ok.err;
  const Json j = Json::parse(ok.out);
  EXPECT_NEAR(j["xi"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(j["bound"]["holds"].get<bool>());

  const auto ident = invoke({"bound", spec("identity.json")});
  EXPECT_EQ(ident.code, cli::kExitOk) << ident.err;
  EXPECT_TRUE(Json::parse(ident.out)["tur"]["degenerate"].get<bool>());

  const auto dir = scratch_dir("bound");
  cli::write_file(dir / "bad_row.json",
                  R"({"channel": {"kraus": [[[[1,0],[0,0]], [[0,0]]]], "no_jump_index": 0}, "rho": [[1]]})");
  const auto bad = invoke({"bound", (dir / "bad_row.json").string()});
  EXPECT_EQ(bad.code, cli::kExitInput);
  EXPECT_NE(bad.err.find("row 1"), std::string::npos) << bad.err;

  // Full damping: V₀ = diag(1, 0) is singular.
  cli::write_file(dir / "singular.json", R"({
    "channel": {"kraus": [[[[1,0],[0,0]],[[0,0],[0,0]]], [[[0,0],[1,0]],[[0,0],[0,0]]]], "no_jump_index": 0},
    "rho": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]], "A": [[1,0],[0,-1]], "B": [[1,0],[0,-1]]})");
  const auto singular = invoke({"bound", (dir / "singular.json").string()});
  EXPECT_EQ(singular.code, cli::kExitDegenerate) << singular.err;

  EXPECT_EQ(invoke({"bound", spec("amplitude_damping.json"), "--A", "Q"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"bound", spec("amplitude_damping.json"), "--A", "XX"}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"bound", (dir / "absent.json").string()}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitInput);
}

TEST(Run, ExperimentWritesConsistentArtifacts) {
  const auto dir = scratch_dir("experiment");
  const auto r = invoke({"experiment", "--seed", "7", "--trials", "5", "--shots", "0", "--variants", "exact",
                         "--threads", "1", "--out-dir", dir.string()});
  ASSERT_EQ(r.code, cli::kExitOk) << r.err;

  const std::string csv = cli::read_file(dir / "trials.csv");
  const auto lines = csv_lines(csv);
  ASSERT_EQ(lines.size(), 6u);
  EXPECT_EQ(split(lines[0], ','), cli::trial_columns());

  const Json trials = Json::parse(cli::read_file(dir / "trials.json"));
  ASSERT_EQ(trials.size(), 5u);
  const auto& cols = cli::trial_columns();
  for (std::size_t row = 0; row < 5; ++row) {
    const auto cells = split(lines[row + 1], ',');
    ASSERT_EQ(cells.size(), cols.size());
    const Json& obj = trials[row];
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const Json& v = obj[cols[k]];
      if (cells[k].empty() || cells[k] == "inf" || cells[k] == "-inf" || cells[k] == "nan") {
        EXPECT_TRUE(v.is_null()) << cols[k];
      } else {
        ASSERT_TRUE(v.is_number()) << cols[k];
        EXPECT_NEAR(std::stod(cells[k]), v.get<double>(), 1e-12) << cols[k];
      }
    }
    EXPECT_EQ(obj["violated_exact"].get<int>(), 0);
    EXPECT_TRUE(obj["c_real_sampled"].is_null());
  }

  const Json summary = Json::parse(cli::read_file(dir / "summary.json"));
  EXPECT_EQ(summary["summary"]["exact"]["tur_violations"].get<int>(), 0);
  EXPECT_FALSE(summary["summary"].contains("runtime_seconds"));

  const Json manifest = Json::parse(cli::read_file(dir / "manifest.json"));
  std::set<std::string> listed;
  for (const auto& f : manifest["files"]) {
    const std::string path = f["path"].get<std::string>();
    EXPECT_TRUE(listed.insert(path).second) << "listed twice: " << path;
    const std::string bytes = cli::read_file(dir / path);
    EXPECT_EQ(f["sha256"].get<std::string>(), cli::sha256_hex(bytes));
    EXPECT_EQ(f["bytes"].get<std::size_t>(), bytes.size());
  }
  EXPECT_EQ(listed, (std::set<std::string>{"trials.csv", "trials.json", "summary.json"}));

  // Repeating the run reproduces every data file byte for byte.
  const auto again = scratch_dir("experiment-again");
  ASSERT_EQ(invoke({"experiment", "--seed", "7", "--trials", "5", "--shots", "0", "--variants", "exact",
                    "--threads", "2", "--out-dir", again.string()})
                .code,
            cli::kExitOk);
  for (const char* name : {"trials.csv", "trials.json", "summary.json"}) {
    EXPECT_EQ(cli::read_file(dir / name), cli::read_file(again / name)) << name;
  }
}

TEST(Run, ExperimentRejectsBadConfiguration) {
  const auto dir = scratch_dir("experiment-bad");
  EXPECT_EQ(invoke({"experiment", "--gamma-min", "0.8", "--gamma-max", "0.2", "--out-dir", dir.string()}).code,
            cli::kExitInput);
  EXPECT_EQ(invoke({"experiment", "--variants", "exact,bogus", "--out-dir", dir.string()}).code, cli::kExitInput);
  EXPECT_EQ(invoke({"experiment", "--variants", "sampled", "--shots", "0", "--out-dir", dir.string()}).code,
            cli::kExitInput);
  EXPECT_EQ(invoke({"experiment", "--trials", "3"}).code, cli::kExitInput);
}

}  // namespace
