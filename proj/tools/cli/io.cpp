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

#include "cli/io.hpp"

#include <cmath>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>
#include <variant>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

namespace turlab::cli {

namespace {

using Cell = std::variant<std::monostate, double, long long>;

std::string index_path(const std::string& path, std::size_t i) { return fmt::format("{}[{}]", path, i); }

std::complex<double> parse_entry(const Json& node, const std::string& path) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2 && node[0].is_number() && node[1].is_number()) {
    return {node[0].get<double>(), node[1].get<double>()};
  }
  throw InputError(path + ": expected a [re, im] pair");
}

std::size_t parse_index(const Json& node, const std::string& path) {
  if (!node.is_number_integer() || node.get<long long>() < 0) {
    throw InputError(path + ": expected a non-negative integer");
  }
  return node.get<std::size_t>();
}

// Library contract violations triggered by user data are input errors.
template <typename F>
auto as_input(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const SingularOperator&) {
    throw;
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
}

channels::KrausChannel parse_channel(const Json& node, const std::string& path) {
  if (!node.is_object()) throw InputError(path + ": expected an object");
  if (node.contains("unitary")) {
    const ComplexMatrix u = parse_matrix(node["unitary"], path + ".unitary");
    if (!node.contains("layout") || !node["layout"].is_array() || node["layout"].size() != 2) {
      throw InputError(path + ".layout: expected [dim_S, dim_E]");
    }
    const std::size_t ds = parse_index(node["layout"][0], path + ".layout[0]");
    const std::size_t de = parse_index(node["layout"][1], path + ".layout[1]");
    const std::size_t e0 = node.contains("env_initial") ? parse_index(node["env_initial"], path + ".env_initial") : 0;
    return as_input(path, [&] {
      return channels::kraus_from_unitary(u, linalg::SubsystemLayout({ds, de}, {"S", "E"}), e0);
    });
  }
  if (node.contains("kraus")) {
    const Json& list = node["kraus"];
    if (!list.is_array() || list.empty()) throw InputError(path + ".kraus: expected a non-empty list of matrices");
    std::vector<ComplexMatrix> ops;
    for (std::size_t m = 0; m < list.size(); ++m) ops.push_back(parse_matrix(list[m], index_path(path + ".kraus", m)));
    const std::size_t v0 =
        node.contains("no_jump_index") ? parse_index(node["no_jump_index"], path + ".no_jump_index") : 0;
    return as_input(path, [&] { return channels::KrausChannel(std::move(ops), v0); });
  }
  throw InputError(path + ": expected a 'unitary' or 'kraus' entry");
}

std::vector<Cell> trial_cells(const experiment::TrialRecord& r) {
  std::vector<Cell> c;
  const auto& in = r.inputs;
  c.emplace_back(static_cast<long long>(in.id));
  c.emplace_back(in.gamma);
  for (double t : in.theta) c.emplace_back(t);
  for (int v : {in.a.i, in.a.j, in.b.i, in.b.j}) c.emplace_back(static_cast<long long>(v));

  auto push_block = [&c](bool present, double cr, double xi, double q, double lo, double hi, double lhs) {
    for (double v : {cr, xi, q, lo, hi, lhs}) {
      if (present) {
        c.emplace_back(v);
      } else {
        c.emplace_back(std::monostate{});
      }
    }
  };
  if (r.exact) {
    const auto& e = *r.exact;
    push_block(true, e.c_real, e.xi_b, e.q_ab, e.lower, e.upper, e.separable.ratio());
  } else {
    push_block(false, 0, 0, 0, 0, 0, 0);
  }
  if (r.approx) {
    const auto& a = *r.approx;
    push_block(true, a.separable.mean, a.xi_b, a.q_ab, a.lower, a.upper, a.separable.ratio());
  } else {
    push_block(false, 0, 0, 0, 0, 0, 0);
  }
  if (r.sampled) {
    const auto& s = *r.sampled;
    push_block(true, s.c_real, s.xi_b, s.q_ab, s.lower, s.upper, s.separable.ratio());
  } else {
    push_block(false, 0, 0, 0, 0, 0, 0);
  }
  c.emplace_back(r.postselect_p0);
  c.emplace_back(r.exact ? Cell(static_cast<long long>(r.violated_exact())) : Cell());
  c.emplace_back(r.sampled ? Cell(static_cast<long long>(r.violated_sampled())) : Cell());
  return c;
}

Json counts_to_json(const correlator::ShotResult& s) {
  Json j = Json::object();
  for (const auto& [key, n] : s.counts) j[key] = n;
  return j;
}

}  // namespace

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError(path.string() + ": invalid JSON (" + e.what() + ")");
  }
}

ComplexMatrix parse_matrix(const Json& node, const std::string& path) {
  if (!node.is_array() || node.empty()) throw InputError(path + ": expected a non-empty list of rows");
  const std::size_t n = node.size();
  ComplexMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const Json& row = node[r];
    if (!row.is_array()) throw InputError(fmt::format("{}: row {} is not a list", path, r));
    if (row.size() != n) {
      throw InputError(fmt::format("{}: row {} has {} entries, expected {}", path, r, row.size(), n));
    }
    for (std::size_t c = 0; c < n; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          parse_entry(row[c], fmt::format("{}[{}][{}]", path, r, c));
    }
  }
  return m;
}

Json matrix_to_json(const ComplexMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

BoundSpec parse_bound_spec(const Json& root) {
  if (!root.is_object()) throw InputError("$: expected an object");
  BoundSpec spec;
  if (root.contains("channel")) spec.channel = parse_channel(root["channel"], "$.channel");
  if (root.contains("rho")) spec.rho = parse_matrix(root["rho"], "$.rho");
  if (root.contains("A")) spec.a = parse_matrix(root["A"], "$.A");
  if (root.contains("B")) spec.b = parse_matrix(root["B"], "$.B");
  return spec;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json to_json(const tur::TurReport& r) {
  return Json{{"mean", number_or_null(r.mean)},
              {"variance", number_or_null(r.variance)},
              {"q_baseline", number_or_null(r.q_baseline)},
              {"xi", number_or_null(r.xi)},
              {"lhs", number_or_null(r.lhs)},
              {"rhs", number_or_null(r.rhs)},
              {"ratio", number_or_null(r.ratio())},
              {"margin", number_or_null(r.margin)},
              {"holds", r.holds},
              {"degenerate", r.degenerate}};
}

Json to_json(const correlator::BoundReport& r) {
  return Json{{"variant", correlator::to_string(r.approx_variant)},
              {"part", r.part == correlator::CorrelatorPart::real ? "real" : "imag"},
              {"correlator_real", number_or_null(r.correlator_real)},
              {"correlator_imag", number_or_null(r.correlator_imag)},
              {"q_ab", number_or_null(r.q_ab)},
              {"xi_b", number_or_null(r.xi_b)},
              {"lower", number_or_null(r.lower)},
              {"upper", number_or_null(r.upper)},
              {"holds", r.holds}};
}

Json to_json(const experiment::Stats& s) {
  return Json{{"count", s.count},
              {"min", number_or_null(s.min)},
              {"median", number_or_null(s.median)},
              {"max", number_or_null(s.max)}};
}

Json to_json(const experiment::ExperimentConfig& c) {
  Json variants = Json::array();
  for (auto v : c.variants) variants.push_back(experiment::to_string(v));
  return Json{{"seed", c.seed},
              {"trials", c.n_trials},
              {"shots", c.shots},
              {"gamma_min", c.gamma_range.lo},
              {"gamma_max", c.gamma_range.hi},
              {"theta_min", c.theta_range.lo},
              {"theta_max", c.theta_range.hi},
              {"variants", variants},
              {"q_approx", c.q_approx == correlator::QApprox::linear_p0 ? "linear" : "squared"},
              {"check_general", c.check_general}};
}

Json to_json(const experiment::RunSummary& s, bool include_runtime) {
  Json gaps = Json::array();
  for (const auto& g : s.approx_gap) {
    Json b = to_json(g.gap);
    b["gamma_lo"] = g.lo;
    b["gamma_hi"] = g.hi;
    gaps.push_back(std::move(b));
  }
  Json j{{"trials", s.n_trials},
         {"failed_trials", s.failed_trials},
         {"degenerate_trials", s.degenerate_trials},
         {"exact",
          {{"evaluated", s.exact.evaluated},
           {"tur_violations", s.exact.tur_violations},
           {"bound_violations", s.exact.bound_violations},
           {"bound_imag_violations", s.exact_imag_violations},
           {"general_tur_violations", s.exact_general_violations},
           {"product_tur_violations", s.exact_product_violations}}},
         {"neumann1",
          {{"evaluated", s.approx.evaluated},
           {"tur_violations", s.approx.tur_violations},
           {"bound_violations", s.approx.bound_violations}}},
         {"sampled",
          {{"evaluated", s.sampled.evaluated},
           {"tur_violations", s.sampled.tur_violations},
           {"bound_violations", s.sampled.bound_violations}}},
         {"tur_margin_exact", to_json(s.tur_margin_exact)},
         {"bound_margin_exact", to_json(s.bound_margin_exact)},
         {"tur_ratio_sampled", to_json(s.tur_ratio_sampled)},
         {"approx_upper_gap_by_gamma", gaps}};
  if (include_runtime) j["runtime_seconds"] = s.runtime_seconds;
  return j;
}

const std::vector<std::string>& trial_columns() {
  static const std::vector<std::string> cols = [] {
    std::vector<std::string> c{"trial_id", "gamma"};
    for (int k = 1; k <= 12; ++k) c.push_back(fmt::format("theta_{}", k));
    for (const char* n : {"a_i", "a_j", "b_i", "b_j"}) c.emplace_back(n);
    for (const char* v : {"exact", "approx", "sampled"}) {
      for (const char* q : {"c_real", "xi_b", "q_ab", "lower", "upper", "tur_lhs"}) {
        c.push_back(fmt::format("{}_{}", q, v));
      }
    }
    for (const char* n : {"postselect_p0", "violated_exact", "violated_sampled"}) c.emplace_back(n);
    return c;
  }();
  return cols;
}

void write_trials_csv(const std::vector<experiment::TrialRecord>& records, std::ostream& out) {
  const auto& cols = trial_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
  out << "\r\n";
  for (const auto& r : records) {
    const auto cells = trial_cells(r);
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (k) out << ',';
      if (const auto* d = std::get_if<double>(&cells[k])) out << format_number(*d);
      if (const auto* i = std::get_if<long long>(&cells[k])) out << *i;
    }
    out << "\r\n";
  }
}

Json trials_to_json(const std::vector<experiment::TrialRecord>& records) {
  const auto& cols = trial_columns();
  Json arr = Json::array();
  for (const auto& r : records) {
    const auto cells = trial_cells(r);
    Json obj = Json::object();
    for (std::size_t k = 0; k < cells.size(); ++k) {
      if (const auto* d = std::get_if<double>(&cells[k])) {
        obj[cols[k]] = number_or_null(*d);
      } else if (const auto* i = std::get_if<long long>(&cells[k])) {
        obj[cols[k]] = *i;
      } else {
        obj[cols[k]] = nullptr;
      }
    }
    obj["failure"] = r.failure ? Json(*r.failure) : Json(nullptr);
    if (r.sampled) {
      obj["counts"] = {{"protocol", counts_to_json(r.sampled->protocol_counts)},
                       {"nested", counts_to_json(r.sampled->nested_counts)}};
    }
    arr.push_back(std::move(obj));
  }
  return arr;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", md[i]);
  return hex;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path.string() + ": cannot open file");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError(path.string() + ": cannot open for writing");
  out << bytes;
  if (!out) throw InputError(path.string() + ": write failed");
}

std::string utc_timestamp() { return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::time(nullptr))); }

}  // namespace turlab::cli
