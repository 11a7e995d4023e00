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

#include "cli/commands.hpp"

#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "cli/io.hpp"
#include "turlab/gates.hpp"
#include "turlab/verify.hpp"

#ifndef TURLAB_VERSION_STRING
#define TURLAB_VERSION_STRING "0.0.0"
#endif

namespace turlab::cli {

namespace fs = std::filesystem;

namespace {

Json suite_to_json(const verify::SuiteResult& r) {
  return Json{{"name", r.name},           {"property", r.property},   {"passed", r.passed},
              {"checks", r.checks},       {"failures", r.failures},   {"max_error", number_or_null(r.max_error)},
              {"tolerance", r.tolerance}, {"detail", r.detail}};
}

ComplexMatrix observable_from(const std::optional<std::string>& label, const std::optional<ComplexMatrix>& from_spec,
                              const char* name) {
  if (label) {
    try {
      return gates::pauli_string(*label);
    } catch (const Error& e) {
      throw InputError(fmt::format("--{}: {}", name, e.what()));
    }
  }
  if (from_spec) return *from_spec;
  throw InputError(fmt::format("$.{}: missing (give it in the spec or with --{})", name, name));
}

}  // namespace

int cmd_verify(const VerifyOptions& opts, std::ostream& out, std::ostream& err) {
  verify::SuiteOptions so;
  so.trials = opts.trials;
  so.seed = opts.seed;
  so.inject_dv0_sign_fault = opts.inject_dv0_sign_fault;
  const auto names = opts.suites.empty() ? verify::suite_names() : opts.suites;

  std::vector<verify::SuiteResult> results;
  for (const auto& name : names) {
    try {
      results.push_back(verify::run_suite(name, so));
    } catch (const ContractError& e) {
      throw InputError(fmt::format("--suite: {}", e.what()));
    }
  }

  bool all = true;
  Json report{{"seed", opts.seed}, {"trials", opts.trials}, {"suites", Json::array()}};
  for (const auto& r : results) {
    all = all && r.passed;
    report["suites"].push_back(suite_to_json(r));
    if (!opts.json) fmt::print(out, "{:4}  {:<10} {}: {}\n", r.passed ? "PASS" : "FAIL", r.name, r.property, r.detail);
  }
  report["passed"] = all;
  if (opts.json) out << report.dump(2) << "\n";
  if (opts.report) write_file(*opts.report, report.dump(2) + "\n");
  for (const auto& r : results) {
    if (!r.passed) fmt::print(err, "verify: property '{}' failed in suite {}\n", r.property, r.name);
  }
  return all ? kExitOk : kExitInvariant;
}

int cmd_experiment(const ExperimentOptions& opts, std::ostream& out, std::ostream& err) {
  try {
    opts.config.validate();
  } catch (const ContractError& e) {
    throw InputError(e.what());
  }
  std::error_code ec;
  fs::create_directories(opts.out_dir, ec);
  if (ec || !fs::is_directory(opts.out_dir)) {
    throw InputError(fmt::format("--out-dir: cannot create '{}'", opts.out_dir.string()));
  }

  const std::string started = utc_timestamp();
  const auto result = experiment::run_experiment(opts.config);
  const std::string finished = utc_timestamp();

  std::ostringstream csv;
  write_trials_csv(result.records, csv);
  const Json config = to_json(opts.config);
  const std::vector<std::pair<std::string, std::string>> files{
      {"trials.csv", csv.str()},
      {"trials.json", trials_to_json(result.records).dump(2) + "\n"},
      {"summary.json", Json{{"config", config}, {"summary", to_json(result.summary, false)}}.dump(2) + "\n"},
  };

  Json manifest{{"tool", "turlab"},
                {"version", TURLAB_VERSION_STRING},
                {"command", "experiment"},
                {"config", config},
                {"inputs_sha256", sha256_hex(config.dump())},
                {"started_at", started},
                {"finished_at", finished},
                {"runtime_seconds", result.summary.runtime_seconds},
                {"files", Json::array()}};
  for (const auto& [name, bytes] : files) {
    write_file(opts.out_dir / name, bytes);
    manifest["files"].push_back({{"path", name}, {"bytes", bytes.size()}, {"sha256", sha256_hex(bytes)}});
  }
  write_file(opts.out_dir / "manifest.json", manifest.dump(2) + "\n");

  const auto& s = result.summary;
  fmt::print(out, "trials: {} ({} failed, {} degenerate), runtime {:.2f} s\n", s.n_trials, s.failed_trials,
             s.degenerate_trials, s.runtime_seconds);
  if (s.exact.evaluated) {
    fmt::print(out, "exact:    {} TUR, {} bound (re), {} bound (im), {} Eq.1, {} Eq.2 violations\n",
               s.exact.tur_violations, s.exact.bound_violations, s.exact_imag_violations,
               s.exact_general_violations, s.exact_product_violations);
  }
  if (s.approx.evaluated) {
    fmt::print(out, "neumann1: {} TUR, {} bound violations\n", s.approx.tur_violations, s.approx.bound_violations);
  }
  if (s.sampled.evaluated) {
    fmt::print(out, "sampled:  {} TUR, {} bound violations at {} shots\n", s.sampled.tur_violations,
               s.sampled.bound_violations, opts.config.shots);
  }
  fmt::print(out, "wrote {}\n", opts.out_dir.string());

  const std::size_t exact_bad = s.exact.tur_violations + s.exact.bound_violations + s.exact_imag_violations +
                                s.exact_general_violations + s.exact_product_violations;
  if (exact_bad) {
    fmt::print(err, "experiment: {} exact-arithmetic violations\n", exact_bad);
    return kExitInvariant;
  }
  return kExitOk;
}

int cmd_bound(const BoundOptions& opts, std::ostream& out, std::ostream& err) {
  BoundSpec spec = parse_bound_spec(load_json_file(opts.spec));
  if (opts.rho) {
    const Json j = load_json_file(*opts.rho);
    spec.rho = j.is_object() && j.contains("rho") ? parse_matrix(j["rho"], "$.rho") : parse_matrix(j, "$");
  }
  if (!spec.channel) throw InputError("$.channel: missing");
  if (!spec.rho) throw InputError("$.rho: missing (give it in the spec or with --rho)");
  const ComplexMatrix a = observable_from(opts.a_label, spec.a, "A");
  const ComplexMatrix b = observable_from(opts.b_label, spec.b, "B");
  const auto& ch = *spec.channel;

  try {
    tur::require_density(*spec.rho);
    if (static_cast<std::size_t>(spec.rho->rows()) != ch.dim()) throw LayoutError("rho does not match the channel");
    // Surface observable problems as input errors before any numerics.
    (void)correlator::exact_correlator(*spec.rho, ch, a, b);
  } catch (const SingularOperator&) {
    throw;
  } catch (const Error& e) {
    throw InputError(e.what());
  }

  using correlator::BoundVariant;
  using correlator::CorrelatorPart;
  const auto re = correlator::correlator_bound(*spec.rho, ch, a, b, BoundVariant::exact, CorrelatorPart::real);
  const auto im = correlator::correlator_bound(*spec.rho, ch, a, b, BoundVariant::exact, CorrelatorPart::imag);
  const auto approx = correlator::correlator_bound(*spec.rho, ch, a, b, BoundVariant::neumann1, CorrelatorPart::real);
  const auto tur_report = correlator::separable_tur_protocol_check(*spec.rho, ch, a, b, CorrelatorPart::real);

  Json report{{"channel", {{"dim", ch.dim()}, {"kraus_count", ch.size()}, {"no_jump_index", ch.no_jump_index()}}},
              {"xi", number_or_null(tur::survival_activity(*spec.rho, ch))},
              {"p0", number_or_null(tur::no_jump_probability(*spec.rho, ch))},
              {"bound", to_json(re)},
              {"bound_imag", to_json(im)},
              {"bound_neumann1", to_json(approx)},
              {"tur", to_json(tur_report)}};
  out << report.dump(2) << "\n";
  if (!re.holds || !im.holds || !tur_report.holds) {
    fmt::print(err, "bound: exact relation violated\n");
    return kExitInvariant;
  }
  return kExitOk;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"turlab: survival-activity uncertainty relations for quantum channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", TURLAB_VERSION_STRING);

  VerifyOptions vo;
  std::string fault;
  auto* verify_cmd = app.add_subcommand("verify", "Run the randomized property suites");
  verify_cmd->add_option("--suite", vo.suites, "Suite(s) to run: qfi, scaling, protocol, saturation, series")
      ->delimiter(',');
  verify_cmd->add_option("--trials", vo.trials, "Random instances per suite")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--seed", vo.seed, "Generator seed");
  verify_cmd->add_flag("--json", vo.json, "Print the report as JSON");
  verify_cmd->add_option("--report", vo.report, "Also write the JSON report to this file");
  verify_cmd->add_option("--inject-fault", fault, "Test-only fault injection")
      ->check(CLI::IsMember({"dv0-sign"}))
      ->group("");

  ExperimentOptions eo;
  std::vector<std::string> variants{"exact", "neumann1", "sampled"};
  std::string q_approx = "linear";
  auto* exp_cmd = app.add_subcommand("experiment", "Run the randomized two-qubit experiment family");
  exp_cmd->add_option("--seed", eo.config.seed, "Generator seed");
  exp_cmd->add_option("--trials", eo.config.n_trials, "Number of trials")->check(CLI::PositiveNumber);
  exp_cmd->add_option("--shots", eo.config.shots, "Shots per circuit for the sampled variant");
  exp_cmd->add_option("--gamma-min", eo.config.gamma_range.lo, "Lower end of the coupling range");
  exp_cmd->add_option("--gamma-max", eo.config.gamma_range.hi, "Upper end of the coupling range");
  exp_cmd->add_option("--theta-min", eo.config.theta_range.lo, "Lower end of the rotation-angle range");
  exp_cmd->add_option("--theta-max", eo.config.theta_range.hi, "Upper end of the rotation-angle range");
  exp_cmd->add_option("--variants", variants, "Comma-separated: exact, neumann1, sampled")->delimiter(',');
  exp_cmd->add_option("--q-approx", q_approx, "Second-order factor of the approximate Q")
      ->check(CLI::IsMember({"linear", "squared"}));
  exp_cmd->add_option("--threads", eo.config.threads, "Worker threads (default: TURLAB_THREADS or all cores)");
  exp_cmd->add_option("--out-dir", eo.out_dir, "Output directory")->required();

  BoundOptions bo;
  auto* bound_cmd = app.add_subcommand("bound", "Evaluate the bounds for one channel/state/observable instance");
  bound_cmd->add_option("spec", bo.spec, "JSON spec with channel and optionally rho, A, B")->required();
  bound_cmd->add_option("--rho", bo.rho, "JSON file holding rho (overrides the spec)");
  bound_cmd->add_option("--A", bo.a_label, "Pauli label for A, e.g. ZI (overrides the spec)");
  bound_cmd->add_option("--B", bo.b_label, "Pauli label for B (overrides the spec)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*verify_cmd) {
      vo.inject_dv0_sign_fault = fault == "dv0-sign";
      return cmd_verify(vo, out, err);
    }
    if (*exp_cmd) {
      eo.config.variants.clear();
      for (const auto& v : variants) {
        try {
          eo.config.variants.insert(experiment::parse_variant(v));
        } catch (const ContractError& e) {
          throw InputError(fmt::format("--variants: {}", e.what()));
        }
      }
      eo.config.q_approx = q_approx == "linear" ? correlator::QApprox::linear_p0 : correlator::QApprox::squared_p0;
      return cmd_experiment(eo, out, err);
    }
    return cmd_bound(bo, out, err);
  } catch (const InputError& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kExitInput;
  } catch (const SingularOperator& e) {
    fmt::print(err, "numerical degeneracy: singular operator, eigenvalue {:.3e}: {}\n", e.eigenvalue(), e.what());
    return kExitDegenerate;
  } catch (const DegenerateChannel& e) {
    fmt::print(err, "numerical degeneracy: {}\n", e.what());
    return kExitDegenerate;
  } catch (const AdmissibilityError& e) {
    fmt::print(err, "numerical degeneracy: {}\n", e.what());
    return kExitDegenerate;
  } catch (const ContractError& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kExitInput;
  } catch (const LayoutError& e) {
    fmt::print(err, "input error: {}\n", e.what());
    return kExitInput;
  }
}

}  // namespace turlab::cli
