// Command line front end. Exactly one JSON document is written to stdout per
// invocation (an {"error": ...} document on failure); diagnostics go to
// stderr. Exit codes: 0 success, 1 negative analysis outcome, 2 malformed
// input, 3 resource budget exhausted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ratsys/exprio.hpp"

namespace {

using ratsys::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct cli_exit {
  int code;
};

[[noreturn]] void emit_error(const std::string& kind, const std::string& message,
                             int code) {
  ordered_json doc;
  doc["error"] = {{"kind", kind}, {"message", message}};
  std::cout << ratsys::emit(doc);
  throw cli_exit{code};
}

void apply_budget_env() {
  const char* env = std::getenv("RATSYS_BUDGET");
  if (!env) return;
  std::string text(env);
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("no colon");
    long pairs = std::stol(text.substr(0, colon));
    int degree = std::stoi(text.substr(colon + 1));
    if (pairs <= 0 || degree <= 0) throw std::invalid_argument("nonpositive");
    ratsys::set_default_budget({pairs, degree});
  } catch (const std::exception&) {
    emit_error("input",
               "RATSYS_BUDGET must be \"pairs:degree\" with positive integers",
               kExitInput);
  }
}

ratsys::RationalSystem load_or_exit(const std::string& path) {
  try {
    return ratsys::load_system(path);
  } catch (const ratsys::error& e) {
    emit_error("input", e.what(), kExitInput);
  }
}

ratsys::ObsOptions obs_options(int kmax, int trials, std::uint64_t seed,
                               const std::string& method) {
  ratsys::ObsOptions options;
  options.k_max = kmax;
  options.trials = trials;
  options.seed = seed;
  options.method = method == "exact" ? ratsys::TrdegMethod::EliminationExact
                                     : ratsys::TrdegMethod::JacobianProbabilistic;
  return options;
}

ratsys::PiecewiseConstantInput parse_input_spec(const std::string& spec) {
  ratsys::PiecewiseConstantInput input;
  if (spec.empty()) return input;
  std::istringstream stream(spec);
  std::string piece;
  while (std::getline(stream, piece, ',')) {
    auto colon = piece.find(':');
    if (colon == std::string::npos) {
      emit_error("input", "--input segments must be value:duration", kExitInput);
    }
    try {
      double value = std::stod(piece.substr(0, colon));
      double duration = std::stod(piece.substr(colon + 1));
      if (!(duration > 0.0)) throw std::invalid_argument("duration");
      input.segments.push_back({value, duration});
    } catch (const std::exception&) {
      emit_error("input", "--input segments must be value:duration with a "
                          "positive duration", kExitInput);
    }
  }
  return input;
}

void write_csv(const std::string& path, const ratsys::Trajectory& trajectory) {
  std::ofstream out(path);
  if (!out) emit_error("input", "cannot write '" + path + "'", kExitInput);
  out << "t,y";
  if (!trajectory.states.empty()) {
    for (std::size_t i = 0; i < trajectory.states.front().size(); ++i) {
      out << ",x" << (i + 1);
    }
  }
  out << "\n";
  out.precision(17);
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    out << trajectory.times[k] << "," << trajectory.outputs[k];
    for (double v : trajectory.states[k]) out << "," << v;
    out << "\n";
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Symbolic analysis and canonicalization of rational control "
               "systems on affine varieties"};
  app.require_subcommand(1);

  std::string path, path_b, method = "jacobian", input_spec, csv_path;
  int kmax = 8, trials = 3, probe_trials = 20;
  std::uint64_t seed = 20260815;
  double horizon = 1.0, rtol = 1e-9, sample_dt = 0.0, tol = 1e-6;
  bool include_states = false;

  auto add_obs_flags = [&](CLI::App* cmd) {
    cmd->add_option("--method", method, "trdeg method: jacobian or exact")
        ->check(CLI::IsMember({"jacobian", "exact"}));
    cmd->add_option("--seed", seed, "sample seed for the jacobian method");
    cmd->add_option("--kmax", kmax, "maximum chain depth");
    cmd->add_option("--trials", trials, "jacobian sample points");
  };

  CLI::App* validate = app.add_subcommand("validate", "check well-formedness");
  validate->add_option("system", path)->required();

  CLI::App* analyze = app.add_subcommand("analyze", "rational observability");
  analyze->add_option("system", path)->required();
  add_obs_flags(analyze);

  CLI::App* index = app.add_subcommand("index", "observability index");
  index->add_option("system", path)->required();
  add_obs_flags(index);

  CLI::App* canonicalize =
      app.add_subcommand("canonicalize", "observable canonical form");
  canonicalize->add_option("system", path)->required();
  add_obs_flags(canonicalize);

  CLI::App* check = app.add_subcommand("check-ocf", "canonical form test");
  check->add_option("system", path)->required();

  CLI::App* simulate = app.add_subcommand("simulate", "integrate the response");
  simulate->add_option("system", path)->required();
  simulate->add_option("--horizon", horizon, "integration horizon")->required();
  simulate->add_option("--input", input_spec,
                       "piecewise constant input value:duration,...");
  simulate->add_option("--rtol", rtol, "relative tolerance");
  simulate->add_option("--sample-dt", sample_dt, "checkpoint spacing");
  simulate->add_option("--csv", csv_path, "also write samples as CSV");
  simulate->add_flag("--states", include_states, "include states in the JSON");

  CLI::App* compare = app.add_subcommand("compare", "response equivalence probe");
  compare->add_option("system_a", path)->required();
  compare->add_option("system_b", path_b)->required();
  compare->add_option("--trials", probe_trials, "number of random inputs");
  compare->add_option("--horizon", horizon, "probe horizon");
  compare->add_option("--seed", seed, "input sampling seed");
  compare->add_option("--tol", tol, "equivalence threshold");
  compare->add_option("--rtol", rtol, "relative tolerance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cerr << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    emit_error("input", e.what(), kExitInput);
  }

  apply_budget_env();

  if (*validate) {
    ratsys::RationalSystem system = load_or_exit(path);
    ratsys::ValidationReport report = ratsys::validate_system(system);
    ordered_json doc;
    doc["command"] = "validate";
    doc.update(ratsys::validation_to_json(report));
    std::cout << ratsys::emit(doc);
    return report.ok() ? kExitOk : kExitNegative;
  }

  if (*analyze) {
    ratsys::RationalSystem system = load_or_exit(path);
    ratsys::ObservabilityReport report = ratsys::rationally_observable(
        system, obs_options(kmax, trials, seed, method));
    ordered_json doc;
    doc["command"] = "analyze";
    doc.update(ratsys::observability_to_json(report, system.variables));
    std::cout << ratsys::emit(doc);
    return report.rationally_observable ? kExitOk : kExitNegative;
  }

  if (*index) {
    ratsys::RationalSystem system = load_or_exit(path);
    ratsys::IndexResult result = ratsys::observability_index(
        system, obs_options(kmax, trials, seed, method));
    ordered_json doc;
    doc["command"] = "index";
    doc.update(ratsys::index_to_json(result, system.variables));
    std::cout << ratsys::emit(doc);
    return kExitOk;
  }

  if (*canonicalize) {
    ratsys::RationalSystem system = load_or_exit(path);
    ratsys::CanonicalizationResult result = ratsys::to_ocf(
        system, obs_options(kmax, trials, seed, method));
    ordered_json doc;
    doc["command"] = "canonicalize";
    doc.update(ratsys::canonicalization_to_json(result, system.variables));
    std::cout << ratsys::emit(doc);
    return kExitOk;
  }

  if (*check) {
    ratsys::RationalSystem system = load_or_exit(path);
    ratsys::OcfReport report = ratsys::is_ocf(system);
    ordered_json doc;
    doc["command"] = "check-ocf";
    doc.update(ratsys::ocf_report_to_json(report));
    std::cout << ratsys::emit(doc);
    return report.is_ocf ? kExitOk : kExitNegative;
  }

  if (*simulate) {
    ratsys::RationalSystem system = load_or_exit(path);
    if (!(horizon > 0.0)) {
      emit_error("input", "--horizon must be positive", kExitInput);
    }
    ratsys::PiecewiseConstantInput input = parse_input_spec(input_spec);
    ratsys::SimulateOptions options;
    options.rtol = rtol;
    options.sample_dt = sample_dt;
    ratsys::Trajectory trajectory =
        ratsys::simulate(system, input, horizon, options);
    if (!csv_path.empty()) write_csv(csv_path, trajectory);
    ordered_json doc;
    doc["command"] = "simulate";
    doc.update(ratsys::trajectory_to_json(trajectory, include_states));
    std::cout << ratsys::emit(doc);
    return trajectory.status == ratsys::TrajectoryStatus::Completed
               ? kExitOk
               : kExitNegative;
  }

  if (*compare) {
    ratsys::RationalSystem a = load_or_exit(path);
    ratsys::RationalSystem b = load_or_exit(path_b);
    if (!(horizon > 0.0)) {
      emit_error("input", "--horizon must be positive", kExitInput);
    }
    ratsys::SimulateOptions options;
    options.rtol = rtol;
    ratsys::ProbeReport report =
        ratsys::response_equiv_probe(a, b, probe_trials, horizon, seed, options);
    bool equivalent = report.max_deviation <= tol;
    ordered_json doc;
    doc["command"] = "compare";
    doc.update(ratsys::probe_to_json(report));
    doc["tolerance"] = tol;
    doc["equivalent"] = equivalent;
    std::cout << ratsys::emit(doc);
    return equivalent ? kExitOk : kExitNegative;
  }

  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const cli_exit& e) {
    return e.code;
  } catch (const ratsys::budget_error& e) {
    ordered_json doc;
    doc["error"] = {{"kind", "budget"},
                    {"message", e.what()},
                    {"pairs_used", e.pairs_used()},
                    {"degree_reached", e.degree_reached()}};
    std::cout << ratsys::emit(doc);
    return kExitBudget;
  } catch (const ratsys::parse_error& e) {
    ordered_json doc;
    doc["error"] = {{"kind", "input"}, {"message", e.what()}};
    std::cout << ratsys::emit(doc);
    return kExitInput;
  } catch (const ratsys::error& e) {
    ordered_json doc;
    doc["error"] = {{"kind", "analysis"}, {"message", e.what()}};
    std::cout << ratsys::emit(doc);
    return kExitNegative;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInput;
  }
}
