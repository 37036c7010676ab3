// Copyright 2026 The qfn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qfn/commands.hpp"
#include "qfn/errors.hpp"

namespace {

using qfn::cli::CommandResult;

int emit(const CommandResult& result) {
  std::cout << result.report.dump(2) << "\n";
  return result.exit_code;
}

double pick_tol(const std::optional<double>& flag,
                const qfn::NetworkSpec* spec) {
  if (flag) return *flag;
  if (spec && spec->options.tol) return *spec->options.tol;
  return qfn::kDefaultTol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qfn: quantum feedback network reduction in Belavkin form"};
  app.require_subcommand(1);

  std::string file;
  std::string output;
  std::string rho0_file;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::int64_t trials = 100;
  bool builtin = false;
  double t = 1.0;
  double dt = 1e-3;

  auto* validate = app.add_subcommand("validate", "check component parameters "
                                                  "and open-loop star-unitarity");
  validate->add_option("file", file, "network file")->required();
  validate->add_option("--tol", tol, "pass/fail tolerance (default 1e-9)");

  auto* reduce = app.add_subcommand("reduce", "eliminate all internal edges");
  reduce->add_option("file", file, "network file")->required();
  reduce->add_option("--output,-o", output, "write the reduced model here");
  reduce->add_option("--tol", tol, "pass/fail tolerance (default 1e-9)");

  auto* check = app.add_subcommand("check", "seeded verification of the "
                                            "reduction identities");
  check->add_option("file", file, "network file supplying the matrix");
  check->add_flag("--builtin", builtin, "draw random networks (the default without a file)");
  check->add_option("--seed", seed, "64-bit seed");
  check->add_option("--trials", trials, "number of random instances")
      ->check(CLI::NonNegativeNumber);
  check->add_option("--tol", tol, "pass/fail tolerance (default 1e-9)");

  auto* simulate = app.add_subcommand("simulate", "propagate the master "
                                                  "equation of a model");
  simulate->add_option("model", file, "model or network file")->required();
  simulate->add_option("--rho0", rho0_file, "initial density matrix")
      ->required();
  simulate->add_option("--t", t, "duration")->required();
  simulate->add_option("--dt", dt, "RK4 step")->required();
  simulate->add_option("--tol", tol, "pass/fail tolerance (default 1e-9)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qfn::cli::kParseFailure;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  std::optional<qfn::NetworkSpec> spec;
  qfn::Matrix rho0;
  try {
    if (!file.empty()) spec = qfn::parse_spec_file(file);
    if (command == "simulate") rho0 = qfn::parse_density_file(rho0_file);
  } catch (const qfn::Error& e) {
    return emit(qfn::cli::error_result(command, file, e.what(),
                                       qfn::cli::kParseFailure));
  }

  const qfn::NetworkSpec* spec_ptr = spec ? &*spec : nullptr;
  const double tolerance = pick_tol(tol, spec_ptr);
  if (command == "validate") {
    return emit(qfn::cli::validate(*spec, file, tolerance));
  }
  if (command == "reduce") {
    std::optional<std::filesystem::path> out;
    if (!output.empty()) out = output;
    return emit(qfn::cli::reduce(*spec, file, out, tolerance));
  }
  if (command == "check") {
    if (builtin && spec) {
      std::cerr << "check: <file> and --builtin are exclusive\n";
      return qfn::cli::kParseFailure;
    }
    std::uint64_t s = 0;
    if (seed) {
      s = *seed;
    } else if (spec && spec->options.seed) {
      s = *spec->options.seed;
    }
    return emit(qfn::cli::check(spec, spec ? file : "builtin", s, trials,
                                tolerance));
  }
  return emit(qfn::cli::simulate(*spec, file, rho0, t, dt, tolerance));
}
