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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"
#include "qfn/netspec.hpp"

namespace qfn::cli {

enum ExitCode : int {
  kPass = 0,
  kValidationFailure = 1,
  kAlgebraicLoop = 2,
  kParseFailure = 3,
};

/// Report layout: {command, inputs, defects, rcond, pass} plus
/// command-specific fields. Keys are emitted sorted, so equal inputs give
/// byte-identical output.
struct CommandResult {
  nlohmann::json report;
  int exit_code = kPass;
  /// Reduced or pass-through model produced by reduce.
  std::optional<NetworkSpec> model;
};

CommandResult validate(const NetworkSpec& spec, const std::string& input,
                       double tol);

/// concatenate -> wiring -> feedback_reduce. Writes the model to `output`
/// when given. A network without connections passes through unchanged.
CommandResult reduce(const NetworkSpec& spec, const std::string& input,
                     const std::optional<std::filesystem::path>& output,
                     double tol);

/// Seeded random-instance verification of the algebraic identities. With a
/// spec, its open-loop matrix and dimensions drive the reduction checks;
/// without one, every trial draws n in [2, 5] and d in [1, 3].
CommandResult check(const std::optional<NetworkSpec>& spec,
                    const std::string& input, std::uint64_t seed,
                    std::int64_t trials, double tol);

CommandResult simulate(const NetworkSpec& model, const std::string& input,
                       const Matrix& rho0, double t, double dt, double tol);

nlohmann::json matrix_json(const Matrix& m);

/// Report for a failure raised before a command could run.
CommandResult error_result(const std::string& command, const std::string& input,
                           const std::string& message, int exit_code);

}  // namespace qfn::cli
