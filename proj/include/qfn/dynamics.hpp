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

#include "qfn/belavkin.hpp"

namespace qfn {

/// Matrix of a linear map on d x d density matrices in the column-stacking
/// convention: vec(A rho B) = (B^T (x) A) vec(rho).
struct Superoperator {
  Matrix matrix;
  Index d = 1;
};

Matrix vec(const Matrix& rho);
Matrix unvec(const Matrix& v, Index d);

/// L rho = -i[H, rho] + sum_j (L_j rho L_j^dagger - {L_j^dagger L_j, rho}/2).
/// Independent of S.
Superoperator lindblad_generator(const SLHTriple& g, double tol = kDefaultTol);

struct EvolveResult {
  Matrix rho;
  double max_trace_drift = 0.0;  ///< max over steps of |tr rho - 1|
  double min_eigenvalue = 0.0;   ///< of the final state
  bool positive = false;         ///< min_eigenvalue >= -1e-8
  Index steps = 0;
};

/// Fixed-step classical RK4 on vec(rho). The last step is shortened when dt
/// does not divide t.
EvolveResult evolve(const Matrix& rho0, const Superoperator& generator,
                    double t, double dt);

/// |generator(g1) - generator(g2)|_inf
double generator_equivalence(const SLHTriple& g1, const SLHTriple& g2);

}  // namespace qfn
