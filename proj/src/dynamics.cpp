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

#include "qfn/dynamics.hpp"

#include <cmath>

#include "qfn/errors.hpp"

namespace qfn {

namespace {

constexpr double kStateTol = 1e-10;

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double smallest_eigenvalue(const Matrix& rho) {
  const Matrix herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Matrix vec(const Matrix& rho) {
  return Eigen::Map<const Matrix>(rho.data(), rho.size(), 1);
}

Matrix unvec(const Matrix& v, Index d) {
  return Eigen::Map<const Matrix>(v.data(), d, d);
}

Superoperator lindblad_generator(const SLHTriple& g, double tol) {
  const SlhDiagnostics diag = validate_slh(g, tol);
  if (!diag.hermitian) {
    throw NotHermitian("Hamiltonian is not self-adjoint (defect " +
                       std::to_string(diag.hermiticity) + ")");
  }
  const Index d = g.d();
  const Matrix id = Matrix::Identity(d, d);
  const Complex i{0.0, 1.0};
  Matrix gen = -i * (kron(id, g.H) - kron(g.H.transpose(), id));
  const Matrix& l = g.L.scalars();
  for (Index j = 0; j < g.n(); ++j) {
    const Op lj = l.block(j * d, 0, d, d);
    const Op ldl = lj.adjoint() * lj;
    gen += kron(lj.conjugate(), lj) - 0.5 * kron(id, ldl) -
           0.5 * kron(ldl.transpose(), id);
  }
  return Superoperator{std::move(gen), d};
}

EvolveResult evolve(const Matrix& rho0, const Superoperator& generator,
                    double t, double dt) {
  const Index d = generator.d;
  if (rho0.rows() != d || rho0.cols() != d) {
    throw InvalidState("initial state must be " + std::to_string(d) + "x" +
                       std::to_string(d));
  }
  if (!(dt > 0.0) || !(t >= 0.0) || !std::isfinite(t)) {
    throw InvalidState("need t >= 0 and dt > 0");
  }
  if (!rho0.allFinite()) throw InvalidState("non-finite state entry");
  if (norm_inf(rho0 - rho0.adjoint()) > kStateTol) {
    throw InvalidState("initial state is not Hermitian");
  }
  if (std::abs(rho0.trace() - Complex(1.0)) > kStateTol) {
    throw InvalidState("initial state does not have unit trace");
  }
  if (smallest_eigenvalue(rho0) < -kStateTol) {
    throw InvalidState("initial state is not positive semidefinite");
  }

  const Matrix& a = generator.matrix;
  Matrix y = vec(rho0);
  EvolveResult result;
  const auto steps =
      static_cast<Index>(std::max(0.0, std::ceil(t / dt - 1e-9)));
  for (Index k = 0; k < steps; ++k) {
    const double h = (k + 1 == steps) ? t - static_cast<double>(k) * dt : dt;
    const Matrix k1 = a * y;
    const Matrix k2 = a * (y + 0.5 * h * k1);
    const Matrix k3 = a * (y + 0.5 * h * k2);
    const Matrix k4 = a * (y + h * k3);
    y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    const double drift = std::abs(unvec(y, d).trace() - Complex(1.0));
    result.max_trace_drift = std::max(result.max_trace_drift, drift);
  }
  result.rho = unvec(y, d);
  result.steps = steps;
  result.min_eigenvalue = smallest_eigenvalue(result.rho);
  result.positive = result.min_eigenvalue >= -1e-8;
  return result;
}

double generator_equivalence(const SLHTriple& g1, const SLHTriple& g2) {
  if (g1.d() != g2.d()) {
    throw DimensionMismatch("generators act on different initial spaces");
  }
  return norm_inf(lindblad_generator(g1).matrix -
                  lindblad_generator(g2).matrix);
}

}  // namespace qfn
