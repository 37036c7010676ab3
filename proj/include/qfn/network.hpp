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

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qfn/belavkin.hpp"

namespace qfn {

/// A named network vertex.
struct Component {
  std::string name;
  SLHTriple slh;
};

/// Open-loop assembly: block-diagonal S, stacked L, summed H. Channel k of
/// component c is labelled "c.k".
SLHTriple concatenate(std::span<const Component> components);

/// Cascade in Belavkin form: the output of v1 feeds v2, giving v2 * v1. The
/// result carries the channel labels of v2.
BelavkinMatrix series(const BelavkinMatrix& v2, const BelavkinMatrix& v1,
                      double tol = kDefaultTol);

/// Cascade in parameter form:
///   S = S2 S1, L = L2 + S2 L1, H = H1 + H2 + Im(L2^dagger S2 L1).
SLHTriple series_slh(const SLHTriple& g2, const SLHTriple& g1);

/// Internal edges to eliminate. Internal output internal_out[k] is fed into
/// internal input internal_in[j] with gain x(j, k); the edge formula uses x
/// as the map from internal outputs to internal inputs.
struct Wiring {
  Labels internal_out;
  Labels internal_in;
  Matrix x;

  bool symmetric() const { return internal_out == internal_in; }
  bool x_unitary(double tol = 1e-10) const;
  /// The same edges read backwards: in and out sets swapped, x -> x^dagger.
  Wiring reversed() const;
};

struct DomainReport {
  double rcond = 0.0;
  bool in_domain = false;
};

/// Conditioning of 1 - V_ii X. rcond is 1 / (|M^-1|_1 (1 + |V_ii X|_1)) for
/// M = 1 - V_ii X, i.e. the distance to singularity relative to the size of
/// the two terms forming M. Never throws on a singular M.
DomainReport domain_check(const BelavkinMatrix& v, const Wiring& w);

/// The Moebius map F(V, X) on raw blocks:
///   F_ab = V_ab + V_a,in X (1 - V_out,in X)^-1 V_out,b
/// for a in {0, external outputs, 0'} and b in {0, external inputs, 0'}.
/// External labels keep declaration order. Throws AlgebraicLoop or
/// InvalidPartition.
BlockMatrix mobius_transform(const BelavkinMatrix& v, const Wiring& w);

struct ReductionDiagnostics {
  StarUnitarityReport unitarity;
  double involution_defect = 0.0;
  double rcond = 0.0;
  bool x_unitary = false;
  /// (external output, external input) forming each reduced channel.
  std::vector<std::pair<Label, Label>> channel_pairing;
};

struct ReducedModel {
  /// Reduced channels are labelled by their external output label.
  BelavkinMatrix v_red;
  /// Present when v_red is star-unitary, which holds for unitary x.
  std::optional<SLHTriple> slh_red;
  ReductionDiagnostics diagnostics;
};

/// Eliminates all internal edges of w in one step.
ReducedModel feedback_reduce(const BelavkinMatrix& v, const Wiring& w,
                             double tol = kDefaultTol);

/// to_slh of the reduced matrix. Throws NotStarUnitary when x is not unitary.
SLHTriple reduced_slh(const BelavkinMatrix& v, const Wiring& w,
                      double tol = kDefaultTol);

/// Realises the cascade g1 -> g2 as a two-component network whose one
/// internal edge bundle joins the outputs of g1 to the inputs of g2.
SLHTriple cascade_via_feedback(const SLHTriple& g1, const SLHTriple& g2,
                               double tol = kDefaultTol);

/// |F(V, X)* - F(V*, X^dagger)|_inf, the latter over the reversed wiring.
double involution_identity_defect(const BelavkinMatrix& v, const Wiring& w);

struct SiegelDefects {
  double left = 0.0;
  double right = 0.0;
};

/// Residuals of the two star-Siegel factorisations of Phi = F(V, .):
///
///   Phi(X)* Phi(Y) - I = R* (1 - X^dagger V_ii^dagger)^-1 (X^dagger Y - 1)
///                          (1 - V_ii Y)^-1 R
///   Phi(X) Phi(Y)* - I = C (1 - X V_ii)^-1 (X Y^dagger - 1)
///                          (1 - V_ii^dagger Y^dagger)^-1 C*
///
/// with R the block row V_i{0,e,0'} and C the block column V_{0,e,0'}i.
/// Only the partition of w is used; requires a symmetric partition.
SiegelDefects siegel_defects(const BelavkinMatrix& v, const Wiring& w,
                             const Matrix& x, const Matrix& y);

}  // namespace qfn
