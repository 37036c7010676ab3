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

#include "qfn/network.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qfn/errors.hpp"

namespace qfn {

namespace {

const Complex kI{0.0, 1.0};

struct Partition {
  Labels ext_out;
  Labels ext_in;
};

Labels complement(const Labels& all, const Labels& removed) {
  Labels out;
  for (const auto& l : all) {
    if (std::find(removed.begin(), removed.end(), l) == removed.end()) {
      out.push_back(l);
    }
  }
  return out;
}

void check_subset(const Labels& channels, const Labels& subset,
                  const char* which) {
  std::set<Label> seen;
  for (const auto& l : subset) {
    if (std::find(channels.begin(), channels.end(), l) == channels.end()) {
      throw InvalidPartition(std::string(which) + " label '" + l +
                             "' is not a channel");
    }
    if (!seen.insert(l).second) {
      throw InvalidPartition(std::string(which) + " label '" + l +
                             "' listed twice");
    }
  }
}

Partition partition_of(const Labels& channels, const Wiring& w) {
  const std::size_t n = channels.size();
  const std::size_t n_i = w.internal_out.size();
  if (w.internal_in.size() != n_i) {
    throw InvalidPartition("internal output and input sets differ in size");
  }
  if (n_i == 0 || n_i >= n) {
    throw InvalidPartition("need 0 < internal edges < channels, got " +
                           std::to_string(n_i) + " of " + std::to_string(n));
  }
  check_subset(channels, w.internal_out, "internal output");
  check_subset(channels, w.internal_in, "internal input");
  if (w.x.rows() != static_cast<Index>(n_i) ||
      w.x.cols() != static_cast<Index>(n_i)) {
    throw InvalidPartition("edge matrix must be " + std::to_string(n_i) + "x" +
                           std::to_string(n_i));
  }
  if (!w.x.allFinite()) throw InvalidPartition("non-finite edge gain");
  return {complement(channels, w.internal_out),
          complement(channels, w.internal_in)};
}

Labels bordered(const Labels& channels) { return belavkin_labels(channels); }

BlockMatrix loop_matrix(const BlockMatrix& v, const Wiring& w) {
  const BlockMatrix xhat =
      embed_scalar(w.x, v.d(), w.internal_in, w.internal_out);
  const BlockMatrix vii = v.sub(w.internal_out, w.internal_in);
  return BlockMatrix::identity(w.internal_out, v.d()) - mul(vii, xhat);
}

double one_norm(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().colwise().sum().maxCoeff();
}

Op imaginary_part(const Op& m) { return (m - m.adjoint()) / (2.0 * kI); }

}  // namespace

SLHTriple concatenate(std::span<const Component> components) {
  if (components.empty()) throw DimensionMismatch("nothing to concatenate");
  const Index d = components.front().slh.d();
  Labels channels;
  Index total = 0;
  for (const auto& c : components) {
    if (c.slh.d() != d) {
      throw DimensionMismatch("component '" + c.name +
                              "' has a different initial dimension");
    }
    for (const auto& k : c.slh.channels()) channels.push_back(c.name + "." + k);
    total += c.slh.n();
  }
  Matrix s = Matrix::Zero(total * d, total * d);
  Matrix l = Matrix::Zero(total * d, d);
  Op h = Op::Zero(d, d);
  Index offset = 0;
  for (const auto& c : components) {
    const Index size = c.slh.n() * d;
    s.block(offset, offset, size, size) = c.slh.S.scalars();
    l.block(offset, 0, size, d) = c.slh.L.scalars();
    h += c.slh.H;
    offset += size;
  }
  return SLHTriple::make(s, l, h, d, std::move(channels));
}

BelavkinMatrix series(const BelavkinMatrix& v2, const BelavkinMatrix& v1,
                      double tol) {
  if (v2.n() != v1.n() || v2.d() != v1.d()) {
    throw DimensionMismatch("series: components differ in channels or d");
  }
  for (const auto* v : {&v2, &v1}) {
    const auto report = is_star_unitary(*v, tol);
    if (!report.pass) {
      throw NotStarUnitary("series: input is not star-unitary (defects " +
                           std::to_string(report.left_defect) + ", " +
                           std::to_string(report.right_defect) + ")");
    }
  }
  const Labels& labels = v2.matrix().row_labels();
  return v2 * BelavkinMatrix(v1.matrix().relabeled(labels, labels));
}

SLHTriple series_slh(const SLHTriple& g2, const SLHTriple& g1) {
  if (g2.n() != g1.n() || g2.d() != g1.d()) {
    throw DimensionMismatch("series: components differ in channels or d");
  }
  const Matrix& s2 = g2.S.scalars();
  const Matrix& l2 = g2.L.scalars();
  const Matrix& s1 = g1.S.scalars();
  const Matrix& l1 = g1.L.scalars();
  const Op coupling = l2.adjoint() * s2 * l1;
  return SLHTriple::make(s2 * s1, l2 + s2 * l1,
                         g1.H + g2.H + imaginary_part(coupling), g2.d(),
                         g2.channels());
}

bool Wiring::x_unitary(double tol) const {
  if (x.rows() != x.cols()) return false;
  const Matrix id = Matrix::Identity(x.rows(), x.cols());
  return norm_inf(x.adjoint() * x - id) <= tol &&
         norm_inf(x * x.adjoint() - id) <= tol;
}

Wiring Wiring::reversed() const {
  return Wiring{internal_in, internal_out, x.adjoint()};
}

DomainReport domain_check(const BelavkinMatrix& v, const Wiring& w) {
  partition_of(v.channels(), w);
  const Matrix loop = loop_matrix(v.matrix(), w).scalars();
  const Matrix id = Matrix::Identity(loop.rows(), loop.cols());
  DomainReport report;
  Eigen::FullPivLU<Matrix> lu(loop);
  if (lu.isInvertible()) {
    const Matrix loop_inv = lu.inverse();
    if (loop_inv.allFinite()) {
      const double terms = 1.0 + one_norm(id - loop);
      report.rcond = 1.0 / (one_norm(loop_inv) * terms);
    }
  }
  report.in_domain = report.rcond >= kLoopThreshold;
  return report;
}

BlockMatrix mobius_transform(const BelavkinMatrix& v, const Wiring& w) {
  const Partition part = partition_of(v.channels(), w);
  const DomainReport domain = domain_check(v, w);
  if (!domain.in_domain) {
    throw AlgebraicLoop("1 - V_ii X is singular: the wiring closes an "
                        "algebraic loop",
                        domain.rcond);
  }
  const BlockMatrix& m = v.matrix();
  const Index d = v.d();
  const Labels rows = bordered(part.ext_out);
  const Labels cols = bordered(part.ext_in);
  const BlockMatrix xhat = embed_scalar(w.x, d, w.internal_in, w.internal_out);
  const BlockMatrix resolvent = inv(loop_matrix(m, w)).inverse;
  const BlockMatrix correction =
      mul(mul(mul(m.sub(rows, w.internal_in), xhat), resolvent),
          m.sub(w.internal_out, cols));
  return m.sub(rows, cols) + correction;
}

double involution_identity_defect(const BelavkinMatrix& v, const Wiring& w) {
  const BlockMatrix lhs = star(mobius_transform(v, w));
  const BlockMatrix rhs = mobius_transform(star(v), w.reversed());
  return norm_inf(lhs - rhs);
}

ReducedModel feedback_reduce(const BelavkinMatrix& v, const Wiring& w,
                             double tol) {
  const StarUnitarityReport input = is_star_unitary(v, tol);
  if (!input.pass) {
    throw NotStarUnitary("network matrix is not star-unitary (defects " +
                         std::to_string(input.left_defect) + ", " +
                         std::to_string(input.right_defect) + ")");
  }
  const Partition part = partition_of(v.channels(), w);
  const BlockMatrix f = mobius_transform(v, w);
  const Labels labels = bordered(part.ext_out);
  BelavkinMatrix v_red(f.relabeled(labels, labels));

  ReductionDiagnostics diag;
  diag.unitarity = is_star_unitary(v_red, tol);
  diag.involution_defect = involution_identity_defect(v, w);
  diag.rcond = domain_check(v, w).rcond;
  diag.x_unitary = w.x_unitary();
  for (std::size_t k = 0; k < part.ext_out.size(); ++k) {
    diag.channel_pairing.emplace_back(part.ext_out[k], part.ext_in[k]);
  }

  std::optional<SLHTriple> slh;
  if (diag.unitarity.pass) {
    try {
      slh = to_slh(v_red, tol);
    } catch (const Error&) {
      slh.reset();
    }
  }
  return ReducedModel{std::move(v_red), std::move(slh), std::move(diag)};
}

SLHTriple reduced_slh(const BelavkinMatrix& v, const Wiring& w, double tol) {
  const ReducedModel reduced = feedback_reduce(v, w, tol);
  return to_slh(reduced.v_red, tol);
}

SLHTriple cascade_via_feedback(const SLHTriple& g1, const SLHTriple& g2,
                               double tol) {
  if (g1.n() != g2.n() || g1.d() != g2.d()) {
    throw DimensionMismatch("cascade: components differ in channels or d");
  }
  const std::vector<Component> parts{{"g1", g1}, {"g2", g2}};
  const SLHTriple open_loop = concatenate(parts);
  Wiring w;
  for (const auto& k : g1.channels()) w.internal_out.push_back("g1." + k);
  for (const auto& k : g2.channels()) w.internal_in.push_back("g2." + k);
  w.x = Matrix::Identity(g1.n(), g1.n());
  const SLHTriple red = reduced_slh(from_slh(open_loop, tol), w, tol);
  return SLHTriple{red.S.relabeled(g2.channels(), g2.channels()),
                   red.L.relabeled(g2.channels(), red.L.col_labels()), red.H};
}

SiegelDefects siegel_defects(const BelavkinMatrix& v, const Wiring& w,
                             const Matrix& x, const Matrix& y) {
  if (!w.symmetric()) {
    throw InvalidPartition("Siegel identities need internal_out == internal_in");
  }
  const Labels& internal = w.internal_out;
  const Wiring wx{internal, internal, x};
  const Wiring wy{internal, internal, y};
  const Partition part = partition_of(v.channels(), wx);
  partition_of(v.channels(), wy);

  const BlockMatrix& m = v.matrix();
  const Index d = v.d();
  const Labels ext = bordered(part.ext_out);
  const BlockMatrix phi_x = mobius_transform(v, wx);
  const BlockMatrix phi_y = mobius_transform(v, wy);
  const BlockMatrix id_ext = BlockMatrix::identity(ext, d);
  const BlockMatrix id_int = BlockMatrix::identity(internal, d);

  const BlockMatrix xh = embed_scalar(x, d, internal, internal);
  const BlockMatrix yh = embed_scalar(y, d, internal, internal);
  const BlockMatrix vii = m.sub(internal, internal);

  const BlockMatrix row = m.sub(internal, ext);
  const BlockMatrix left_mid =
      mul(mul(inv(id_int - mul(adjoint(xh), adjoint(vii))).inverse,
              mul(adjoint(xh), yh) - id_int),
          inv(id_int - mul(vii, yh)).inverse);
  const BlockMatrix left_rhs = mul(mul(star(row), left_mid), row);
  const BlockMatrix left_lhs = mul(star(phi_x), phi_y) - id_ext;

  const BlockMatrix col = m.sub(ext, internal);
  const BlockMatrix right_mid =
      mul(mul(inv(id_int - mul(xh, vii)).inverse,
              mul(xh, adjoint(yh)) - id_int),
          inv(id_int - mul(adjoint(vii), adjoint(yh))).inverse);
  const BlockMatrix right_rhs = mul(mul(col, right_mid), star(col));
  const BlockMatrix right_lhs = mul(phi_x, star(phi_y)) - id_ext;

  return SiegelDefects{norm_inf(left_lhs - left_rhs),
                       norm_inf(right_lhs - right_rhs)};
}

}  // namespace qfn
