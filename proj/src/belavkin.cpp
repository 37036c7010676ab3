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

#include "qfn/belavkin.hpp"

#include <algorithm>
#include <utility>

#include "qfn/errors.hpp"

namespace qfn {

namespace {

const Complex kI{0.0, 1.0};

Labels interior(const Labels& labels, std::size_t skip_front,
                std::size_t skip_back) {
  return Labels(labels.begin() + static_cast<std::ptrdiff_t>(skip_front),
                labels.end() - static_cast<std::ptrdiff_t>(skip_back));
}

bool is_border(const Label& label) {
  return label == kZero || label == kZeroPrime;
}

double scale_of(double norm) { return std::max(1.0, norm); }

}  // namespace

Label bar(const Label& label) {
  if (label == kZero) return kZeroPrime;
  if (label == kZeroPrime) return kZero;
  return label;
}

Labels belavkin_labels(const Labels& channels) {
  Labels out;
  out.reserve(channels.size() + 2);
  out.push_back(kZero);
  out.insert(out.end(), channels.begin(), channels.end());
  out.push_back(kZeroPrime);
  return out;
}

ItoMatrix::ItoMatrix(BlockMatrix m) : m_(std::move(m)) {
  const auto& rows = m_.row_labels();
  if (rows != m_.col_labels()) {
    throw DimensionMismatch("Ito matrix must have equal row and column labels");
  }
  if (rows.empty() || rows.front() != kZero) {
    throw DimensionMismatch("Ito matrix labels must start with 0");
  }
  if (std::any_of(rows.begin() + 1, rows.end(), is_border)) {
    throw DimensionMismatch("Ito matrix channel label may not be 0 or 0'");
  }
}

ItoMatrix ItoMatrix::zero(const Labels& channels, Index d) {
  Labels labels{kZero};
  labels.insert(labels.end(), channels.begin(), channels.end());
  return ItoMatrix(BlockMatrix(labels, labels, d));
}

Labels ItoMatrix::channels() const { return interior(m_.row_labels(), 1, 0); }

BelavkinMatrix::BelavkinMatrix(BlockMatrix m) : m_(std::move(m)) {
  const auto& rows = m_.row_labels();
  if (rows != m_.col_labels()) {
    throw DimensionMismatch(
        "Belavkin matrix must have equal row and column labels");
  }
  if (rows.size() < 2 || rows.front() != kZero || rows.back() != kZeroPrime) {
    throw DimensionMismatch("Belavkin matrix labels must be {0, ..., 0'}");
  }
  if (std::any_of(rows.begin() + 1, rows.end() - 1, is_border)) {
    throw DimensionMismatch("Belavkin matrix channel label may not be 0 or 0'");
  }
}

Labels BelavkinMatrix::channels() const {
  return interior(m_.row_labels(), 1, 1);
}

double BelavkinMatrix::border_defect() const {
  const Matrix& a = m_.scalars();
  const Index d = m_.d();
  const Index size = a.rows();
  const double first_col = norm_inf(Matrix(a.block(d, 0, size - d, d)));
  const double last_row = norm_inf(Matrix(a.block(size - d, 0, d, size - d)));
  return std::max(first_col, last_row);
}

BelavkinMatrix operator*(const BelavkinMatrix& a, const BelavkinMatrix& b) {
  return BelavkinMatrix(mul(a.matrix(), b.matrix()));
}

BelavkinMatrix belavkin_identity(const Labels& channels, Index d) {
  return BelavkinMatrix(BlockMatrix::identity(belavkin_labels(channels), d));
}

BelavkinMatrix belavkin_swap(const Labels& channels, Index d) {
  const Labels labels = belavkin_labels(channels);
  BlockMatrix j(labels, labels, d);
  const Op id = Op::Identity(d, d);
  for (const auto& l : labels) j.set_block(l, bar(l), id);
  return BelavkinMatrix(std::move(j));
}

BelavkinMatrix belavkin_embed(const ItoMatrix& x) {
  const Labels channels = x.channels();
  const Labels labels = belavkin_labels(channels);
  const BlockMatrix& src = x.matrix();
  BlockMatrix out(labels, labels, x.d());
  out.set_block(kZero, kZeroPrime, src.block(kZero, kZero));
  for (const auto& j : channels) {
    out.set_block(kZero, j, src.block(kZero, j));
    out.set_block(j, kZeroPrime, src.block(j, kZero));
    for (const auto& k : channels) out.set_block(j, k, src.block(j, k));
  }
  return BelavkinMatrix(std::move(out));
}

BlockMatrix star(const BlockMatrix& a) {
  const Labels rows = a.col_labels();
  const Labels cols = a.row_labels();
  BlockMatrix out(rows, cols, a.d());
  for (const auto& r : rows) {
    for (const auto& c : cols) {
      out.set_block(r, c, a.block(bar(c), bar(r)).adjoint());
    }
  }
  return out;
}

BelavkinMatrix star(const BelavkinMatrix& a) {
  return BelavkinMatrix(star(a.matrix()));
}

StarUnitarityReport is_star_unitary(const BelavkinMatrix& v, double tol) {
  const BelavkinMatrix vs = star(v);
  const Matrix id = Matrix::Identity(v.matrix().scalars().rows(),
                                     v.matrix().scalars().cols());
  StarUnitarityReport report;
  report.left_defect = norm_inf((v * vs).matrix().scalars() - id);
  report.right_defect = norm_inf((vs * v).matrix().scalars() - id);
  const double bound = tol * scale_of(norm_inf(v.matrix()));
  report.pass = report.left_defect <= bound && report.right_defect <= bound;
  return report;
}

SLHTriple SLHTriple::make(const Matrix& s, const Matrix& l, const Op& h,
                          Index d, Labels channels) {
  if (d < 1 || s.rows() % d != 0) {
    throw DimensionMismatch("S size is not a multiple of d");
  }
  const Index n = s.rows() / d;
  if (channels.empty()) channels = channel_labels(n);
  if (static_cast<Index>(channels.size()) != n) {
    throw DimensionMismatch("channel label count does not match S");
  }
  SLHTriple g{BlockMatrix(channels, channels, d, s),
              BlockMatrix(channels, Labels{kZeroPrime}, d, l), h};
  if (h.rows() != d || h.cols() != d) {
    throw DimensionMismatch("H must be d x d");
  }
  if (!h.allFinite()) throw Error("non-finite matrix entry");
  return g;
}

SLHTriple SLHTriple::vacuum(const Labels& channels, Index d) {
  return SLHTriple{BlockMatrix::identity(channels, d),
                   BlockMatrix(channels, Labels{kZeroPrime}, d),
                   Op::Zero(d, d)};
}

SlhDiagnostics validate_slh(const BlockMatrix& s, const BlockMatrix& l,
                            const Op& h, double tol) {
  const Index d = s.d();
  if (s.row_labels() != s.col_labels()) {
    throw DimensionMismatch("S must be square with matching labels");
  }
  if (l.d() != d || l.row_labels() != s.row_labels() || l.block_cols() != 1) {
    throw DimensionMismatch("L must be a block column over the S channels");
  }
  if (h.rows() != d || h.cols() != d) {
    throw DimensionMismatch("H must be d x d");
  }
  const Matrix& sm = s.scalars();
  const Matrix id = Matrix::Identity(sm.rows(), sm.cols());
  SlhDiagnostics diag;
  diag.unitarity_left = norm_inf(sm.adjoint() * sm - id);
  diag.unitarity_right = norm_inf(sm * sm.adjoint() - id);
  diag.hermiticity = norm_inf(h - h.adjoint());
  const double s_bound = tol * scale_of(norm_inf(sm));
  diag.unitary = diag.unitarity_left <= s_bound && diag.unitarity_right <= s_bound;
  diag.hermitian = diag.hermiticity <= tol * scale_of(norm_inf(h));
  return diag;
}

SlhDiagnostics validate_slh(const SLHTriple& g, double tol) {
  return validate_slh(g.S, g.L, g.H, tol);
}

BelavkinMatrix from_slh(const SLHTriple& g, double tol) {
  const SlhDiagnostics diag = validate_slh(g, tol);
  if (!diag.unitary) {
    throw NotUnitaryScattering("scattering matrix is not unitary (defect " +
                               std::to_string(std::max(diag.unitarity_left,
                                                       diag.unitarity_right)) +
                               ")");
  }
  if (!diag.hermitian) {
    throw NotHermitian("Hamiltonian is not self-adjoint (defect " +
                       std::to_string(diag.hermiticity) + ")");
  }
  const Labels& channels = g.channels();
  const Index d = g.d();
  const Labels labels = belavkin_labels(channels);
  const Op id = Op::Identity(d, d);
  const Matrix& s = g.S.scalars();
  const Matrix& l = g.L.scalars();

  BlockMatrix v(labels, labels, d);
  v.set_block(kZero, kZero, id);
  v.set_block(kZeroPrime, kZeroPrime, id);
  v.set_block(kZero, kZeroPrime, -0.5 * l.adjoint() * l - kI * g.H);
  const Matrix row = -l.adjoint() * s;  // d x nd
  const Index n = g.n();
  Matrix core = v.scalars();
  core.block(0, d, d, n * d) = row;
  core.block(d, d, n * d, n * d) = s;
  core.block(d, (n + 1) * d, n * d, d) = l;
  return BelavkinMatrix(BlockMatrix(labels, labels, d, std::move(core)));
}

SLHTriple to_slh(const BelavkinMatrix& v, double tol) {
  const StarUnitarityReport unitarity = is_star_unitary(v, tol);
  if (!unitarity.pass) {
    throw NotStarUnitary(
        "matrix is not star-unitary (defects " +
        std::to_string(unitarity.left_defect) + ", " +
        std::to_string(unitarity.right_defect) + ")");
  }
  const Index d = v.d();
  const double bound = tol * scale_of(norm_inf(v.matrix()));
  const Op id = Op::Identity(d, d);
  const double corner = std::max(norm_inf(v.block(kZero, kZero) - id),
                                 norm_inf(v.block(kZeroPrime, kZeroPrime) - id));
  if (v.border_defect() > bound || corner > bound) {
    throw MalformedStructure(
        "matrix does not have the unit-corner, zero-border layout");
  }
  const Labels channels = v.channels();
  BlockMatrix s = v.matrix().sub(channels, channels);
  BlockMatrix l = v.matrix().sub(channels, Labels{kZeroPrime});
  const Matrix& lm = l.scalars();
  const Op h = kI * (v.block(kZero, kZeroPrime) + 0.5 * lm.adjoint() * lm);
  const double defect = norm_inf(h - h.adjoint());
  if (defect > tol * scale_of(norm_inf(h))) {
    throw NotHermitian("extracted Hamiltonian is not self-adjoint (defect " +
                       std::to_string(defect) + ")");
  }
  return SLHTriple{std::move(s), std::move(l), Op(0.5 * (h + h.adjoint()))};
}

ItoMatrix ito_projector(const Labels& channels, Index d) {
  ItoMatrix zero = ItoMatrix::zero(channels, d);
  BlockMatrix p = zero.matrix();
  const Op id = Op::Identity(d, d);
  for (const auto& c : channels) p.set_block(c, c, id);
  return ItoMatrix(std::move(p));
}

ItoDefects ito_correspondence_defects(const ItoMatrix& x, const ItoMatrix& y) {
  if (x.d() != y.d() || x.matrix().row_labels() != y.matrix().row_labels()) {
    throw DimensionMismatch("Ito matrices have different channels or d");
  }
  const Labels channels = x.channels();
  const BlockMatrix& xm = x.matrix();
  const BlockMatrix& ym = y.matrix();
  const ItoMatrix projector = ito_projector(channels, x.d());
  const BlockMatrix& p = projector.matrix();

  const ItoMatrix xpy(mul(mul(xm, p), ym));
  const ItoMatrix xy(mul(xm, ym));
  const ItoMatrix xdag(adjoint(xm));

  const BelavkinMatrix xx = belavkin_embed(x);
  const BelavkinMatrix yy = belavkin_embed(y);
  const BelavkinMatrix j = belavkin_swap(channels, x.d());

  ItoDefects out;
  out.product = norm_inf(belavkin_embed(xpy).matrix() - (xx * yy).matrix());
  out.plain = norm_inf(belavkin_embed(xy).matrix() - (xx * j * yy).matrix());
  out.involution = norm_inf(belavkin_embed(xdag).matrix() - star(xx).matrix());
  return out;
}

BelavkinMatrix polynomial_ito_matrix(const Op& x0, const BelavkinMatrix& xx,
                                     std::span<const Complex> coeffs) {
  const Index d = xx.d();
  if (x0.rows() != d || x0.cols() != d) {
    throw DimensionMismatch("x0 must be d x d");
  }
  const Labels& labels = xx.matrix().row_labels();
  const Index blocks = xx.matrix().block_rows();

  // Horner evaluation of f on a square matrix.
  auto horner = [&](const Matrix& z) {
    Matrix acc = Matrix::Zero(z.rows(), z.cols());
    const Matrix id = Matrix::Identity(z.rows(), z.cols());
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      acc = acc * z + *it * id;
    }
    return acc;
  };

  Matrix shifted = xx.matrix().scalars();
  const Op f_x0 = horner(x0);
  Matrix f_x0_diag = Matrix::Zero(shifted.rows(), shifted.cols());
  for (Index b = 0; b < blocks; ++b) {
    shifted.block(b * d, b * d, d, d) += x0;
    f_x0_diag.block(b * d, b * d, d, d) = f_x0;
  }
  return BelavkinMatrix(
      BlockMatrix(labels, labels, d, horner(shifted) - f_x0_diag));
}

}  // namespace qfn
