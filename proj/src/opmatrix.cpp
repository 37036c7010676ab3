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

#include "qfn/opmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

#include "qfn/errors.hpp"

namespace qfn {

namespace {

void check_distinct(const Labels& labels, const char* which) {
  std::set<Label> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size()) {
    throw DimensionMismatch(std::string("duplicate ") + which + " label");
  }
}

Index find_label(const Labels& labels, const Label& label, const char* which) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw DimensionMismatch(std::string("no ") + which + " label '" + label +
                            "'");
  }
  return static_cast<Index>(it - labels.begin());
}

}  // namespace

Labels channel_labels(Index n) {
  Labels out;
  out.reserve(static_cast<std::size_t>(n));
  for (Index k = 1; k <= n; ++k) out.push_back(std::to_string(k));
  return out;
}

BlockMatrix::BlockMatrix(Labels rows, Labels cols, Index d)
    : rows_(std::move(rows)), cols_(std::move(cols)), d_(d) {
  if (d_ < 1) throw DimensionMismatch("initial dimension must be >= 1");
  check_distinct(rows_, "row");
  check_distinct(cols_, "column");
  data_ = Matrix::Zero(block_rows() * d_, block_cols() * d_);
}

BlockMatrix::BlockMatrix(Labels rows, Labels cols, Index d, Matrix scalars)
    : BlockMatrix(std::move(rows), std::move(cols), d) {
  if (scalars.rows() != data_.rows() || scalars.cols() != data_.cols()) {
    throw DimensionMismatch("scalar matrix is " +
                            std::to_string(scalars.rows()) + "x" +
                            std::to_string(scalars.cols()) + ", labels need " +
                            std::to_string(data_.rows()) + "x" +
                            std::to_string(data_.cols()));
  }
  if (!scalars.allFinite()) throw Error("non-finite matrix entry");
  data_ = std::move(scalars);
}

BlockMatrix BlockMatrix::identity(const Labels& labels, Index d) {
  const auto n = static_cast<Index>(labels.size()) * d;
  return BlockMatrix(labels, labels, d, Matrix::Identity(n, n));
}

bool BlockMatrix::has_row(const Label& label) const {
  return std::find(rows_.begin(), rows_.end(), label) != rows_.end();
}

bool BlockMatrix::has_col(const Label& label) const {
  return std::find(cols_.begin(), cols_.end(), label) != cols_.end();
}

Index BlockMatrix::row_index(const Label& label) const {
  return find_label(rows_, label, "row");
}

Index BlockMatrix::col_index(const Label& label) const {
  return find_label(cols_, label, "column");
}

Op BlockMatrix::block(const Label& row, const Label& col) const {
  return data_.block(row_index(row) * d_, col_index(col) * d_, d_, d_);
}

void BlockMatrix::set_block(const Label& row, const Label& col,
                            const Op& value) {
  if (value.rows() != d_ || value.cols() != d_) {
    throw DimensionMismatch("block must be " + std::to_string(d_) + "x" +
                            std::to_string(d_));
  }
  if (!value.allFinite()) throw Error("non-finite matrix entry");
  data_.block(row_index(row) * d_, col_index(col) * d_, d_, d_) = value;
}

BlockMatrix BlockMatrix::sub(const Labels& rows, const Labels& cols) const {
  BlockMatrix out(rows, cols, d_);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Index src_r = row_index(rows[i]);
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const Index src_c = col_index(cols[j]);
      out.data_.block(static_cast<Index>(i) * d_, static_cast<Index>(j) * d_,
                      d_, d_) = data_.block(src_r * d_, src_c * d_, d_, d_);
    }
  }
  return out;
}

BlockMatrix BlockMatrix::relabeled(Labels rows, Labels cols) const {
  return BlockMatrix(std::move(rows), std::move(cols), d_, data_);
}

bool BlockMatrix::same_shape(const BlockMatrix& other) const {
  return d_ == other.d_ && rows_ == other.rows_ && cols_ == other.cols_;
}

BlockMatrix BlockMatrix::operator+(const BlockMatrix& other) const {
  if (!same_shape(other)) throw DimensionMismatch("sum of unlike shapes");
  return BlockMatrix(rows_, cols_, d_, data_ + other.data_);
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& other) const {
  if (!same_shape(other)) throw DimensionMismatch("difference of unlike shapes");
  return BlockMatrix(rows_, cols_, d_, data_ - other.data_);
}

BlockMatrix BlockMatrix::operator*(Complex factor) const {
  return BlockMatrix(rows_, cols_, d_, data_ * factor);
}

BlockMatrix mul(const BlockMatrix& a, const BlockMatrix& b) {
  if (a.d() != b.d()) throw DimensionMismatch("product of unlike d");
  if (a.col_labels() != b.row_labels()) {
    throw DimensionMismatch("product: column labels of left factor differ "
                            "from row labels of right factor");
  }
  return BlockMatrix(a.row_labels(), b.col_labels(), a.d(),
                     a.scalars() * b.scalars());
}

BlockMatrix adjoint(const BlockMatrix& a) {
  return BlockMatrix(a.col_labels(), a.row_labels(), a.d(),
                     a.scalars().adjoint());
}

double reciprocal_condition(const Matrix& a) {
  if (a.rows() != a.cols()) return 0.0;
  if (a.size() == 0) return 1.0;
  if (!a.allFinite()) return 0.0;
  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  if (norm == 0.0) return 0.0;
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) return 0.0;
  const Matrix a_inv = lu.inverse();
  if (!a_inv.allFinite()) return 0.0;
  const double inv_norm = a_inv.cwiseAbs().colwise().sum().maxCoeff();
  return 1.0 / (norm * inv_norm);
}

InverseResult inv(const BlockMatrix& a) {
  if (a.scalars().rows() != a.scalars().cols()) {
    throw DimensionMismatch("inverse of a non-square matrix");
  }
  const double rcond = reciprocal_condition(a.scalars());
  if (!(rcond >= kLoopThreshold)) {
    throw AlgebraicLoop("matrix is singular to working precision", rcond);
  }
  Matrix inverse = a.scalars().fullPivLu().inverse();
  return {BlockMatrix(a.col_labels(), a.row_labels(), a.d(), std::move(inverse)),
          rcond};
}

BlockMatrix embed_scalar(const Matrix& x, Index d) {
  return embed_scalar(x, d, channel_labels(x.rows()), channel_labels(x.cols()));
}

BlockMatrix embed_scalar(const Matrix& x, Index d, Labels rows, Labels cols) {
  if (static_cast<Index>(rows.size()) != x.rows() ||
      static_cast<Index>(cols.size()) != x.cols()) {
    throw DimensionMismatch("label count does not match scalar matrix shape");
  }
  Matrix lifted = Matrix::Zero(x.rows() * d, x.cols() * d);
  for (Index j = 0; j < x.rows(); ++j) {
    for (Index k = 0; k < x.cols(); ++k) {
      lifted.block(j * d, k * d, d, d).diagonal().setConstant(x(j, k));
    }
  }
  return BlockMatrix(std::move(rows), std::move(cols), d, std::move(lifted));
}

double norm_inf(const Matrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double norm_inf(const BlockMatrix& a) { return norm_inf(a.scalars()); }

bool approx_eq(const BlockMatrix& a, const BlockMatrix& b, double tol) {
  if (!a.same_shape(b)) return false;
  const double scale = std::max({1.0, norm_inf(a), norm_inf(b)});
  return norm_inf(a.scalars() - b.scalars()) <= tol * scale;
}

}  // namespace qfn
