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

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

namespace qfn {

using Complex = std::complex<double>;
/// Dense complex scalar matrix. Also used for single operators on the
/// initial space (d x d) where the distinction does not matter.
using Matrix = Eigen::MatrixXcd;
using Op = Eigen::MatrixXcd;
using Index = Eigen::Index;

using Label = std::string;
using Labels = std::vector<Label>;

inline const Label kZero = "0";
inline const Label kZeroPrime = "0'";

inline constexpr double kDefaultTol = 1e-9;
/// Reciprocal condition below which an inversion is treated as an algebraic
/// loop.
inline constexpr double kLoopThreshold = 1e-12;

/// Channel labels "1".."n".
Labels channel_labels(Index n);

/// Rectangular array of d x d operator blocks addressed by labels.
///
/// Storage is a dense row-major-by-block scalar matrix of size
/// (rows * d) x (cols * d); block (r, c) occupies the d x d window at
/// (index(r) * d, index(c) * d). Every block is always present.
class BlockMatrix {
 public:
  BlockMatrix(Labels rows, Labels cols, Index d);
  BlockMatrix(Labels rows, Labels cols, Index d, Matrix scalars);

  static BlockMatrix identity(const Labels& labels, Index d);

  const Labels& row_labels() const { return rows_; }
  const Labels& col_labels() const { return cols_; }
  Index d() const { return d_; }
  Index block_rows() const { return static_cast<Index>(rows_.size()); }
  Index block_cols() const { return static_cast<Index>(cols_.size()); }
  const Matrix& scalars() const { return data_; }

  bool has_row(const Label& label) const;
  bool has_col(const Label& label) const;
  Index row_index(const Label& label) const;
  Index col_index(const Label& label) const;

  Op block(const Label& row, const Label& col) const;
  void set_block(const Label& row, const Label& col, const Op& value);

  /// Gathers the named rows and columns, in the order given.
  BlockMatrix sub(const Labels& rows, const Labels& cols) const;
  BlockMatrix relabeled(Labels rows, Labels cols) const;

  BlockMatrix operator+(const BlockMatrix& other) const;
  BlockMatrix operator-(const BlockMatrix& other) const;
  BlockMatrix operator*(Complex factor) const;

  bool same_shape(const BlockMatrix& other) const;

 private:
  Labels rows_;
  Labels cols_;
  Index d_;
  Matrix data_;
};

BlockMatrix mul(const BlockMatrix& a, const BlockMatrix& b);
BlockMatrix adjoint(const BlockMatrix& a);

struct InverseResult {
  BlockMatrix inverse;
  double rcond;
};

/// Scalar-level inverse. The result has the row and column label lists of
/// the input swapped. Throws AlgebraicLoop when rcond < kLoopThreshold.
InverseResult inv(const BlockMatrix& a);

/// 1-norm reciprocal condition number 1 / (|A|_1 |A^-1|_1); 0 for singular
/// or non-finite input.
double reciprocal_condition(const Matrix& a);

/// X (x) 1_d: block (j, k) is X(j, k) times the d x d identity.
BlockMatrix embed_scalar(const Matrix& x, Index d);
BlockMatrix embed_scalar(const Matrix& x, Index d, Labels rows, Labels cols);

/// Largest absolute scalar entry.
double norm_inf(const Matrix& a);
double norm_inf(const BlockMatrix& a);

/// |A - B|_inf <= tol * max(1, |A|_inf, |B|_inf).
bool approx_eq(const BlockMatrix& a, const BlockMatrix& b,
               double tol = kDefaultTol);

}  // namespace qfn
