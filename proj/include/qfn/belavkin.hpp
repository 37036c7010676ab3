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

#include <span>

#include "qfn/opmatrix.hpp"

namespace qfn {

/// Swaps the border labels 0 and 0'; channel labels are fixed.
Label bar(const Label& label);

/// {0, channels..., 0'}
Labels belavkin_labels(const Labels& channels);

/// Coefficients x_{ab} of a quantum Ito integral, laid out with row and
/// column labels {0, channels...}. x_00 multiplies dt, the 0-row the
/// annihilation differentials, the 0-column the creation differentials and
/// the channel block the scattering differentials.
class ItoMatrix {
 public:
  explicit ItoMatrix(BlockMatrix m);
  static ItoMatrix zero(const Labels& channels, Index d);

  const BlockMatrix& matrix() const { return m_; }
  Labels channels() const;
  Index n() const { return m_.block_rows() - 1; }
  Index d() const { return m_.d(); }

 private:
  BlockMatrix m_;
};

/// Square block matrix over {0, channels..., 0'}.
///
/// Matrices built by this library have a vanishing first column (below the
/// (0,0) block) and a vanishing last row (left of the (0',0') block); the
/// constructor only checks the label layout, see border_defect().
class BelavkinMatrix {
 public:
  explicit BelavkinMatrix(BlockMatrix m);

  const BlockMatrix& matrix() const { return m_; }
  Labels channels() const;
  Index n() const { return m_.block_rows() - 2; }
  Index d() const { return m_.d(); }
  Op block(const Label& row, const Label& col) const {
    return m_.block(row, col);
  }

  /// Largest entry found in the blocks that must vanish: column 0 below the
  /// top and row 0' left of the corner.
  double border_defect() const;

 private:
  BlockMatrix m_;
};

BelavkinMatrix operator*(const BelavkinMatrix& a, const BelavkinMatrix& b);

/// The identity on {0, channels, 0'}.
BelavkinMatrix belavkin_identity(const Labels& channels, Index d);
/// The border swap: identity on channels, 0 <-> 0'.
BelavkinMatrix belavkin_swap(const Labels& channels, Index d);

/// Places the blocks of an Ito matrix into the bordered layout. Linear.
BelavkinMatrix belavkin_embed(const ItoMatrix& x);

/// The star involution J A^dagger J, extended to rectangular matrices: the
/// (a, b) block of the result is the adjoint of block (bar(b), bar(a)).
/// Both label lists of the input must be closed under bar().
BlockMatrix star(const BlockMatrix& a);
BelavkinMatrix star(const BelavkinMatrix& a);

struct StarUnitarityReport {
  double left_defect = 0.0;   ///< |V V* - I|_inf
  double right_defect = 0.0;  ///< |V* V - I|_inf
  bool pass = false;
};

StarUnitarityReport is_star_unitary(const BelavkinMatrix& v,
                                    double tol = kDefaultTol);

/// Hudson-Parthasarathy parameters. S is channels x channels, L is a block
/// column (channels x {0'}) and H a single operator.
struct SLHTriple {
  BlockMatrix S;
  BlockMatrix L;
  Op H;

  /// Builds a triple from scalar arrays: S is nd x nd, L is nd x d, H is
  /// d x d. Channels default to "1".."n". No unitarity checks.
  static SLHTriple make(const Matrix& s, const Matrix& l, const Op& h, Index d,
                        Labels channels = {});
  /// (1, 0, 0) on the given channels.
  static SLHTriple vacuum(const Labels& channels, Index d);

  const Labels& channels() const { return S.row_labels(); }
  Index n() const { return S.block_rows(); }
  Index d() const { return S.d(); }
};

struct SlhDiagnostics {
  double unitarity_left = 0.0;   ///< |S^dagger S - 1|_inf
  double unitarity_right = 0.0;  ///< |S S^dagger - 1|_inf
  double hermiticity = 0.0;      ///< |H - H^dagger|_inf
  bool unitary = false;
  bool hermitian = false;
  bool pass() const { return unitary && hermitian; }
};

SlhDiagnostics validate_slh(const BlockMatrix& s, const BlockMatrix& l,
                            const Op& h, double tol = kDefaultTol);
SlhDiagnostics validate_slh(const SLHTriple& g, double tol = kDefaultTol);

/// The star-unitary coefficient matrix
///
///   [ 1  -L^dagger S  -L^dagger L / 2 - iH ]
///   [ 0   S            L                   ]
///   [ 0   0            1                   ]
///
/// Throws NotUnitaryScattering / NotHermitian when validation fails.
BelavkinMatrix from_slh(const SLHTriple& g, double tol = kDefaultTol);

/// Inverse of from_slh. H is recovered as i (V_00' + L^dagger L / 2) and
/// returned exactly Hermitian.
SLHTriple to_slh(const BelavkinMatrix& v, double tol = kDefaultTol);

/// The Ito correction projector: zero on the 0 block, identity on channels.
ItoMatrix ito_projector(const Labels& channels, Index d);

struct ItoDefects {
  double product = 0.0;      ///< |embed(X P Y) - XX YY|_inf
  double plain = 0.0;        ///< |embed(X Y) - XX J YY|_inf
  double involution = 0.0;   ///< |embed(X^dagger) - XX*|_inf
};

/// Checks the three Ito <-> Belavkin identifications on a pair of Ito
/// matrices. The left-hand sides are computed at the Ito level and embedded;
/// the right-hand sides are computed from the embedded matrices.
ItoDefects ito_correspondence_defects(const ItoMatrix& x, const ItoMatrix& y);

/// f(x0 I + XX) - f(x0) I for the polynomial f(z) = sum_k coeffs[k] z^k,
/// where x0 I places x0 on every diagonal block.
BelavkinMatrix polynomial_ito_matrix(const Op& x0, const BelavkinMatrix& xx,
                                     std::span<const Complex> coeffs);

}  // namespace qfn
