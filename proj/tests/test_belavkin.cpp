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

#include <array>

#include "doctest.h"
#include "oracles.hpp"
#include "qfn/belavkin.hpp"
#include "qfn/errors.hpp"
#include "qfn/sampling.hpp"

using namespace qfn;

namespace {

const Complex I{0.0, 1.0};

Matrix m1(Complex v) { return Matrix::Constant(1, 1, v); }

Matrix rows3(std::array<std::array<Complex, 3>, 3> r) {
  Matrix m(3, 3);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) m(i, j) = r[i][j];
  return m;
}

ItoMatrix ito_1x1(Complex a, Complex b, Complex c, Complex dd) {
  Matrix m(2, 2);
  m << a, b, c, dd;
  return ItoMatrix(BlockMatrix(Labels{"0", "1"}, Labels{"0", "1"}, 1, m));
}

}  // namespace

TEST_CASE("belavkin_embed: block placement") {
  const ItoMatrix zero = ItoMatrix::zero(channel_labels(2), 2);
  CHECK(norm_inf(belavkin_embed(zero).matrix()) == 0.0);

  const Complex a{1, 2}, b{3, -1}, c{0.5, 0}, dd{-2, 4};
  const BelavkinMatrix e = belavkin_embed(ito_1x1(a, b, c, dd));
  CHECK(e.matrix().row_labels() == Labels{"0", "1", "0'"});
  CHECK(e.matrix().scalars() == rows3({{{0, b, a}, {0, dd, c}, {0, 0, 0}}}));
}

TEST_CASE("belavkin_embed: linear and lands in the border pattern") {
  for (std::uint64_t t = 0; t < 30; ++t) {
    CounterRng rng = CounterRng::for_trial(1, t);
    const Index n = rng.uniform_int(1, 4);
    const Index d = rng.uniform_int(1, 3);
    const ItoMatrix x = random_ito(rng, n, d);
    const ItoMatrix y = random_ito(rng, n, d);
    const ItoMatrix sum(x.matrix() + y.matrix());
    CHECK(norm_inf(belavkin_embed(sum).matrix() -
                   (belavkin_embed(x).matrix() + belavkin_embed(y).matrix())) <
          1e-15);
    const BelavkinMatrix e = belavkin_embed(x);
    CHECK(e.border_defect() == 0.0);
    CHECK(norm_inf(e.block(kZero, kZero)) == 0.0);
    CHECK(norm_inf(e.block(kZeroPrime, kZeroPrime)) == 0.0);
  }
}

TEST_CASE("star: identity, involution and the n = 1 hand evaluation") {
  const BelavkinMatrix id = belavkin_identity(channel_labels(3), 2);
  CHECK(norm_inf(star(id).matrix() - id.matrix()) == 0.0);

  const Complex a{1, 2}, b{3, -1}, c{0.5, 0.25}, dd{-2, 4};
  const BelavkinMatrix x = belavkin_embed(ito_1x1(a, b, c, dd));
  const Matrix expected = rows3(
      {{{0, std::conj(c), std::conj(a)}, {0, std::conj(dd), std::conj(b)}, {0, 0, 0}}});
  CHECK(star(x).matrix().scalars() == expected);
  CHECK(norm_inf(star(star(x)).matrix() - x.matrix()) == 0.0);
}

TEST_CASE("star: equals J A^dagger J and reverses products") {
  for (std::uint64_t t = 0; t < 40; ++t) {
    CounterRng rng = CounterRng::for_trial(2, t);
    const Index n = rng.uniform_int(1, 4);
    const Index d = rng.uniform_int(1, 3);
    const Labels labels = belavkin_labels(channel_labels(n));
    const BelavkinMatrix x(BlockMatrix(labels, labels, d,
                                       gaussian_matrix(rng, (n + 2) * d, (n + 2) * d)));
    const BelavkinMatrix y(BlockMatrix(labels, labels, d,
                                       gaussian_matrix(rng, (n + 2) * d, (n + 2) * d)));
    const BelavkinMatrix j = belavkin_swap(channel_labels(n), d);
    const BlockMatrix jxj = mul(mul(j.matrix(), adjoint(x.matrix())), j.matrix());
    CHECK(norm_inf(star(x).matrix() - jxj) == 0.0);
    CHECK(oracle::diff(star(x).matrix().scalars(),
                       oracle::star(oracle::from_eigen(x.matrix().scalars()), d)) ==
          0.0);
    CHECK(norm_inf(star(x * y).matrix() - (star(y) * star(x)).matrix()) < 1e-12);
  }
}

TEST_CASE("star: rectangular convention") {
  CounterRng rng(4);
  const Labels border = belavkin_labels(Labels{"e"});
  const BlockMatrix row(Labels{"i"}, border, 2, gaussian_matrix(rng, 2, 6));
  const BlockMatrix rs = star(row);
  CHECK(rs.row_labels() == border);
  CHECK(rs.col_labels() == Labels{"i"});
  CHECK(rs.block(kZero, "i") == row.block("i", kZeroPrime).adjoint());
  CHECK(rs.block(kZeroPrime, "i") == row.block("i", kZero).adjoint());
  CHECK(rs.block("e", "i") == row.block("i", "e").adjoint());
}

TEST_CASE("is_star_unitary") {
  const auto id = is_star_unitary(belavkin_identity(channel_labels(2), 2));
  CHECK(id.pass);
  CHECK(id.left_defect == 0.0);
  CHECK(id.right_defect == 0.0);

  const BelavkinMatrix two(belavkin_identity(channel_labels(2), 2).matrix() * 2.0);
  CHECK_FALSE(is_star_unitary(two).pass);
}

TEST_CASE("from_slh: hand-substituted coefficient matrices") {
  const BelavkinMatrix vac = from_slh(SLHTriple::vacuum(channel_labels(3), 2));
  CHECK(norm_inf(vac.matrix().scalars() - Matrix::Identity(10, 10)) == 0.0);

  const BelavkinMatrix v1 = from_slh(SLHTriple::make(m1(1), m1(2), m1(0), 1));
  CHECK(v1.matrix().scalars() == rows3({{{1, -2, -2}, {0, 1, 2}, {0, 0, 1}}}));

  const BelavkinMatrix v2 = from_slh(SLHTriple::make(m1(I), m1(1), m1(1), 1));
  CHECK(norm_inf(v2.matrix().scalars() -
                 rows3({{{1, -I, -0.5 - I}, {0, I, 1}, {0, 0, 1}}})) < 1e-15);
}

TEST_CASE("from_slh: matches the entrywise oracle and is star-unitary") {
  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng = CounterRng::for_trial(3, t);
    const Index n = rng.uniform_int(1, 5);
    const Index d = rng.uniform_int(1, 3);
    const SLHTriple g = random_slh(rng, n, d);
    const BelavkinMatrix v = from_slh(g);
    const auto ud = static_cast<std::size_t>(d);
    const oracle::Mat ov =
        oracle::coefficient_matrix(oracle::from_eigen(g.S.scalars()),
                                   oracle::from_eigen(g.L.scalars()),
                                   oracle::from_eigen(g.H), ud);
    CHECK(oracle::diff(v.matrix().scalars(), ov) < 1e-13);

    const oracle::Mat ident = oracle::eye(ov.rows);
    const double left =
        oracle::max_abs(oracle::add(oracle::mul(ov, oracle::star(ov, ud)), ident, -1.0));
    const double right =
        oracle::max_abs(oracle::add(oracle::mul(oracle::star(ov, ud), ov), ident, -1.0));
    CHECK(left <= 1e-10);
    CHECK(right <= 1e-10);

    const auto report = is_star_unitary(v, 1e-10);
    CHECK(report.pass);
    CHECK(report.left_defect == doctest::Approx(left).epsilon(0.5).scale(1e-13));
  }
}

TEST_CASE("from_slh: rejects invalid triples") {
  Matrix s(2, 2);
  s << 1, 0, 0, 2;
  CHECK_THROWS_AS(from_slh(SLHTriple::make(s, Matrix::Zero(2, 1), m1(0), 1)),
                  NotUnitaryScattering);
  CHECK_THROWS_AS(from_slh(SLHTriple::make(m1(1), m1(0), m1(I), 1)),
                  NotHermitian);
}

TEST_CASE("to_slh: inverse of from_slh") {
  const SLHTriple g = to_slh(belavkin_identity(channel_labels(2), 3));
  CHECK(norm_inf(g.S.scalars() - Matrix::Identity(6, 6)) == 0.0);
  CHECK(norm_inf(g.L.scalars()) == 0.0);
  CHECK(norm_inf(g.H) == 0.0);

  for (std::uint64_t t = 0; t < 50; ++t) {
    CounterRng rng = CounterRng::for_trial(4, t);
    const Index n = rng.uniform_int(1, 4);
    const Index d = rng.uniform_int(1, 3);
    const SLHTriple orig = random_slh(rng, n, d);
    const SLHTriple back = to_slh(from_slh(orig));
    CHECK(norm_inf(back.S.scalars() - orig.S.scalars()) < 1e-12);
    CHECK(norm_inf(back.L.scalars() - orig.L.scalars()) < 1e-12);
    CHECK(norm_inf(back.H - orig.H) < 1e-12);
    CHECK(back.H == back.H.adjoint());
  }
}

TEST_CASE("to_slh: error paths") {
  const BelavkinMatrix two(belavkin_identity(channel_labels(1), 1).matrix() * 2.0);
  CHECK_THROWS_AS(to_slh(two), NotStarUnitary);

  // diag(i, 1, i) is star-unitary but its corners are not the identity.
  const Labels labels = belavkin_labels(channel_labels(1));
  const BelavkinMatrix corners(
      BlockMatrix(labels, labels, 1, rows3({{{I, 0, 0}, {0, 1, 0}, {0, 0, I}}})));
  REQUIRE(is_star_unitary(corners).pass);
  CHECK_THROWS_AS(to_slh(corners), MalformedStructure);

  // A star-unitary matrix with a non-zero first-column entry.
  Matrix shear = Matrix::Identity(3, 3);
  shear(1, 0) = 0.5;
  shear(2, 1) = -0.5;
  const BelavkinMatrix sheared(BlockMatrix(labels, labels, 1, shear));
  if (is_star_unitary(sheared).pass) {
    CHECK_THROWS_AS(to_slh(sheared), MalformedStructure);
  } else {
    CHECK_THROWS_AS(to_slh(sheared), NotStarUnitary);
  }
}

TEST_CASE("validate_slh: defects") {
  const auto vac = validate_slh(SLHTriple::vacuum(channel_labels(2), 2));
  CHECK(vac.pass());
  CHECK(vac.unitarity_left == 0.0);
  CHECK(vac.unitarity_right == 0.0);
  CHECK(vac.hermiticity == 0.0);

  Matrix s(2, 2);
  s << 1, 0, 0, 2;
  const auto bad_s = validate_slh(SLHTriple::make(s, Matrix::Zero(2, 1), m1(0), 1));
  CHECK_FALSE(bad_s.unitary);
  CHECK(bad_s.unitarity_left == doctest::Approx(3.0));

  Matrix h(2, 2);
  h << 0, I, I, 0;
  const auto bad_h = validate_slh(
      SLHTriple::make(Matrix::Identity(2, 2), Matrix::Zero(2, 2), h, 2));
  CHECK_FALSE(bad_h.hermitian);
  CHECK(bad_h.hermiticity == doctest::Approx(2.0));

  const SLHTriple g = SLHTriple::vacuum(channel_labels(2), 1);
  CHECK_THROWS_AS(validate_slh(g.S, BlockMatrix(channel_labels(3), Labels{kZeroPrime}, 1),
                               g.H),
                  DimensionMismatch);
  CHECK_THROWS_AS(validate_slh(g.S, g.L, Op::Zero(2, 2)), DimensionMismatch);
}

TEST_CASE("ito_correspondence_defects") {
  const auto zero = ito_correspondence_defects(ItoMatrix::zero(channel_labels(2), 2),
                                               ItoMatrix::zero(channel_labels(2), 2));
  CHECK(zero.product == 0.0);
  CHECK(zero.plain == 0.0);
  CHECK(zero.involution == 0.0);

  // Pure scattering: X P X = X, and the embedded square equals embed(X).
  const ItoMatrix x = ito_1x1(0, 0, 0, 1);
  CHECK(ito_correspondence_defects(x, x).product == 0.0);

  for (std::uint64_t t = 0; t < 100; ++t) {
    CounterRng rng = CounterRng::for_trial(5, t);
    const Index n = rng.uniform_int(1, 4);
    const Index d = rng.uniform_int(1, 4);
    const auto defects =
        ito_correspondence_defects(random_ito(rng, n, d), random_ito(rng, n, d));
    CHECK(defects.product <= 1e-12);
    CHECK(defects.plain <= 1e-12);
    CHECK(defects.involution <= 1e-12);
  }

  CHECK_THROWS_AS(ito_correspondence_defects(ItoMatrix::zero(channel_labels(1), 1),
                                             ItoMatrix::zero(channel_labels(2), 1)),
                  DimensionMismatch);
}

TEST_CASE("polynomial_ito_matrix") {
  CounterRng rng(6);
  const Index n = 2;
  const Index d = 2;
  const ItoMatrix x = random_ito(rng, n, d);
  const BelavkinMatrix xx = belavkin_embed(x);
  const Op x0 = gaussian_matrix(rng, d, d);

  const std::array<Complex, 2> linear{0.0, 1.0};
  CHECK(norm_inf(polynomial_ito_matrix(x0, xx, linear).matrix() - xx.matrix()) <
        1e-13);

  const std::array<Complex, 1> constant{3.5};
  CHECK(norm_inf(polynomial_ito_matrix(x0, xx, constant).matrix()) == 0.0);

  // f(z) = z^2 against the product rule x0 X + X x0 + X X in block form.
  const std::array<Complex, 3> square{0.0, 0.0, 1.0};
  const Matrix got = polynomial_ito_matrix(x0, xx, square).matrix().scalars();
  const Labels labels = xx.matrix().row_labels();
  Matrix shift = Matrix::Zero((n + 2) * d, (n + 2) * d);
  for (Index b = 0; b < n + 2; ++b) shift.block(b * d, b * d, d, d) = x0;
  const Matrix& xs = xx.matrix().scalars();
  CHECK(norm_inf(got - (shift * xs + xs * shift + xs * xs)) < 1e-12);

  // Same value reached from the Ito side: embed(x0 X + X x0 + X P X).
  const BlockMatrix& xi = x.matrix();
  Matrix shift_ito = Matrix::Zero((n + 1) * d, (n + 1) * d);
  for (Index b = 0; b < n + 1; ++b) shift_ito.block(b * d, b * d, d, d) = x0;
  const ItoMatrix projector = ito_projector(x.channels(), d);
  const BlockMatrix& p = projector.matrix();
  const Matrix ito_side = shift_ito * xi.scalars() + xi.scalars() * shift_ito +
                          xi.scalars() * p.scalars() * xi.scalars();
  const ItoMatrix product(BlockMatrix(xi.row_labels(), xi.col_labels(), d, ito_side));
  CHECK(norm_inf(belavkin_embed(product).matrix().scalars() - got) < 1e-12);

  CHECK_THROWS_AS(polynomial_ito_matrix(Op::Zero(3, 3), xx, square),
                  DimensionMismatch);
}
