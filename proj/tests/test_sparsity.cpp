#include "dkstp/rng.hpp"
#include "dkstp/sparsity.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace dkstp;

TEST_CASE("dct basis: orthonormal on a dimension grid") {
  for (Index n : {2, 3, 4, 5, 8, 16, 64, 256, 1024, 4096}) {
    const DctBasis basis(n);
    const Matrix& t = basis.matrix();
    const Matrix gram = t.transpose() * t;
    CHECK((gram - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("dct basis: matches the cosine formula") {
  for (Index n : {2, 3, 4, 8, 64}) {
    const DctBasis basis(n);
    CHECK((basis.matrix() - oracle::dct_matrix(n)).cwiseAbs().maxCoeff() <=
          1e-14);
  }
}

TEST_CASE("dct basis: unit coefficient vectors select single columns") {
  const DctBasis basis(4);
  Vector e0 = Vector::Zero(4), e1 = Vector::Zero(4);
  e0[0] = 1.0;
  e1[1] = 1.0;
  const Vector c0 = basis.synthesize(e0);
  const Vector c1 = basis.synthesize(e1);
  const Matrix want = oracle::dct_matrix(4);
  CHECK((c0 - want.col(0)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((c1 - want.col(1)).cwiseAbs().maxCoeff() <= 1e-14);
  // The zero-frequency column is the constant 1/2 at n = 4.
  CHECK((c0.array() - 0.5).abs().maxCoeff() <= 1e-15);
}

TEST_CASE("dct analyze: constant signal concentrates on the first coefficient") {
  const DctBasis basis(16);
  const Vector s = basis.analyze(Vector::Constant(16, 3.25));
  CHECK(s[0] == doctest::Approx(3.25 * 4.0).epsilon(1e-12));  // 3.25 * sqrt(16)
  CHECK(s.tail(15).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("dct analyze: energy is preserved") {
  const DctBasis basis(33);
  Xoshiro256pp rng(4);
  for (int t = 0; t < 100; ++t) {
    Vector x(33);
    for (Index i = 0; i < 33; ++i) x[i] = rng.normal();
    const Vector s = basis.analyze(x);
    CHECK(s.norm() == doctest::Approx(x.norm()).epsilon(1e-10));
    CHECK((basis.synthesize(s) - x).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("dct analyze: smooth ramp compresses into the low band") {
  const DctBasis basis(64);
  Vector ramp(64);
  for (Index i = 0; i < 64; ++i) ramp[i] = double(i) / 63.0;
  const Vector s = basis.analyze(ramp);
  const double frac = s.head(8).squaredNorm() / s.squaredNorm();
  CHECK(frac >= 0.95);
  CHECK(frac == doctest::Approx(0.99992343682838392).epsilon(1e-9));
}

TEST_CASE("dct basis: per-dimension cache is shared") {
  const DctBasis a(64), b(64), c(32);
  CHECK(&a.matrix() == &b.matrix());
  CHECK(&a.matrix() != &c.matrix());
}

TEST_CASE("dct basis: block operations act column by column") {
  const DctBasis basis(12);
  Xoshiro256pp rng(9);
  Matrix coeffs(12, 3);
  for (Index j = 0; j < 3; ++j)
    for (Index i = 0; i < 12; ++i) coeffs(i, j) = rng.normal();
  const Matrix x = basis.synthesize_block(coeffs);
  for (Index j = 0; j < 3; ++j)
    CHECK((x.col(j) - basis.synthesize(coeffs.col(j))).cwiseAbs().maxCoeff() <=
          1e-14);
  const Matrix back = basis.analyze_block(x);
  CHECK((back - coeffs).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("dct basis: dimension mismatches are rejected") {
  const DctBasis basis(8);
  CHECK_THROWS_AS(basis.synthesize(Vector::Zero(7)), std::invalid_argument);
  CHECK_THROWS_AS(basis.analyze(Vector::Zero(9)), std::invalid_argument);
  CHECK_THROWS_AS(DctBasis(0), std::invalid_argument);
}
