#pragma once

#include "dkstp/types.hpp"

#include <memory>

namespace dkstp {

// Orthonormal 1-D DCT-II synthesis basis.  Column k of the matrix is the
// k-th cosine mode:
//   theta(j, k) = a_k * cos(pi * (2j + 1) * k / (2n)),
//   a_0 = sqrt(1/n), a_k = sqrt(2/n) for k >= 1.
// synthesize maps coefficients to samples (x = Theta s); analyze is the
// inverse/adjoint (s = Theta^T x).  Matrices are cached per dimension and
// shared between instances.
class DctBasis {
 public:
  explicit DctBasis(Index dim);

  Index dim() const { return theta_->rows(); }
  const Matrix& matrix() const { return *theta_; }

  Vector synthesize(const Vector& coeffs) const;
  Vector analyze(const Vector& samples) const;
  Matrix synthesize_block(const Matrix& coeff_cols) const;
  Matrix analyze_block(const Matrix& sample_cols) const;

 private:
  std::shared_ptr<const Matrix> theta_;
};

}  // namespace dkstp
