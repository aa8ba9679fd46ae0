#include "dkstp/sparsity.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace dkstp {

namespace {

std::shared_ptr<const Matrix> build_or_fetch(Index n) {
  static std::mutex mu;
  static std::map<Index, std::weak_ptr<const Matrix>> cache;

  std::lock_guard<std::mutex> lock(mu);
  if (auto hit = cache[n].lock()) return hit;

  require(static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) <=
              kMaxMaterializedElements,
          "dct basis: dimension " + std::to_string(n) + " exceeds limit");
  auto theta = std::make_shared<Matrix>(n, n);
  const double a0 = std::sqrt(1.0 / static_cast<double>(n));
  const double ak = std::sqrt(2.0 / static_cast<double>(n));
  for (Index k = 0; k < n; ++k) {
    const double alpha = (k == 0) ? a0 : ak;
    for (Index j = 0; j < n; ++j) {
      (*theta)(j, k) = alpha * std::cos(std::numbers::pi * (2.0 * j + 1.0) * k /
                                        (2.0 * static_cast<double>(n)));
    }
  }
  cache[n] = theta;
  return theta;
}

}  // namespace

DctBasis::DctBasis(Index dim) {
  require(dim >= 1, "dct basis: dimension must be >= 1");
  theta_ = build_or_fetch(dim);
}

Vector DctBasis::synthesize(const Vector& coeffs) const {
  require(coeffs.size() == dim(), "dct basis: coefficient length mismatch");
  return *theta_ * coeffs;
}

Vector DctBasis::analyze(const Vector& samples) const {
  require(samples.size() == dim(), "dct basis: sample length mismatch");
  return theta_->transpose() * samples;
}

Matrix DctBasis::synthesize_block(const Matrix& coeff_cols) const {
  require(coeff_cols.rows() == dim(), "dct basis: coefficient rows mismatch");
  return *theta_ * coeff_cols;
}

Matrix DctBasis::analyze_block(const Matrix& sample_cols) const {
  require(sample_cols.rows() == dim(), "dct basis: sample rows mismatch");
  return theta_->transpose() * sample_cols;
}

}  // namespace dkstp
