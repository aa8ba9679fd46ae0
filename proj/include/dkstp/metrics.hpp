#pragma once

#include "dkstp/image.hpp"
#include "dkstp/types.hpp"

#include <cstdint>
#include <vector>

namespace dkstp {

struct QualityReport {
  double psnr_db = 0.0;
  bool psnr_infinite = false;
  double mse = 0.0;
  double mae = 0.0;
};

// PSNR/MSE/MAE over 8-bit pixel values: MSE = mean squared difference,
// PSNR = 10*log10(255^2 / MSE) (infinite flag when MSE == 0), MAE = mean
// absolute difference.
QualityReport quality(const GrayImage& original, const GrayImage& recovered);

// Three-term reconstruction error split for grouped sensing.  With
// xbar = equalize(group_sum(x)) and the group-sum signals X = x^g of both
// arguments:
//   distribution_error = ||x_star - xbar||_1
//   cs_error           = ||x^g - x^g_star||_1
//   original_error     = ||xbar - x||_1
//   total_l2           = ||x_star - x||_2
// The safe bound (distribution + 2*cs + original) always dominates total_l2
// and is enforced; the plain three-term sum is reported as data only.
struct ErrorDecomposition {
  double distribution_error = 0.0;
  double cs_error = 0.0;
  double original_error = 0.0;
  double total_l2 = 0.0;
  double bound_stated = 0.0;  // distribution + cs + original, reported not enforced
  double bound_safe = 0.0;   // distribution + 2*cs + original, enforced
  bool stated_bound_holds = false;
};

ErrorDecomposition decompose_error(const Vector& x, const Vector& x_star,
                                   Index gamma);

// Per-pixel field |x - xbar| of the whole image (vectorized column-major as
// one block), with a 256-bin histogram of the signed error over [-1, 1].
struct ErrorMap {
  Matrix heatmap;  // height x width, values in [0, 1]
  std::vector<std::int64_t> histogram;
  double mae = 0.0;
};

ErrorMap mean_reconstruction_error_map(const GrayImage& image, Index gamma);

}  // namespace dkstp
