#include "dkstp/metrics.hpp"

#include "dkstp/stp.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace dkstp {

QualityReport quality(const GrayImage& original, const GrayImage& recovered) {
  require(original.same_shape(recovered), "quality: image dimensions differ");
  const std::size_t n = original.pixels.size();
  require(n > 0, "quality: empty images");

  double se = 0.0, ae = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(original.pixels[i]) -
                     static_cast<double>(recovered.pixels[i]);
    se += d * d;
    ae += std::abs(d);
  }

  QualityReport q;
  q.mse = se / static_cast<double>(n);
  q.mae = ae / static_cast<double>(n);
  q.psnr_infinite = q.mse == 0.0;
  q.psnr_db = q.psnr_infinite
                  ? std::numeric_limits<double>::infinity()
                  : 10.0 * std::log10(255.0 * 255.0 / q.mse);
  return q;
}

ErrorDecomposition decompose_error(const Vector& x, const Vector& x_star,
                                   Index gamma) {
  require(x.size() == x_star.size(), "decompose_error: dimension mismatch");
  require(gamma >= 1 && x.size() % gamma == 0,
          "decompose_error: gamma must divide the signal length");

  const GroupSumSignal gx = group_sum(x, gamma);
  const GroupSumSignal gs = group_sum(x_star, gamma);
  const Vector xbar = equalize(gx);

  ErrorDecomposition d;
  d.distribution_error = (x_star - xbar).lpNorm<1>();
  d.cs_error = (gx.values - gs.values).lpNorm<1>();
  d.original_error = (xbar - x).lpNorm<1>();
  d.total_l2 = (x_star - x).norm();
  d.bound_stated = d.distribution_error + d.cs_error + d.original_error;
  d.bound_safe = d.distribution_error + 2.0 * d.cs_error + d.original_error;
  d.stated_bound_holds = d.total_l2 <= d.bound_stated + 1e-12;

  // Triangle-inequality consequence; a violation means a computation bug.
  if (d.total_l2 > d.bound_safe + 1e-9 * (1.0 + d.bound_safe))
    throw std::logic_error("decompose_error: safe error bound violated");
  return d;
}

ErrorMap mean_reconstruction_error_map(const GrayImage& image, Index gamma) {
  require(image.width >= 1 && image.height >= 1, "error map: empty image");
  const Index n = image.width * image.height;
  require(gamma >= 1 && n % gamma == 0,
          "error map: gamma " + std::to_string(gamma) +
              " does not divide pixel count " + std::to_string(n));

  // Whole image as one column-major block.
  Vector x(n);
  Index k = 0;
  for (Index cx = 0; cx < image.width; ++cx)
    for (Index cy = 0; cy < image.height; ++cy) x[k++] = image.at(cx, cy) / 255.0;

  const Vector xbar = equalize(group_sum(x, gamma));

  ErrorMap map;
  map.heatmap.resize(image.height, image.width);
  map.histogram.assign(256, 0);
  double ae = 0.0;
  k = 0;
  for (Index cx = 0; cx < image.width; ++cx)
    for (Index cy = 0; cy < image.height; ++cy, ++k) {
      const double err = x[k] - xbar[k];
      map.heatmap(cy, cx) = std::abs(err);
      ae += std::abs(err);
      const double t = (err + 1.0) * 128.0;  // [-1,1] -> [0,256)
      const Index bin =
          std::min<Index>(255, std::max<Index>(0, static_cast<Index>(t)));
      ++map.histogram[static_cast<std::size_t>(bin)];
    }
  map.mae = ae / static_cast<double>(n);
  return map;
}

}  // namespace dkstp
