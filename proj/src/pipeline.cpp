#include "dkstp/pipeline.hpp"

#include "dkstp/rng.hpp"
#include "dkstp/stp.hpp"

#include <cmath>

namespace dkstp {

void BlockLayout::validate() const {
  require(image_w >= 1 && image_h >= 1 && block_w >= 1 && block_h >= 1,
          "block layout: dimensions must be >= 1");
  require(image_w % block_w == 0,
          "block layout: block width " + std::to_string(block_w) +
              " does not divide image width " + std::to_string(image_w));
  require(image_h % block_h == 0,
          "block layout: block height " + std::to_string(block_h) +
              " does not divide image height " + std::to_string(image_h));
}

Index measurements_for(double cr, Index p, Method method, Index gamma) {
  require(cr > 0.0 && cr <= 1.0, "measurements_for: cr must be in (0, 1]");
  require(p >= 1, "measurements_for: empty block");
  if (method == Method::STPCS) {
    require(gamma >= 1, "measurements_for: gamma must be >= 1");
    const Index groups = static_cast<Index>(
        std::llround(cr * static_cast<double>(p) / static_cast<double>(gamma)));
    return std::max<Index>(1, groups) * gamma;
  }
  return std::max<Index>(1, static_cast<Index>(
                                std::llround(cr * static_cast<double>(p))));
}

Vector vectorize_block(const GrayImage& image, const BlockLayout& layout,
                       Index block_index) {
  layout.validate();
  require(block_index >= 0 && block_index < layout.block_count(),
          "vectorize_block: block index out of range");
  const Index by = block_index % layout.blocks_y();
  const Index bx = block_index / layout.blocks_y();
  Vector x(layout.p());
  Index k = 0;
  for (Index lx = 0; lx < layout.block_w; ++lx)
    for (Index ly = 0; ly < layout.block_h; ++ly)
      x[k++] =
          image.at(bx * layout.block_w + lx, by * layout.block_h + ly) / 255.0;
  return x;
}

Matrix vectorize_all(const GrayImage& image, const BlockLayout& layout) {
  layout.validate();
  require(image.width == layout.image_w && image.height == layout.image_h,
          "vectorize_all: image does not match layout");
  Matrix x(layout.p(), layout.block_count());
  for (Index b = 0; b < layout.block_count(); ++b)
    x.col(b) = vectorize_block(image, layout, b);
  return x;
}

void place_block(GrayImage& image, const BlockLayout& layout, Index block_index,
                 const Vector& values) {
  require(values.size() == layout.p(), "place_block: value length mismatch");
  const Index by = block_index % layout.blocks_y();
  const Index bx = block_index / layout.blocks_y();
  Index k = 0;
  for (Index lx = 0; lx < layout.block_w; ++lx)
    for (Index ly = 0; ly < layout.block_h; ++ly) {
      const double v = std::min(1.0, std::max(0.0, values[k++]));
      image.at(bx * layout.block_w + lx, by * layout.block_h + ly) =
          static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
}

CompressedPacket compress(const GrayImage& image, const SensingScheme& scheme,
                          const BlockLayout& layout, double cr) {
  layout.validate();
  require(image.width == layout.image_w && image.height == layout.image_h,
          "compress: image does not match layout");

  const Index p = layout.p();
  // gamma == 1 grouped schemes coincide with plain CS; canonicalize so the
  // packet (and everything downstream) is byte-identical.
  const Method method =
      (scheme.gamma == 1) ? Method::CS : scheme.method;
  const Index m = measurements_for(cr, p, method, scheme.gamma);

  CompressedPacket pkt;
  pkt.layout = layout;
  pkt.scheme = make_scheme(method, scheme.descriptor.kind, scheme.gamma,
                           scheme.descriptor.seed, scheme.descriptor.scaling, p,
                           m);
  pkt.m = m;

  const SensingOperator op(pkt.scheme, p, m);
  pkt.blocks = op.apply_block(vectorize_all(image, layout));
  return pkt;
}

ReconstructionReport reconstruct(const CompressedPacket& packet,
                                 const DctBasis& basis,
                                 const SolverConfig& cfg) {
  packet.layout.validate();
  const Index p = packet.layout.p();
  const Index nb = packet.layout.block_count();
  require(packet.blocks.rows() == packet.m && packet.blocks.cols() == nb,
          "reconstruct: packet payload shape mismatch");
  require(packet.blocks.allFinite(), "reconstruct: packet has non-finite values");

  const SensingOperator op(packet.scheme, p, packet.m);
  require(basis.dim() == op.solve_dim(),
          "reconstruct: basis dimension " + std::to_string(basis.dim()) +
              " != solve dimension " + std::to_string(op.solve_dim()));

  LinearSystem sys;
  sys.rows = packet.m;
  sys.cols = basis.dim();
  sys.mul = [&](const Matrix& s) {
    return op.apply_solve_domain(basis.synthesize_block(s));
  };
  sys.mul_adjoint = [&](const Matrix& w) {
    return basis.analyze_block(op.apply_solve_domain_adjoint(w));
  };
  // Theta is orthonormal, so the composed Gram equals the operator's.
  sys.gram = [&]() { return op.gram(); };
  sys.dense = [&]() { return op.apply_solve_domain(basis.matrix()); };

  const std::vector<SolveReport> reports =
      solve_batch(sys, packet.blocks, cfg);

  ReconstructionReport out;
  out.image = make_image(packet.layout.image_w, packet.layout.image_h);
  out.values.resize(p, nb);
  out.blocks.resize(static_cast<std::size_t>(nb));

  const Index gamma = packet.scheme.gamma;
  for (Index b = 0; b < nb; ++b) {
    const Vector synth = basis.synthesize(reports[b].solution);
    Vector xhat;
    if (packet.scheme.method == Method::DKSTPCS) {
      GroupSumSignal g;
      g.gamma = gamma;
      g.values = synth;
      xhat = equalize(g);
    } else {
      xhat = synth;
    }
    out.values.col(b) = xhat.cwiseMax(0.0).cwiseMin(1.0);
    place_block(out.image, packet.layout, b, xhat);

    BlockSolveInfo& info = out.blocks[static_cast<std::size_t>(b)];
    info.index = b;
    info.converged = reports[b].converged;
    info.iterations = reports[b].iterations;
    info.primal_residual = reports[b].primal_residual;
    info.dual_residual = reports[b].dual_residual;
  }
  return out;
}

GrayImage inject_noise(const GrayImage& image, const NoiseSpec& spec) {
  require(spec.variance >= 0.0 && std::isfinite(spec.variance),
          "inject_noise: variance must be finite and >= 0");
  if (spec.variance == 0.0) return image;

  GrayImage out = image;
  Xoshiro256pp rng(spec.seed);
  const double sd = std::sqrt(spec.variance);
  for (auto& px : out.pixels) {
    const double v = px / 255.0 + sd * rng.normal();
    const double c = std::min(1.0, std::max(0.0, v));
    px = static_cast<std::uint8_t>(std::lround(c * 255.0));
  }
  return out;
}

}  // namespace dkstp
