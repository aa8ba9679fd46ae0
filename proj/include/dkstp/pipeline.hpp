#pragma once

#include "dkstp/image.hpp"
#include "dkstp/measurement.hpp"
#include "dkstp/solver.hpp"
#include "dkstp/sparsity.hpp"

#include <vector>

namespace dkstp {

// Blockwise processing geometry.  Blocks must tile the image exactly (no
// padding).  Vectorization is column-major within a block, and blocks are
// ordered column-major across the block grid.
struct BlockLayout {
  Index image_w = 0;
  Index image_h = 0;
  Index block_w = 0;
  Index block_h = 0;

  Index blocks_x() const { return image_w / block_w; }
  Index blocks_y() const { return image_h / block_h; }
  Index block_count() const { return blocks_x() * blocks_y(); }
  Index p() const { return block_w * block_h; }
  void validate() const;
};

// The transmitted object: geometry, the scheme descriptor (the dense matrix
// is regenerated from it), and one measurement vector per block.
struct CompressedPacket {
  std::uint8_t format_version = 1;
  BlockLayout layout;
  SensingScheme scheme;
  Index m = 0;
  Matrix blocks;  // m x block_count, one column per block
};

struct NoiseSpec {
  double variance = 0.001;
  std::uint64_t seed = 0;
};

// Measurement count for a compression ratio: round(cr*p), at least 1.  The
// grouped-identity scheme needs gamma | m, so its count is rounded to the
// nearest positive multiple of gamma instead.
Index measurements_for(double cr, Index p, Method method, Index gamma);

// Block vectorization on [0,1]-normalized pixels (value/255).
Vector vectorize_block(const GrayImage& image, const BlockLayout& layout,
                       Index block_index);
Matrix vectorize_all(const GrayImage& image, const BlockLayout& layout);
// Clamps values to [0,1] and quantizes to 8 bits into the target block.
void place_block(GrayImage& image, const BlockLayout& layout, Index block_index,
                 const Vector& values);

// Measures every block with one shared operator built from the scheme.  The
// descriptor's shape fields are recomputed from (p, m); kind/seed/scaling are
// taken from the passed scheme.  gamma == 1 canonicalizes the method to CS in
// the packet (the schemes coincide mathematically; this keeps degenerate
// packets byte-identical).
CompressedPacket compress(const GrayImage& image, const SensingScheme& scheme,
                          const BlockLayout& layout, double cr);

struct BlockSolveInfo {
  Index index = 0;
  bool converged = false;
  Index iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
};

struct ReconstructionReport {
  GrayImage image;
  Matrix values;  // p x block_count, clamped [0,1], before 8-bit quantization
  std::vector<BlockSolveInfo> blocks;
};

// Recovers every block: solve min ||s||_1 s.t. (Phi Theta) s = y in the
// scheme's solve domain, synthesize, re-expand group sums by equalization
// (grouped schemes), clamp, quantize at output only.  basis.dim must equal
// p/gamma for the dimension-keeping scheme and p otherwise.  Non-converged
// blocks keep their best iterate and are flagged in `blocks`.
ReconstructionReport reconstruct(const CompressedPacket& packet,
                                 const DctBasis& basis,
                                 const SolverConfig& cfg);

// Adds i.i.d. Gaussian noise (mean 0, spec.variance) to [0,1]-scaled pixels,
// clamps to [0,1], and re-quantizes.  variance == 0 returns the input
// unchanged.  Deterministic per seed: one stream, pixels in row-major order.
GrayImage inject_noise(const GrayImage& image, const NoiseSpec& spec);

}  // namespace dkstp
