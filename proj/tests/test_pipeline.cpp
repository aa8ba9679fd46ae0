#include "dkstp/metrics.hpp"
#include "dkstp/pipeline.hpp"
#include "dkstp/rng.hpp"

#include "doctest.h"
#include "oracles.hpp"

using namespace dkstp;

namespace {

GrayImage random_image(Index w, Index h, std::uint64_t seed) {
  GrayImage img = make_image(w, h);
  Xoshiro256pp rng(seed);
  for (auto& px : img.pixels) px = std::uint8_t(rng.next() % 256);
  return img;
}

SolverConfig fast_bp(Index iters = 600) {
  SolverConfig cfg;
  cfg.max_iters = iters;
  return cfg;
}

}  // namespace

TEST_CASE("block layout: tiling must be exact") {
  BlockLayout bad{100, 100, 32, 32};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  BlockLayout good{128, 96, 32, 32};
  good.validate();
  CHECK(good.blocks_x() == 4);
  CHECK(good.blocks_y() == 3);
  CHECK(good.block_count() == 12);
  CHECK(good.p() == 1024);
}

TEST_CASE("vectorization: column-major within a block, blocks column-major") {
  // 4x4 image with pixel value = row-major position, 2x2 blocks.
  GrayImage img = make_image(4, 4);
  for (Index y = 0; y < 4; ++y)
    for (Index x = 0; x < 4; ++x) img.at(x, y) = std::uint8_t(y * 4 + x);
  const BlockLayout layout{4, 4, 2, 2};

  // Block 0 is the top-left tile; within it, columns stack first.
  const Vector b0 = vectorize_block(img, layout, 0);
  REQUIRE(b0.size() == 4);
  CHECK(b0[0] == doctest::Approx(0.0 / 255.0));
  CHECK(b0[1] == doctest::Approx(4.0 / 255.0));
  CHECK(b0[2] == doctest::Approx(1.0 / 255.0));
  CHECK(b0[3] == doctest::Approx(5.0 / 255.0));

  // Block 1 is the tile *below* block 0 (block grid is column-major too).
  const Vector b1 = vectorize_block(img, layout, 1);
  CHECK(b1[0] == doctest::Approx(8.0 / 255.0));
  CHECK(b1[1] == doctest::Approx(12.0 / 255.0));
  CHECK(b1[2] == doctest::Approx(9.0 / 255.0));
  CHECK(b1[3] == doctest::Approx(13.0 / 255.0));

  // Block 2 is the top tile of the second block column.
  const Vector b2 = vectorize_block(img, layout, 2);
  CHECK(b2[0] == doctest::Approx(2.0 / 255.0));

  const Matrix all = vectorize_all(img, layout);
  REQUIRE(all.rows() == 4);
  REQUIRE(all.cols() == 4);
  for (Index b = 0; b < 4; ++b)
    CHECK((all.col(b) - vectorize_block(img, layout, b)).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("place_block: inverse of vectorization, with clamp and rounding") {
  GrayImage img = random_image(8, 8, 5);
  const BlockLayout layout{8, 8, 4, 4};
  GrayImage out = make_image(8, 8);
  for (Index b = 0; b < layout.block_count(); ++b)
    place_block(out, layout, b, vectorize_block(img, layout, b));
  CHECK(out.pixels == img.pixels);

  Vector v = Vector::Zero(16);
  v[0] = -0.25;       // clamps to 0
  v[1] = 1.75;        // clamps to 1 -> 255
  v[2] = 0.5;         // rounds to 128
  place_block(out, layout, 0, v);
  CHECK(out.at(0, 0) == 0);
  CHECK(out.at(0, 1) == 255);
  CHECK(out.at(0, 2) == 128);
}

TEST_CASE("measurements_for: rounding rules per method") {
  CHECK(measurements_for(0.25, 1024, Method::CS, 1) == 256);
  CHECK(measurements_for(1e-9, 1024, Method::CS, 1) == 1);      // at least one
  CHECK(measurements_for(1e-9, 1024, Method::DKSTPCS, 2) == 1);
  CHECK(measurements_for(0.5, 10, Method::CS, 1) == 5);
  // Grouped identity sensing rounds to a positive multiple of gamma.
  CHECK(measurements_for(0.5, 10, Method::STPCS, 2) == 6);  // 2*round(2.5)
  CHECK(measurements_for(0.1, 1024, Method::STPCS, 2) == 102);
  CHECK(measurements_for(1e-9, 1024, Method::STPCS, 4) == 4);
}

TEST_CASE("compress: geometry and shapes at a quarter ratio") {
  const GrayImage img = random_image(256, 256, 7);
  const SensingScheme scheme = make_scheme(
      Method::DKSTPCS, MatrixKind::Gaussian, 2, 99, Scaling::InvSqrtRows, 4096,
      2048);
  const BlockLayout layout{256, 256, 64, 64};
  const CompressedPacket packet = compress(img, scheme, layout, 0.5);
  CHECK(packet.m == 2048);
  CHECK(packet.blocks.rows() == 2048);
  CHECK(packet.blocks.cols() == 16);
  CHECK(packet.scheme.method == Method::DKSTPCS);
  CHECK(packet.scheme.descriptor.rows == 2048);
  CHECK(packet.scheme.descriptor.cols == 2048);
  CHECK(packet.layout.p() == 4096);
}

TEST_CASE("compress: gamma one canonicalizes to plain sensing bit-for-bit") {
  const GrayImage img = random_image(64, 64, 9);
  const BlockLayout layout{64, 64, 32, 32};
  const SensingScheme dk = make_scheme(Method::DKSTPCS, MatrixKind::Gaussian,
                                       1, 1234, Scaling::InvSqrtRows, 1024, 256);
  const SensingScheme cs = make_scheme(Method::CS, MatrixKind::Gaussian, 1,
                                       1234, Scaling::InvSqrtRows, 1024, 256);
  const CompressedPacket a = compress(img, dk, layout, 0.25);
  const CompressedPacket b = compress(img, cs, layout, 0.25);
  CHECK(a.scheme.method == Method::CS);
  CHECK(a.scheme.gamma == 1);
  CHECK((a.blocks.array() == b.blocks.array()).all());
}

TEST_CASE("compress: measurements equal the operator applied to the vectorized blocks") {
  const GrayImage img = random_image(32, 32, 11);
  const BlockLayout layout{32, 32, 16, 16};
  const SensingScheme scheme = make_scheme(
      Method::STPCS, MatrixKind::Bernoulli, 2, 77, Scaling::InvSqrtRows, 256, 64);
  const CompressedPacket packet = compress(img, scheme, layout, 0.25);
  const SensingOperator op(packet.scheme, 256, packet.m);
  const Matrix want = op.apply_block(vectorize_all(img, layout));
  CHECK((packet.blocks - want).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("reconstruct: group-constant image is recovered near-perfectly") {
  // Rows paired so each vertical 2-group is constant; the group-sum signal
  // is then exactly representable and a 0.9 ratio makes the solve
  // overdetermined and consistent.
  GrayImage img = make_image(64, 64);
  Xoshiro256pp rng(13);
  for (Index y = 0; y < 64; y += 2)
    for (Index x = 0; x < 64; ++x) {
      const std::uint8_t v = std::uint8_t(rng.next() % 256);
      img.at(x, y) = v;
      img.at(x, y + 1) = v;
    }
  const BlockLayout layout{64, 64, 32, 32};
  const SensingScheme scheme = make_scheme(
      Method::DKSTPCS, MatrixKind::Gaussian, 2, 21, Scaling::InvSqrtRows, 1024,
      measurements_for(0.9, 1024, Method::DKSTPCS, 2));
  const CompressedPacket packet = compress(img, scheme, layout, 0.9);
  const DctBasis basis(512);
  const ReconstructionReport rep = reconstruct(packet, basis, fast_bp());
  const QualityReport q = quality(img, rep.image);
  const bool near_lossless = q.psnr_infinite || q.psnr_db >= 60.0;
  CHECK(near_lossless);
  for (const BlockSolveInfo& info : rep.blocks) CHECK(info.converged);
}

TEST_CASE("reconstruct: full-ratio plain sensing is lossless after rounding") {
  const GrayImage img = random_image(32, 32, 15);
  const BlockLayout layout{32, 32, 32, 32};
  const SensingScheme scheme = make_scheme(
      Method::CS, MatrixKind::Gaussian, 1, 31, Scaling::InvSqrtRows, 1024, 1024);
  const CompressedPacket packet = compress(img, scheme, layout, 1.0);
  REQUIRE(packet.m == 1024);
  const DctBasis basis(1024);
  const ReconstructionReport rep = reconstruct(packet, basis, SolverConfig{});
  CHECK(rep.image.pixels == img.pixels);
}

TEST_CASE("reconstruct: deterministic across identical runs") {
  const GrayImage img = random_image(64, 64, 17);
  const BlockLayout layout{64, 64, 32, 32};
  const SensingScheme scheme = make_scheme(
      Method::DKSTPCS, MatrixKind::Gaussian, 2, 41, Scaling::InvSqrtRows, 1024,
      256);
  const CompressedPacket packet = compress(img, scheme, layout, 0.25);
  const DctBasis basis(512);
  const ReconstructionReport a = reconstruct(packet, basis, fast_bp(200));
  const ReconstructionReport b = reconstruct(packet, basis, fast_bp(200));
  CHECK(a.image.pixels == b.image.pixels);
  CHECK((a.values.array() == b.values.array()).all());
}

TEST_CASE("reconstruct: basis dimension must match the solve domain") {
  const GrayImage img = random_image(32, 32, 19);
  const BlockLayout layout{32, 32, 32, 32};
  const SensingScheme scheme = make_scheme(
      Method::DKSTPCS, MatrixKind::Gaussian, 2, 43, Scaling::InvSqrtRows, 1024,
      256);
  const CompressedPacket packet = compress(img, scheme, layout, 0.25);
  const DctBasis wrong(1024);  // solve domain is p / gamma = 512
  CHECK_THROWS_AS(reconstruct(packet, wrong, fast_bp()), std::invalid_argument);
}

TEST_CASE("reconstruct: report values are clamped and pre-quantization") {
  const GrayImage img = random_image(32, 32, 23);
  const BlockLayout layout{32, 32, 16, 16};
  const SensingScheme scheme = make_scheme(
      Method::CS, MatrixKind::Gaussian, 1, 47, Scaling::InvSqrtRows, 256, 128);
  const CompressedPacket packet = compress(img, scheme, layout, 0.5);
  const DctBasis basis(256);
  const ReconstructionReport rep = reconstruct(packet, basis, fast_bp());
  REQUIRE(rep.values.rows() == 256);
  REQUIRE(rep.values.cols() == 4);
  CHECK(rep.values.minCoeff() >= 0.0);
  CHECK(rep.values.maxCoeff() <= 1.0);
  // Quantizing the reported values reproduces the image exactly.
  GrayImage requant = make_image(32, 32);
  for (Index b = 0; b < 4; ++b)
    place_block(requant, layout, b, rep.values.col(b));
  CHECK(requant.pixels == rep.image.pixels);
  REQUIRE(rep.blocks.size() == 4);
  for (Index b = 0; b < 4; ++b) CHECK(rep.blocks[b].index == b);
}

TEST_CASE("inject_noise: zero variance is the identity") {
  const GrayImage img = random_image(16, 16, 29);
  const GrayImage out = inject_noise(img, NoiseSpec{0.0, 999});
  CHECK(out.pixels == img.pixels);
}

TEST_CASE("inject_noise: empirical variance tracks the specification") {
  const GrayImage img = make_image(256, 256, 128);
  const double variance = 0.01;
  const GrayImage out = inject_noise(img, NoiseSpec{variance, 4242});
  double sum = 0.0, sum2 = 0.0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const double d = (double(out.pixels[i]) - double(img.pixels[i])) / 255.0;
    sum += d;
    sum2 += d * d;
  }
  const double n = double(img.pixels.size());
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(var > 0.9 * variance);
  CHECK(var < 1.1 * variance);
  CHECK(std::abs(mean) < 0.002);
}

TEST_CASE("inject_noise: deterministic per seed and clamped") {
  const GrayImage img = make_image(32, 32, 0);  // black
  const GrayImage a = inject_noise(img, NoiseSpec{0.01, 7});
  const GrayImage b = inject_noise(img, NoiseSpec{0.01, 7});
  const GrayImage c = inject_noise(img, NoiseSpec{0.01, 8});
  CHECK(a.pixels == b.pixels);
  CHECK(a.pixels != c.pixels);
  // Negative excursions clamp to zero rather than wrapping.
  for (std::uint8_t px : a.pixels) CHECK(px <= 255);
}
