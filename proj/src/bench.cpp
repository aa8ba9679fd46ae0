#include "dkstp/bench.hpp"

#include "dkstp/metrics.hpp"
#include "dkstp/rng.hpp"
#include "dkstp/threading.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace dkstp {

namespace {

double snap(double v) { return std::round(v * 1e6) / 1e6; }

double parse_positive_real(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail_invalid("cr grid: bad number '" + s + "'");
  }
  if (used != s.size()) fail_invalid("cr grid: bad number '" + s + "'");
  return v;
}

void check_cr(double v) {
  require(v > 0.0 && v <= 1.0,
          "cr grid: value " + std::to_string(v) + " outside (0, 1]");
}

// Uniform block indices drawn with replacement (the grid may hold fewer
// blocks than requested draws; repeats simply reweight a block).
std::vector<Index> sample_blocks(Index total, Index want, std::uint64_t seed) {
  require(total >= 1, "mae sweep: image has no blocks");
  require(want >= 1, "mae sweep: block sample count must be >= 1");
  Xoshiro256pp rng(seed);
  std::vector<Index> out(static_cast<std::size_t>(want));
  for (Index i = 0; i < want; ++i) {
    const Index j = std::min<Index>(
        total - 1, static_cast<Index>(rng.uniform01() * double(total)));
    out[static_cast<std::size_t>(i)] = j;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_row(const SweepRow& r) {
  char buf[256];
  if (r.psnr_infinite) {
    std::snprintf(buf, sizeof buf, "%s,%g,%lld,%lld,inf,%.6f,%.6f,%.6f",
                  r.method.c_str(), r.cr, static_cast<long long>(r.gamma),
                  static_cast<long long>(r.trial), r.mse, r.mae, r.seconds);
  } else {
    std::snprintf(buf, sizeof buf, "%s,%g,%lld,%lld,%.6f,%.6f,%.6f,%.6f",
                  r.method.c_str(), r.cr, static_cast<long long>(r.gamma),
                  static_cast<long long>(r.trial), r.psnr_db, r.mse, r.mae,
                  r.seconds);
  }
  return buf;
}

}  // namespace

std::vector<double> parse_cr_grid(const std::string& text) {
  require(!text.empty(), "cr grid: empty specification");
  std::vector<double> grid;

  const auto c1 = text.find(':');
  if (c1 != std::string::npos) {
    const auto c2 = text.find(':', c1 + 1);
    require(c2 != std::string::npos,
            "cr grid: expected start:end:step, got '" + text + "'");
    const double start = parse_positive_real(text.substr(0, c1));
    const double end = parse_positive_real(text.substr(c1 + 1, c2 - c1 - 1));
    const double step = parse_positive_real(text.substr(c2 + 1));
    require(step > 0.0, "cr grid: step must be > 0");
    require(end >= start, "cr grid: end must be >= start");
    for (double v = start; v <= end + 1e-9; v += step) grid.push_back(snap(v));
  } else {
    std::size_t pos = 0;
    while (pos <= text.size()) {
      const auto comma = text.find(',', pos);
      const std::string tok =
          text.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      require(!tok.empty(), "cr grid: empty entry in '" + text + "'");
      grid.push_back(snap(parse_positive_real(tok)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  for (double v : grid) check_cr(v);
  require(!grid.empty(), "cr grid: no values");
  return grid;
}

std::vector<SweepRow> run_benchmark(const GrayImage& image,
                                    const BenchmarkSpec& spec) {
  require(!spec.methods.empty(), "benchmark: no methods");
  require(!spec.cr_grid.empty(), "benchmark: empty cr grid");
  require(spec.trials >= 1, "benchmark: trials must be >= 1");
  for (double v : spec.cr_grid) check_cr(v);

  BlockLayout layout;
  layout.image_w = image.width;
  layout.image_h = image.height;
  layout.block_w = spec.block;
  layout.block_h = spec.block;
  layout.validate();
  const Index p = layout.p();

  // One noisy instance per trial, shared by every method and ratio.
  std::vector<GrayImage> inputs;
  inputs.reserve(static_cast<std::size_t>(spec.trials));
  for (Index t = 0; t < spec.trials; ++t) {
    if (spec.noise_variance > 0.0) {
      NoiseSpec noise;
      noise.variance = spec.noise_variance;
      noise.seed = derive_seed(spec.seed, {0xA11CEULL, std::uint64_t(t)});
      inputs.push_back(inject_noise(image, noise));
    } else {
      inputs.push_back(image);
    }
  }

  const Index n_methods = static_cast<Index>(spec.methods.size());
  const Index n_cr = static_cast<Index>(spec.cr_grid.size());
  const Index cells = n_methods * n_cr * spec.trials;
  std::vector<SweepRow> rows(static_cast<std::size_t>(cells));

  parallel_for(cells, spec.threads, [&](Index cell) {
    const Index mi = cell / (n_cr * spec.trials);
    const Index ci = (cell / spec.trials) % n_cr;
    const Index trial = cell % spec.trials;
    const Method method = spec.methods[static_cast<std::size_t>(mi)];
    const double cr = spec.cr_grid[static_cast<std::size_t>(ci)];

    SensingScheme scheme;
    scheme.method = method;
    scheme.gamma = method == Method::CS ? 1 : spec.gamma;
    scheme.descriptor.kind = spec.kind;
    scheme.descriptor.scaling = spec.scaling;
    scheme.descriptor.seed = derive_seed(
        spec.seed, {0xB0B0ULL, std::uint64_t(mi), std::uint64_t(ci),
                    std::uint64_t(trial)});

    const auto t0 = std::chrono::steady_clock::now();
    const CompressedPacket pkt =
        compress(inputs[static_cast<std::size_t>(trial)], scheme, layout, cr);
    const Index solve_dim =
        pkt.scheme.method == Method::DKSTPCS ? p / pkt.scheme.gamma : p;
    const ReconstructionReport rec =
        reconstruct(pkt, DctBasis(solve_dim), spec.solver);
    const auto t1 = std::chrono::steady_clock::now();

    const QualityReport q = quality(image, rec.image);
    SweepRow& row = rows[static_cast<std::size_t>(cell)];
    row.method = to_string(method);
    row.cr = cr;
    row.gamma = pkt.scheme.gamma;
    row.trial = trial;
    row.psnr_db = q.psnr_db;
    row.psnr_infinite = q.psnr_infinite;
    row.mse = q.mse;
    row.mae = q.mae;
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
  });
  return rows;
}

MaeSweepResult mae_vs_cr_sweep(const GrayImage& image,
                               const MaeSweepSpec& spec) {
  require(!spec.cr_grid.empty(), "mae sweep: empty cr grid");
  require(spec.trials >= 1, "mae sweep: trials must be >= 1");
  for (double v : spec.cr_grid) check_cr(v);

  BlockLayout full;
  full.image_w = image.width;
  full.image_h = image.height;
  full.block_w = spec.block;
  full.block_h = spec.block;
  full.validate();

  // The sampled blocks are reassembled side by side into one composite
  // image, so each trial runs the ordinary pipeline on a 1 x blocks grid
  // with a single shared operator.
  std::vector<GrayImage> composites;
  composites.reserve(static_cast<std::size_t>(spec.trials));
  for (Index t = 0; t < spec.trials; ++t) {
    const std::vector<Index> chosen =
        sample_blocks(full.block_count(), spec.blocks,
                      derive_seed(spec.seed, {0xB10CULL, std::uint64_t(t)}));
    GrayImage comp = make_image(spec.blocks * spec.block, spec.block);
    for (Index i = 0; i < spec.blocks; ++i) {
      const Index b = chosen[static_cast<std::size_t>(i)];
      const Index by = b % full.blocks_y();
      const Index bx = b / full.blocks_y();
      for (Index lx = 0; lx < spec.block; ++lx)
        for (Index ly = 0; ly < spec.block; ++ly)
          comp.at(i * spec.block + lx, ly) =
              image.at(bx * spec.block + lx, by * spec.block + ly);
    }
    composites.push_back(std::move(comp));
  }

  BlockLayout layout;
  layout.image_w = spec.blocks * spec.block;
  layout.image_h = spec.block;
  layout.block_w = spec.block;
  layout.block_h = spec.block;
  const Index p = layout.p();

  const Index n_cr = static_cast<Index>(spec.cr_grid.size());
  const Index cells = n_cr * spec.trials;
  MaeSweepResult out;
  out.rows.resize(static_cast<std::size_t>(cells));

  parallel_for(cells, spec.threads, [&](Index cell) {
    const Index ci = cell / spec.trials;
    const Index trial = cell % spec.trials;
    const double cr = spec.cr_grid[static_cast<std::size_t>(ci)];
    const GrayImage& comp = composites[static_cast<std::size_t>(trial)];

    SensingScheme scheme;
    scheme.method = spec.method;
    scheme.gamma = spec.method == Method::CS ? 1 : spec.gamma;
    scheme.descriptor.kind = spec.kind;
    scheme.descriptor.scaling = spec.scaling;
    scheme.descriptor.seed = derive_seed(
        spec.seed, {0xDA7AULL, std::uint64_t(ci), std::uint64_t(trial)});

    const auto t0 = std::chrono::steady_clock::now();
    const CompressedPacket pkt = compress(comp, scheme, layout, cr);
    const Index solve_dim =
        pkt.scheme.method == Method::DKSTPCS ? p / pkt.scheme.gamma : p;
    const ReconstructionReport rec =
        reconstruct(pkt, DctBasis(solve_dim), spec.solver);
    const auto t1 = std::chrono::steady_clock::now();

    const QualityReport q = quality(comp, rec.image);
    SweepRow& row = out.rows[static_cast<std::size_t>(cell)];
    row.method = to_string(spec.method);
    row.cr = cr;
    row.gamma = pkt.scheme.gamma;
    row.trial = trial;
    row.psnr_db = q.psnr_db;
    row.psnr_infinite = q.psnr_infinite;
    row.mse = q.mse;
    row.mae = q.mae;
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
  });

  // Doubled-ratio paired differences: MAE(c) - MAE(2c) per trial.
  for (Index ci = 0; ci < n_cr; ++ci) {
    const double c = spec.cr_grid[static_cast<std::size_t>(ci)];
    Index hi = -1;
    for (Index cj = 0; cj < n_cr; ++cj)
      if (std::abs(spec.cr_grid[static_cast<std::size_t>(cj)] - 2.0 * c) <
          1e-9) {
        hi = cj;
        break;
      }
    if (hi < 0) continue;

    Vector diffs(spec.trials);
    for (Index t = 0; t < spec.trials; ++t) {
      const double lo_mae =
          out.rows[static_cast<std::size_t>(ci * spec.trials + t)].mae;
      const double hi_mae =
          out.rows[static_cast<std::size_t>(hi * spec.trials + t)].mae;
      diffs[t] = lo_mae - hi_mae;
    }
    MaeDiffRow d;
    d.cr_low = c;
    d.cr_high = spec.cr_grid[static_cast<std::size_t>(hi)];
    d.mean_diff = diffs.mean();
    if (spec.trials > 1) {
      const double var =
          (diffs.array() - d.mean_diff).square().sum() / double(spec.trials - 1);
      d.std_err = std::sqrt(var / double(spec.trials));
    }
    out.diffs.push_back(d);
  }
  return out;
}

std::string sweep_csv_string(const std::vector<SweepRow>& rows) {
  std::string csv = "method,cr,gamma,trial,psnr_db,mse,mae,seconds\n";
  for (const SweepRow& r : rows) {
    csv += format_row(r);
    csv += '\n';
  }
  return csv;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail_invalid("write_sweep_csv: cannot open " + path);
  out << sweep_csv_string(rows);
  if (!out) fail_invalid("write_sweep_csv: short write to " + path);
}

}  // namespace dkstp
