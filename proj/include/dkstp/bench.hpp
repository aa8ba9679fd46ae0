#pragma once

#include "dkstp/image.hpp"
#include "dkstp/measurement.hpp"
#include "dkstp/pipeline.hpp"
#include "dkstp/solver.hpp"

#include <string>
#include <vector>

namespace dkstp {

// One sweep/benchmark measurement cell.  Every column except `seconds` is
// deterministic for a fixed seed; `seconds` is wall-clock time.
struct SweepRow {
  std::string method;
  double cr = 0.0;
  Index gamma = 1;
  Index trial = 0;
  double psnr_db = 0.0;
  bool psnr_infinite = false;
  double mse = 0.0;
  double mae = 0.0;
  double seconds = 0.0;
};

// Parses "start:end:step", a comma list, or a single value.  Values are
// snapped to a 1e-6 grid; all must lie in (0, 1].
std::vector<double> parse_cr_grid(const std::string& text);

struct BenchmarkSpec {
  std::vector<Method> methods;
  std::vector<double> cr_grid;
  Index gamma = 2;
  Index trials = 1;
  double noise_variance = 0.0;
  std::uint64_t seed = 0;
  Index block = 32;
  MatrixKind kind = MatrixKind::Gaussian;
  Scaling scaling = Scaling::InvSqrtRows;
  SolverConfig solver;
  int threads = 0;
};

// Full-image blockwise compress+reconstruct for every (method, cr, trial)
// cell.  Rows come back ordered method-major, then cr, then trial.  Noise
// (when variance > 0) is drawn once per trial and shared across methods and
// ratios, so methods are compared on identical data; quality is always
// measured against the clean original.
std::vector<SweepRow> run_benchmark(const GrayImage& image,
                                    const BenchmarkSpec& spec);

struct MaeSweepSpec {
  Method method = Method::CS;
  std::vector<double> cr_grid;
  Index gamma = 2;
  Index trials = 5;
  Index blocks = 5;  // randomly selected blocks per trial
  Index block = 64;  // block edge length
  std::uint64_t seed = 0;
  MatrixKind kind = MatrixKind::Gaussian;
  Scaling scaling = Scaling::InvSqrtRows;
  SolverConfig solver;
  int threads = 0;
};

// Paired-ratio difference statistics: mean over trials of
// MAE(cr_low) - MAE(cr_high) with cr_high = 2*cr_low, and its standard error.
struct MaeDiffRow {
  double cr_low = 0.0;
  double cr_high = 0.0;
  double mean_diff = 0.0;
  double std_err = 0.0;
};

struct MaeSweepResult {
  std::vector<SweepRow> rows;
  std::vector<MaeDiffRow> diffs;
};

// Runs compress+reconstruct on a per-trial random selection of blocks for
// every grid ratio (the same blocks across ratios within a trial, so ratio pairs
// are compared on identical data).
MaeSweepResult mae_vs_cr_sweep(const GrayImage& image, const MaeSweepSpec& spec);

// CSV with the frozen header `method,cr,gamma,trial,psnr_db,mse,mae,seconds`.
std::string sweep_csv_string(const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);

}  // namespace dkstp
