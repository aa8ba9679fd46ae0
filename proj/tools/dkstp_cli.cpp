// Command-line front end: generate measurement-matrix descriptors, compress
// and reconstruct images, analyze recovery conditions, and run quality
// sweeps.  Every subcommand exits 0 on success and prints a one-line
// diagnostic to stderr on failure.

#include "CLI11.hpp"
#include "json.hpp"

#include "dkstp/analysis.hpp"
#include "dkstp/bench.hpp"
#include "dkstp/image.hpp"
#include "dkstp/measurement.hpp"
#include "dkstp/metrics.hpp"
#include "dkstp/packet.hpp"
#include "dkstp/pipeline.hpp"
#include "dkstp/solver.hpp"
#include "dkstp/sparsity.hpp"
#include "dkstp/stp.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using dkstp::Index;
using dkstp::Matrix;
using dkstp::Vector;

dkstp::Scaling scaling_from_string(const std::string& s) {
    if (s == "unit") return dkstp::Scaling::Unit;
    if (s == "invsqrt") return dkstp::Scaling::InvSqrtRows;
    dkstp::fail_invalid("unknown scaling '" + s + "' (expected unit|invsqrt)");
}

std::vector<dkstp::Method> parse_method_list(const std::string& text) {
    std::vector<dkstp::Method> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(dkstp::method_from_string(tok));
    }
    dkstp::require(!out.empty(), "no methods given");
    return out;
}

void write_text_matrix(const Matrix& a, const std::string& path) {
    std::ofstream out(path);
    dkstp::require(static_cast<bool>(out),
                   "cannot open " + path + " for writing");
    char buf[64];
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", a(i, j));
            out << buf << (j + 1 == a.cols() ? "" : " ");
        }
        out << "\n";
    }
    dkstp::require(out.good(), "write error on " + path);
}

// ---------------------------------------------------------------- gen-matrix

struct GenMatrixArgs {
    std::string kind = "gaussian";
    std::int64_t rows = 0;
    std::int64_t cols = 0;
    std::uint64_t seed = 0;
    std::string scaling = "invsqrt";
    std::string out;
    std::string dump;
};

void run_gen_matrix(const GenMatrixArgs& args) {
    dkstp::require(args.rows >= 1 && args.cols >= 1,
                   "gen-matrix: rows and cols must be >= 1");
    dkstp::MatrixDescriptor d;
    d.kind = dkstp::matrix_kind_from_string(args.kind);
    d.rows = static_cast<std::uint32_t>(args.rows);
    d.cols = static_cast<std::uint32_t>(args.cols);
    d.seed = args.seed;
    d.scaling = scaling_from_string(args.scaling);
    dkstp::write_descriptor(d, args.out);
    if (!args.dump.empty()) {
        write_text_matrix(dkstp::generate_matrix(d), args.dump);
    }
    std::cout << "wrote descriptor " << args.out << " (" << to_string(d.kind)
              << " " << d.rows << "x" << d.cols << ", seed " << d.seed << ", "
              << to_string(d.scaling) << ")\n";
}

// ------------------------------------------------------------------ compress

struct CompressArgs {
    std::string image;
    std::string method = "cs";
    double cr = 0.25;
    std::int64_t gamma = 2;
    std::int64_t block = 32;
    std::uint64_t seed = 0;
    std::string kind = "gaussian";
    std::string scaling = "invsqrt";
    std::string out;
};

void run_compress(const CompressArgs& args) {
    const dkstp::GrayImage img = dkstp::read_pgm(args.image);
    dkstp::BlockLayout layout;
    layout.image_w = img.width;
    layout.image_h = img.height;
    layout.block_w = args.block;
    layout.block_h = args.block;

    dkstp::SensingScheme scheme;
    scheme.method = dkstp::method_from_string(args.method);
    scheme.gamma = args.gamma;
    scheme.descriptor.kind = dkstp::matrix_kind_from_string(args.kind);
    scheme.descriptor.seed = args.seed;
    scheme.descriptor.scaling = scaling_from_string(args.scaling);

    const dkstp::CompressedPacket pkt =
        dkstp::compress(img, scheme, layout, args.cr);
    dkstp::write_packet(pkt, args.out);
    std::cout << "compressed " << args.image << ": method="
              << to_string(pkt.scheme.method) << " gamma=" << pkt.scheme.gamma
              << " m=" << pkt.m << " blocks=" << pkt.layout.block_count()
              << " -> " << args.out << "\n";
}

// --------------------------------------------------------------- reconstruct

struct ReconstructArgs {
    std::string packet;
    std::string solver = "bp";
    double lambda = 0.01;
    std::int64_t max_iters = 2000;
    double abs_tol = 1e-7;
    double rel_tol = 1e-5;
    std::string out;
    std::string report;
    std::string original;
};

void run_reconstruct(const ReconstructArgs& args) {
    const dkstp::CompressedPacket pkt = dkstp::read_packet(args.packet);
    dkstp::SolverConfig cfg;
    cfg.kind = dkstp::solver_kind_from_string(args.solver);
    cfg.lambda = args.lambda;
    cfg.max_iters = args.max_iters;
    cfg.abs_tol = args.abs_tol;
    cfg.rel_tol = args.rel_tol;

    const Index p = pkt.layout.p();
    const Index basis_dim = (pkt.scheme.method == dkstp::Method::DKSTPCS)
                                ? p / pkt.scheme.gamma
                                : p;
    const dkstp::DctBasis basis(basis_dim);
    const dkstp::ReconstructionReport rep =
        dkstp::reconstruct(pkt, basis, cfg);
    dkstp::write_pgm(rep.image, args.out);

    std::size_t converged = 0;
    for (const auto& b : rep.blocks) converged += b.converged ? 1 : 0;
    std::cout << "reconstructed " << rep.blocks.size() << " blocks ("
              << converged << " converged) -> " << args.out << "\n";

    if (args.report.empty()) return;

    nlohmann::json j;
    j["blocks"] = nlohmann::json::array();
    for (const auto& b : rep.blocks) {
        j["blocks"].push_back({{"index", b.index},
                               {"converged", b.converged},
                               {"iterations", b.iterations}});
    }
    if (!args.original.empty()) {
        const dkstp::GrayImage orig = dkstp::read_pgm(args.original);
        dkstp::require(orig.same_shape(rep.image),
                       "original image shape does not match packet geometry");
        const dkstp::QualityReport q = dkstp::quality(orig, rep.image);
        j["quality"] = {{"psnr_db", q.psnr_db},
                        {"psnr_infinite", q.psnr_infinite},
                        {"mse", q.mse},
                        {"mae", q.mae}};

        const Matrix xs = dkstp::vectorize_all(orig, pkt.layout);
        double dist = 0.0, cs = 0.0, orig_err = 0.0, l2sq = 0.0;
        double stated = 0.0, safe = 0.0;
        for (Index b = 0; b < xs.cols(); ++b) {
            const dkstp::ErrorDecomposition d = dkstp::decompose_error(
                xs.col(b), rep.values.col(b), pkt.scheme.gamma);
            dist += d.distribution_error;
            cs += d.cs_error;
            orig_err += d.original_error;
            l2sq += d.total_l2 * d.total_l2;
            stated += d.bound_stated;
            safe += d.bound_safe;
        }
        const double total_l2 = std::sqrt(l2sq);
        j["decomposition"] = {
            {"distribution_error", dist},
            {"cs_error", cs},
            {"original_error", orig_err},
            {"total_l2", total_l2},
            {"bound_stated", stated},
            {"bound_safe", safe},
            {"stated_bound_holds", total_l2 <= stated + 1e-9 * (1.0 + stated)}};
    }
    std::ofstream out(args.report);
    dkstp::require(static_cast<bool>(out),
                   "cannot open " + args.report + " for writing");
    out << j.dump(2) << "\n";
    dkstp::require(out.good(), "write error on " + args.report);
}

// ------------------------------------------------------------------- analyze

struct AnalyzeArgs {
    std::string matrix_desc;
    std::int64_t spark_limit = 8;
    std::int64_t rip_k = 0;
    std::string rip_mode = "exhaustive";
    double tau = 0.0;
    std::string method;
    std::int64_t gamma = 2;
    bool as_json = false;
};

void run_analyze(const AnalyzeArgs& args) {
    const dkstp::MatrixDescriptor desc =
        dkstp::read_descriptor(args.matrix_desc);
    const Matrix stored = dkstp::generate_matrix(desc);

    Matrix target = stored;
    std::string expansion = "stored";
    bool grouped = false;
    if (!args.method.empty()) {
        const dkstp::Method m = dkstp::method_from_string(args.method);
        dkstp::require(args.gamma >= 1, "analyze: gamma must be >= 1");
        const Index g = args.gamma;
        if (m == dkstp::Method::STPCS && g > 1) {
            target = dkstp::kronecker(stored, Matrix::Identity(g, g));
            expansion = "stp";
        } else if (m == dkstp::Method::DKSTPCS && g > 1) {
            target = dkstp::kronecker(
                stored, Matrix::Constant(1, g, 1.0 / std::sqrt(double(g))));
            expansion = "dkstp";
            grouped = true;
        }
    }

    const dkstp::SparkResult sp = dkstp::spark(target, args.spark_limit);
    const double mu = dkstp::coherence(target);
    const dkstp::UniquenessBounds ub =
        dkstp::uniqueness_bounds(target, args.spark_limit);

    bool have_rip = args.rip_k >= 1;
    dkstp::RipEstimate rip;
    if (have_rip) {
        const dkstp::RipMode mode = (args.rip_mode == "sampled")
                                        ? dkstp::RipMode::Sampled
                                        : dkstp::RipMode::Exhaustive;
        dkstp::require(args.rip_mode == "sampled" ||
                           args.rip_mode == "exhaustive",
                       "analyze: rip-mode must be exhaustive|sampled");
        rip = dkstp::rip_constant(target, args.rip_k, mode);
    }

    dkstp::IntraGroupReport ig;
    double tau_used = 0.0;
    if (grouped) {
        tau_used = args.tau > 0.0 ? args.tau
                                  : dkstp::default_intra_group_tau(
                                        target.rows(), target.cols());
        ig = dkstp::intra_group_check(target, args.gamma, tau_used);
    }

    const bool full_rank_sentinel =
        sp.spark == dkstp::full_spark_sentinel(target.cols());

    if (args.as_json) {
        nlohmann::json j;
        j["matrix"] = {{"kind", to_string(desc.kind)},
                       {"rows", desc.rows},
                       {"cols", desc.cols},
                       {"seed", desc.seed},
                       {"scaling", to_string(desc.scaling)}};
        j["target"] = {{"expansion", expansion},
                       {"rows", target.rows()},
                       {"cols", target.cols()}};
        j["spark"] = {{"value", sp.spark},
                      {"resolved", sp.resolved},
                      {"full_column_rank", sp.resolved && full_rank_sentinel},
                      {"witness", sp.witness}};
        j["coherence"] = mu;
        j["uniqueness"] = {{"k_spark", ub.k_spark}, {"k_mu", ub.k_mu}};
        if (have_rip) {
            j["rip"] = {{"k", rip.k},
                        {"delta", rip.delta},
                        {"failed", rip.failed},
                        {"mode", rip.mode == dkstp::RipMode::Exhaustive
                                     ? "exhaustive"
                                     : "sampled"}};
        }
        if (grouped) {
            j["intra_group"] = {
                {"within_group_equal", ig.within_group_equal},
                {"cross_group_coherence", ig.cross_group_coherence},
                {"tau", tau_used},
                {"holds", ig.holds}};
        }
        std::cout << j.dump(2) << "\n";
        return;
    }

    std::printf("matrix: %s %ux%u seed=%llu scaling=%s\n",
                to_string(desc.kind), desc.rows, desc.cols,
                static_cast<unsigned long long>(desc.seed),
                to_string(desc.scaling));
    std::printf("target: %s (%lld x %lld)\n", expansion.c_str(),
                static_cast<long long>(target.rows()),
                static_cast<long long>(target.cols()));
    if (sp.resolved && full_rank_sentinel) {
        std::printf("spark: %lld (full column rank)\n",
                    static_cast<long long>(sp.spark));
    } else if (sp.resolved) {
        std::printf("spark: %lld\n", static_cast<long long>(sp.spark));
    } else {
        std::printf("spark: >= %lld (search limit reached)\n",
                    static_cast<long long>(sp.spark));
    }
    std::printf("coherence: %.6f\n", mu);
    std::printf("unique_recovery: k_spark=%lld k_mu=%lld\n",
                static_cast<long long>(ub.k_spark),
                static_cast<long long>(ub.k_mu));
    if (have_rip) {
        std::printf("rip: k=%lld delta=%.6f mode=%s%s\n",
                    static_cast<long long>(rip.k), rip.delta,
                    rip.mode == dkstp::RipMode::Exhaustive ? "exhaustive"
                                                           : "sampled",
                    rip.failed ? " (isometry fails)" : "");
    }
    if (grouped) {
        std::printf(
            "intra_group: within_equal=%s cross_coherence=%.6f tau=%.6f "
            "holds=%s\n",
            ig.within_group_equal ? "yes" : "no", ig.cross_group_coherence,
            tau_used, ig.holds ? "yes" : "no");
    }
}

// ----------------------------------------------------------------- benchmark

struct BenchmarkArgs {
    std::string image;
    std::string methods = "cs,stp,dkstp";
    std::string cr = "0.05:0.5:0.05";
    std::int64_t gamma = 2;
    std::int64_t trials = 1;
    double noise_var = 0.0;
    std::uint64_t seed = 0;
    std::int64_t block = 32;
    std::string solver = "bp";
    std::int64_t max_iters = 2000;
    double abs_tol = 1e-7;
    double rel_tol = 1e-5;
    std::string kind = "gaussian";
    int threads = 0;
    std::string csv;
};

void run_benchmark_cmd(const BenchmarkArgs& args) {
    const dkstp::GrayImage img = dkstp::read_pgm(args.image);
    dkstp::BenchmarkSpec spec;
    spec.methods = parse_method_list(args.methods);
    spec.cr_grid = dkstp::parse_cr_grid(args.cr);
    spec.gamma = args.gamma;
    spec.trials = args.trials;
    spec.noise_variance = args.noise_var;
    spec.seed = args.seed;
    spec.block = args.block;
    spec.kind = dkstp::matrix_kind_from_string(args.kind);
    spec.solver.kind = dkstp::solver_kind_from_string(args.solver);
    spec.solver.max_iters = args.max_iters;
    spec.solver.abs_tol = args.abs_tol;
    spec.solver.rel_tol = args.rel_tol;
    spec.threads = args.threads;

    const std::vector<dkstp::SweepRow> rows = dkstp::run_benchmark(img, spec);
    dkstp::write_sweep_csv(rows, args.csv);
    std::cout << "wrote " << rows.size() << " rows -> " << args.csv << "\n";
}

// -------------------------------------------------------------- error-decomp

struct ErrorDecompArgs {
    std::string image;
    std::int64_t gamma = 2;
    std::string heatmap;
    std::string hist;
};

void run_error_decomp(const ErrorDecompArgs& args) {
    const dkstp::GrayImage img = dkstp::read_pgm(args.image);
    const dkstp::ErrorMap em =
        dkstp::mean_reconstruction_error_map(img, args.gamma);

    if (!args.heatmap.empty()) {
        dkstp::GrayImage h = dkstp::make_image(img.width, img.height);
        for (Index y = 0; y < img.height; ++y) {
            for (Index x = 0; x < img.width; ++x) {
                double v = em.heatmap(y, x) * 255.0;
                v = std::min(255.0, std::max(0.0, v));
                h.at(x, y) = static_cast<std::uint8_t>(std::lround(v));
            }
        }
        dkstp::write_pgm(h, args.heatmap);
    }
    if (!args.hist.empty()) {
        std::ofstream out(args.hist);
        dkstp::require(static_cast<bool>(out),
                       "cannot open " + args.hist + " for writing");
        out << "bin,low,high,count\n";
        char buf[128];
        for (std::size_t i = 0; i < em.histogram.size(); ++i) {
            const double low = -1.0 + static_cast<double>(i) / 128.0;
            std::snprintf(buf, sizeof(buf), "%zu,%.6f,%.6f,%lld\n", i, low,
                          low + 1.0 / 128.0,
                          static_cast<long long>(em.histogram[i]));
            out << buf;
        }
        dkstp::require(out.good(), "write error on " + args.hist);
    }
    std::printf("mae = %.6f\n", em.mae);
}

// ----------------------------------------------------------------- mae-sweep

struct MaeSweepArgs {
    std::string image;
    std::int64_t gamma = 2;
    std::string cr = "0.05,0.1,0.2,0.25,0.4,0.5";
    std::int64_t blocks = 5;
    std::int64_t block = 64;
    std::int64_t trials = 5;
    std::string method = "cs";
    std::uint64_t seed = 0;
    std::string solver = "bp";
    std::int64_t max_iters = 2000;
    double rel_tol = 1e-5;
    std::string csv;
};

void run_mae_sweep(const MaeSweepArgs& args) {
    const dkstp::GrayImage img = dkstp::read_pgm(args.image);
    dkstp::MaeSweepSpec spec;
    spec.method = dkstp::method_from_string(args.method);
    spec.cr_grid = dkstp::parse_cr_grid(args.cr);
    spec.gamma = args.gamma;
    spec.trials = args.trials;
    spec.blocks = args.blocks;
    spec.block = args.block;
    spec.seed = args.seed;
    spec.solver.kind = dkstp::solver_kind_from_string(args.solver);
    spec.solver.max_iters = args.max_iters;
    spec.solver.rel_tol = args.rel_tol;

    const dkstp::MaeSweepResult res = dkstp::mae_vs_cr_sweep(img, spec);
    dkstp::write_sweep_csv(res.rows, args.csv);
    std::printf("cr_low,cr_high,mean_diff,std_err\n");
    for (const auto& d : res.diffs) {
        std::printf("%g,%g,%.6f,%.6f\n", d.cr_low, d.cr_high, d.mean_diff,
                    d.std_err);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "dimension-keeping semi-tensor-product compressed sensing toolkit"};
    app.require_subcommand(1);

    GenMatrixArgs gen;
    CLI::App* c_gen =
        app.add_subcommand("gen-matrix", "write a measurement-matrix descriptor");
    c_gen->add_option("--kind", gen.kind, "gaussian|bernoulli|toeplitz");
    c_gen->add_option("--rows", gen.rows, "matrix rows")->required();
    c_gen->add_option("--cols", gen.cols, "matrix cols")->required();
    c_gen->add_option("--seed", gen.seed, "generator seed");
    c_gen->add_option("--scaling", gen.scaling, "unit|invsqrt");
    c_gen->add_option("--out", gen.out, "descriptor output path")->required();
    c_gen->add_option("--dump-matrix", gen.dump,
                      "also write the dense entries as text");
    c_gen->callback([&gen] { run_gen_matrix(gen); });

    CompressArgs comp;
    CLI::App* c_comp =
        app.add_subcommand("compress", "compress a PGM image into a packet");
    c_comp->add_option("--image", comp.image, "input PGM (P5)")->required();
    c_comp->add_option("--method", comp.method, "cs|stp|dkstp");
    c_comp->add_option("--cr", comp.cr, "compression ratio in (0,1]");
    c_comp->add_option("--gamma", comp.gamma, "grouping factor");
    c_comp->add_option("--block", comp.block, "block edge length");
    c_comp->add_option("--seed", comp.seed, "measurement matrix seed");
    c_comp->add_option("--kind", comp.kind, "gaussian|bernoulli|toeplitz");
    c_comp->add_option("--scaling", comp.scaling, "unit|invsqrt");
    c_comp->add_option("--out", comp.out, "packet output path")->required();
    c_comp->callback([&comp] { run_compress(comp); });

    ReconstructArgs rec;
    CLI::App* c_rec =
        app.add_subcommand("reconstruct", "recover an image from a packet");
    c_rec->add_option("--packet", rec.packet, "input packet")->required();
    c_rec->add_option("--solver", rec.solver, "bp|bpdn|omp");
    c_rec->add_option("--lambda", rec.lambda, "bpdn regularization weight");
    c_rec->add_option("--max-iters", rec.max_iters, "iteration cap");
    c_rec->add_option("--abs-tol", rec.abs_tol, "absolute tolerance");
    c_rec->add_option("--rel-tol", rec.rel_tol, "relative tolerance");
    c_rec->add_option("--out", rec.out, "output PGM path")->required();
    c_rec->add_option("--report", rec.report, "JSON report path");
    c_rec->add_option("--original", rec.original,
                      "clean original PGM for quality/decomposition");
    c_rec->callback([&rec] { run_reconstruct(rec); });

    AnalyzeArgs ana;
    CLI::App* c_ana = app.add_subcommand(
        "analyze", "recovery-condition analysis of a descriptor");
    c_ana->add_option("--matrix-desc", ana.matrix_desc, "descriptor path")
        ->required();
    c_ana->add_option("--spark-limit", ana.spark_limit,
                      "max subset size for the spark search");
    c_ana->add_option("--rip-k", ana.rip_k,
                      "isometry order (0 skips the estimate)");
    c_ana->add_option("--rip-mode", ana.rip_mode, "exhaustive|sampled");
    c_ana->add_option("--tau", ana.tau,
                      "cross-group coherence threshold (0 = automatic)");
    c_ana->add_option("--method", ana.method,
                      "analyze the expanded operator of cs|stp|dkstp");
    c_ana->add_option("--gamma", ana.gamma, "grouping factor for --method");
    c_ana->add_flag("--json", ana.as_json, "emit JSON instead of text");
    c_ana->callback([&ana] { run_analyze(ana); });

    BenchmarkArgs bench;
    CLI::App* c_bench = app.add_subcommand(
        "benchmark", "blockwise compress+reconstruct quality sweep");
    c_bench->add_option("--image", bench.image, "input PGM")->required();
    c_bench->add_option("--methods", bench.methods,
                        "comma list of cs|stp|dkstp");
    c_bench->add_option("--cr", bench.cr,
                        "ratio grid: start:end:step, comma list, or one value");
    c_bench->add_option("--gamma", bench.gamma, "grouping factor");
    c_bench->add_option("--trials", bench.trials, "trials per cell");
    c_bench->add_option("--noise-var", bench.noise_var,
                        "input noise variance (0 = clean)");
    c_bench->add_option("--seed", bench.seed, "sweep seed");
    c_bench->add_option("--block", bench.block, "block edge length");
    c_bench->add_option("--solver", bench.solver, "bp|bpdn|omp");
    c_bench->add_option("--max-iters", bench.max_iters, "solver iteration cap");
    c_bench->add_option("--abs-tol", bench.abs_tol, "solver absolute tolerance");
    c_bench->add_option("--rel-tol", bench.rel_tol, "solver relative tolerance");
    c_bench->add_option("--kind", bench.kind, "gaussian|bernoulli|toeplitz");
    c_bench->add_option("--threads", bench.threads,
                        "worker threads (0 = hardware)");
    c_bench->add_option("--csv", bench.csv, "output CSV path")->required();
    c_bench->callback([&bench] { run_benchmark_cmd(bench); });

    ErrorDecompArgs ed;
    CLI::App* c_ed = app.add_subcommand(
        "error-decomp", "group-averaging error field of an image");
    c_ed->add_option("--image", ed.image, "input PGM")->required();
    c_ed->add_option("--gamma", ed.gamma, "grouping factor");
    c_ed->add_option("--heatmap", ed.heatmap, "per-pixel |error| PGM path");
    c_ed->add_option("--hist", ed.hist, "signed-error histogram CSV path");
    c_ed->callback([&ed] { run_error_decomp(ed); });

    MaeSweepArgs mae;
    CLI::App* c_mae = app.add_subcommand(
        "mae-sweep", "MAE vs compression ratio on sampled blocks");
    c_mae->add_option("--image", mae.image, "input PGM")->required();
    c_mae->add_option("--gamma", mae.gamma, "grouping factor");
    c_mae->add_option("--cr", mae.cr, "ratio grid");
    c_mae->add_option("--blocks", mae.blocks, "sampled blocks per trial");
    c_mae->add_option("--block", mae.block, "block edge length");
    c_mae->add_option("--trials", mae.trials, "number of trials");
    c_mae->add_option("--method", mae.method, "cs|stp|dkstp");
    c_mae->add_option("--seed", mae.seed, "sweep seed");
    c_mae->add_option("--solver", mae.solver, "bp|bpdn|omp");
    c_mae->add_option("--max-iters", mae.max_iters, "solver iteration cap");
    c_mae->add_option("--rel-tol", mae.rel_tol, "solver relative tolerance");
    c_mae->add_option("--csv", mae.csv, "output CSV path")->required();
    c_mae->callback([&mae] { run_mae_sweep(mae); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
