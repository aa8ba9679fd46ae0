// Generates the three deterministic 128x128 grayscale test images shipped in
// data/.  Each mixes smooth structure with mild broadband texture so that
// blockwise sparse recovery is challenged but not degenerate:
//   bars.pgm  - vertical stripes under a gentle vertical modulation
//   waves.pgm - low-frequency separable cosine mixture
//   blobs.pgm - smooth radial bumps, a soft diagonal band, and a ramp
// Usage: make_test_images [out_dir]   (default "data")

#include "dkstp/image.hpp"
#include "dkstp/rng.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

namespace {

using dkstp::Index;

constexpr Index kSize = 128;
constexpr double kPi = std::numbers::pi;

using Field = std::vector<double>;  // kSize*kSize, row-major

double& at(Field& f, Index x, Index y) { return f[y * kSize + x]; }

// One pass of the separable binomial kernel [1,4,6,4,1]/16 with clamped
// edges, applied horizontally then vertically.
void blur(Field& f) {
    static const double w[5] = {1.0 / 16, 4.0 / 16, 6.0 / 16, 4.0 / 16,
                                1.0 / 16};
    Field tmp(f.size(), 0.0);
    for (Index y = 0; y < kSize; ++y) {
        for (Index x = 0; x < kSize; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) {
                Index xx = std::min<Index>(kSize - 1, std::max<Index>(0, x + k));
                acc += w[k + 2] * at(f, xx, y);
            }
            at(tmp, x, y) = acc;
        }
    }
    for (Index y = 0; y < kSize; ++y) {
        for (Index x = 0; x < kSize; ++x) {
            double acc = 0.0;
            for (int k = -2; k <= 2; ++k) {
                Index yy = std::min<Index>(kSize - 1, std::max<Index>(0, y + k));
                acc += w[k + 2] * at(f, x, yy);
            }
            at(f, x, y) = acc;
        }
    }
}

// Adds twice-blurred uniform noise of roughly +-amp gray levels.
void add_texture(Field& f, double amp, std::uint64_t seed) {
    dkstp::Xoshiro256pp rng(seed);
    Field n(f.size());
    for (double& v : n) v = 2.0 * rng.uniform01() - 1.0;
    blur(n);
    blur(n);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += amp * n[i];
}

dkstp::GrayImage quantize(const Field& f) {
    dkstp::GrayImage img = dkstp::make_image(kSize, kSize);
    for (Index y = 0; y < kSize; ++y) {
        for (Index x = 0; x < kSize; ++x) {
            double v = f[y * kSize + x];
            v = std::min(255.0, std::max(0.0, v));
            img.at(x, y) = static_cast<std::uint8_t>(std::lround(v));
        }
    }
    return img;
}

dkstp::GrayImage make_bars() {
    static const int widths[] = {9, 5, 12, 7, 15, 6, 10, 8, 13, 5, 11, 9, 18};
    static const int levels[] = {70,  170, 40,  210, 120, 230, 90,
                                 150, 60,  190, 110, 30,  140};
    std::vector<int> stripe_of(kSize, 0);
    {
        Index x = 0;
        int s = 0;
        while (x < kSize) {
            for (int i = 0; i < widths[s % 13] && x < kSize; ++i, ++x) {
                stripe_of[x] = s % 13;
            }
            ++s;
        }
    }
    Field f(kSize * kSize, 0.0);
    for (Index y = 0; y < kSize; ++y) {
        for (Index x = 0; x < kSize; ++x) {
            double v = levels[stripe_of[x]];
            v += 18.0 * std::cos(2.0 * kPi * double(y) / 128.0 + 0.7);
            v += 6.0 * std::cos(2.0 * kPi * double(x) / 64.0 - 0.3) *
                 std::cos(2.0 * kPi * double(y) / 256.0);
            f[y * kSize + x] = v;
        }
    }
    add_texture(f, 2.0, 101);
    return quantize(f);
}

dkstp::GrayImage make_waves() {
    Field f(kSize * kSize, 0.0);
    for (Index y = 0; y < kSize; ++y) {
        for (Index x = 0; x < kSize; ++x) {
            const double u = double(x) / 128.0, v = double(y) / 128.0;
            double s = 128.0;
            s += 52.0 * std::cos(2.0 * kPi * 3.0 * u + 0.4) *
                 std::cos(2.0 * kPi * 1.0 * v - 0.2);
            s += 30.0 * std::cos(2.0 * kPi * 7.0 * u - 1.1) *
                 std::cos(2.0 * kPi * 2.0 * v + 0.5);
            s += 22.0 * std::cos(2.0 * kPi * 3.0 * v + 2.0);
            s += 14.0 * std::cos(2.0 * kPi * 5.0 * u + 1.3);
            s += 9.0 * std::cos(2.0 * kPi * (4.0 * u + 3.0 * v) - 0.8);
            f[y * kSize + x] = s;
        }
    }
    add_texture(f, 2.0, 202);
    return quantize(f);
}

dkstp::GrayImage make_blobs() {
    struct Bump {
        double cx, cy, sigma, amp;
    };
    static const Bump bumps[] = {
        {24.0, 30.0, 11.0, 85.0},   {96.0, 22.0, 9.0, -55.0},
        {64.0, 70.0, 16.0, 70.0},   {30.0, 100.0, 12.0, -60.0},
        {105.0, 95.0, 10.0, 75.0},  {80.0, 45.0, 7.0, -40.0},
        {14.0, 70.0, 8.0, 45.0},
    };
    Field f(kSize * kSize, 0.0);
    for (Index y = 0; y < kSize; ++y) {
        for (Index x = 0; x < kSize; ++x) {
            double s = 90.0 + 40.0 * double(y) / 127.0;
            for (const Bump& b : bumps) {
                const double dx = double(x) - b.cx, dy = double(y) - b.cy;
                s += b.amp *
                     std::exp(-(dx * dx + dy * dy) / (2.0 * b.sigma * b.sigma));
            }
            const double d = double(x) - double(y);
            s += 25.0 * std::exp(-d * d / (2.0 * 18.0 * 18.0));
            f[y * kSize + x] = s;
        }
    }
    add_texture(f, 2.5, 303);
    return quantize(f);
}

}  // namespace

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    try {
        dkstp::write_pgm(make_bars(), dir + "/bars.pgm");
        dkstp::write_pgm(make_waves(), dir + "/waves.pgm");
        dkstp::write_pgm(make_blobs(), dir + "/blobs.pgm");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    std::printf("wrote %s/bars.pgm %s/waves.pgm %s/blobs.pgm\n", dir.c_str(),
                dir.c_str(), dir.c_str());
    return 0;
}
