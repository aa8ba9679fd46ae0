#include "dkstp/analysis.hpp"

#include "dkstp/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dkstp {

namespace {

constexpr double kRankRelTol = 1e-10;
constexpr std::uint64_t kSubsetWorkCap = 20'000'000;
constexpr Index kSampledSupportCount = 2000;

// Visits all k-subsets of {0..n-1} in lexicographic order until the visitor
// returns false.
template <typename F>
void for_each_subset(Index n, Index k, F&& visit) {
  std::vector<Index> idx(k);
  std::iota(idx.begin(), idx.end(), Index{0});
  while (true) {
    if (!visit(idx)) return;
    Index i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (Index j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

double binomial(Index n, Index k) {
  double r = 1.0;
  for (Index i = 0; i < k; ++i)
    r = r * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return r;
}

Matrix gather_columns(const Matrix& a, const std::vector<Index>& idx) {
  Matrix sub(a.rows(), static_cast<Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) sub.col(j) = a.col(idx[j]);
  return sub;
}

bool subset_dependent(const Matrix& a, const std::vector<Index>& idx) {
  const Matrix sub = gather_columns(a, idx);
  const Eigen::JacobiSVD<Matrix> svd(sub);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  if (!(smax > 0.0)) return true;
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > smax * kRankRelTol) ++rank;
  return rank < static_cast<Index>(idx.size());
}

double support_delta(const Matrix& a, const std::vector<Index>& idx,
                     Eigen::SelfAdjointEigenSolver<Matrix>& es) {
  const Matrix sub = gather_columns(a, idx);
  const Matrix gram = sub.transpose() * sub;
  es.compute(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return std::max(ev(ev.size() - 1) - 1.0, 1.0 - ev(0));
}

}  // namespace

SparkResult spark(const Matrix& a, Index limit) {
  require(a.rows() >= 1 && a.cols() >= 1, "spark: empty matrix");
  const Index n = a.cols();
  require(limit >= 1, "spark: limit must be >= 1");
  require(limit <= std::min<Index>(n, 12),
          "spark: limit " + std::to_string(limit) +
              " exceeds combinatorial guard min(cols, 12) = " +
              std::to_string(std::min<Index>(n, 12)));

  std::uint64_t work = 0;
  for (Index s = 1; s <= limit; ++s) {
    work += static_cast<std::uint64_t>(binomial(n, s));
    require(work <= kSubsetWorkCap,
            "spark: subset enumeration exceeds work cap; lower the limit");
    SparkResult found;
    bool have = false;
    for_each_subset(n, s, [&](const std::vector<Index>& idx) {
      if (subset_dependent(a, idx)) {
        found.spark = s;
        found.witness = idx;
        found.resolved = true;
        have = true;
        return false;
      }
      return true;
    });
    if (have) return found;
  }

  SparkResult r;
  r.resolved = limit >= std::min<Index>(a.rows() + 1, n);
  r.spark = r.resolved ? full_spark_sentinel(n) : limit + 1;
  return r;
}

double coherence(const Matrix& a) {
  require(a.rows() >= 1 && a.cols() >= 1, "coherence: empty matrix");
  const Index n = a.cols();
  Matrix unit(a.rows(), n);
  for (Index j = 0; j < n; ++j) {
    const double norm = a.col(j).norm();
    require(norm > 0.0,
            "coherence: column " + std::to_string(j) + " is zero");
    unit.col(j) = a.col(j) / norm;
  }
  double mu = 0.0;
  const Matrix gram = unit.transpose() * unit;
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) mu = std::max(mu, std::abs(gram(i, j)));
  return std::min(mu, 1.0);
}

RipEstimate rip_constant(const Matrix& a, Index k, RipMode mode) {
  require(a.rows() >= 1 && a.cols() >= 1, "rip_constant: empty matrix");
  const Index n = a.cols();
  require(k >= 1 && k <= n, "rip_constant: order k out of range");

  RipEstimate est;
  est.k = k;
  est.mode = mode;

  Eigen::SelfAdjointEigenSolver<Matrix> es;
  double delta = 0.0;

  if (mode == RipMode::Exhaustive) {
    require(binomial(n, k) <= 1e6,
            "rip_constant: C(n,k) exceeds exhaustive guard 1e6");
    for_each_subset(n, k, [&](const std::vector<Index>& idx) {
      delta = std::max(delta, support_delta(a, idx, es));
      return true;
    });
  } else {
    // Deterministic sample, independent of caller seeds.
    Xoshiro256pp rng(derive_seed(0xD17AC01DULL,
                                 {static_cast<std::uint64_t>(n),
                                  static_cast<std::uint64_t>(k)}));
    std::vector<Index> pool(n);
    std::vector<Index> idx(k);
    for (Index s = 0; s < kSampledSupportCount; ++s) {
      std::iota(pool.begin(), pool.end(), Index{0});
      for (Index i = 0; i < k; ++i) {
        const Index pick =
            i + static_cast<Index>(rng.uniform01() * double(n - i));
        std::swap(pool[i], pool[std::min(pick, n - 1)]);
        idx[i] = pool[i];
      }
      std::sort(idx.begin(), idx.end());
      delta = std::max(delta, support_delta(a, idx, es));
    }
  }

  est.delta = delta;
  est.failed = !(delta < 1.0);
  return est;
}

IntraGroupReport intra_group_check(const Matrix& a, Index gamma, double tau) {
  require(a.rows() >= 1 && a.cols() >= 1, "intra_group_check: empty matrix");
  require(gamma >= 1, "intra_group_check: gamma must be >= 1");
  require(a.cols() % gamma == 0,
          "intra_group_check: gamma " + std::to_string(gamma) +
              " does not divide cols " + std::to_string(a.cols()));

  const Index groups = a.cols() / gamma;
  IntraGroupReport rep;
  rep.within_group_equal = true;
  for (Index g = 0; g < groups && rep.within_group_equal; ++g)
    for (Index i = 1; i < gamma; ++i)
      if (!(a.col(g * gamma).array() == a.col(g * gamma + i).array()).all()) {
        rep.within_group_equal = false;
        break;
      }

  Matrix reps(a.rows(), groups);
  for (Index g = 0; g < groups; ++g) reps.col(g) = a.col(g * gamma);
  rep.cross_group_coherence = groups >= 2 ? coherence(reps) : 0.0;
  rep.holds = rep.within_group_equal && rep.cross_group_coherence < tau;
  return rep;
}

double default_intra_group_tau(Index rows, Index cols) {
  if (cols <= rows || cols < 2) return 0.0;
  const double welch = std::sqrt(static_cast<double>(cols - rows) /
                                 (static_cast<double>(rows) * double(cols - 1)));
  return std::min(0.99, 10.0 * welch);
}

UniquenessBounds uniqueness_bounds(const Matrix& a, Index spark_limit) {
  UniquenessBounds b;
  const SparkResult sp = spark(a, spark_limit);
  b.k_spark = (sp.spark - 1) / 2;
  const double mu = coherence(a);
  if (mu < 1e-15) {
    b.k_mu = a.cols();
  } else {
    const double bound = 0.5 * (1.0 + 1.0 / mu);
    b.k_mu = static_cast<Index>(std::ceil(bound - 1e-12)) - 1;
  }
  return b;
}

Vector l0_oracle(const Matrix& psi, const Vector& y, Index kmax) {
  require(psi.rows() == y.size(), "l0_oracle: dimension mismatch");
  const Index n = psi.cols();
  require(n >= 1 && n <= 20, "l0_oracle: cols must be in [1, 20]");
  require(kmax >= 0 && kmax <= 4, "l0_oracle: kmax must be in [0, 4]");

  const double ny = y.norm();
  if (ny == 0.0) return Vector::Zero(n);
  const double tol = 1e-8 * ny;

  for (Index k = 1; k <= kmax; ++k) {
    bool have = false;
    double best_res = 0.0;
    std::vector<Index> best_idx;
    Vector best_coef;
    for_each_subset(n, k, [&](const std::vector<Index>& idx) {
      const Matrix sub = gather_columns(psi, idx);
      const Vector coef = Eigen::ColPivHouseholderQR<Matrix>(sub).solve(y);
      const double res = (sub * coef - y).norm();
      if (res <= tol && (!have || res < best_res)) {
        have = true;
        best_res = res;
        best_idx = idx;
        best_coef = coef;
      }
      return true;
    });
    if (have) {
      Vector s = Vector::Zero(n);
      for (std::size_t i = 0; i < best_idx.size(); ++i)
        s[best_idx[i]] = best_coef[static_cast<Index>(i)];
      return s;
    }
  }
  throw std::runtime_error(
      "l0_oracle: no support within the sparsity budget achieves the residual bound");
}

}  // namespace dkstp
