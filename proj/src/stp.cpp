#include "dkstp/stp.hpp"

#include <cmath>
#include <numeric>

namespace dkstp {

namespace {

void check_nonempty(const Matrix& m, const char* name) {
  if (m.rows() == 0 || m.cols() == 0)
    fail_invalid(std::string(name) + ": matrix must be non-empty");
}

std::uint64_t checked_lcm(Index a, Index b) {
  const std::uint64_t t =
      std::lcm(static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(b));
  if (t > kMaxExpandedDim)
    fail_invalid("stp: lcm expansion dimension " + std::to_string(t) +
                 " exceeds limit " + std::to_string(kMaxExpandedDim));
  return t;
}

void check_product_size(std::uint64_t rows, std::uint64_t cols, const char* name) {
  if (rows * cols > kMaxMaterializedElements)
    fail_invalid(std::string(name) + ": materialized result " +
                 std::to_string(rows) + "x" + std::to_string(cols) +
                 " exceeds element limit");
}

// e_k as a column vector, weighted (1/sqrt(k)) or all-ones.
Vector ones_vector(Index k, bool weighted) {
  const double v = weighted ? 1.0 / std::sqrt(static_cast<double>(k)) : 1.0;
  return Vector::Constant(k, v);
}

Matrix dkstp_impl(const Matrix& a, const Matrix& b, bool weighted) {
  check_nonempty(a, "dkstp");
  check_nonempty(b, "dkstp");
  if (a.cols() == b.rows()) return a * b;

  const std::uint64_t t = checked_lcm(a.cols(), b.rows());
  const Index ka = static_cast<Index>(t) / a.cols();
  const Index kb = static_cast<Index>(t) / b.rows();
  check_product_size(a.rows(), t, "dkstp");
  check_product_size(t, b.cols(), "dkstp");

  // a (x) e_ka^T  is rows(a) x t,  b (x) e_kb  is t x cols(b).
  const Matrix left = kronecker(a, ones_vector(ka, weighted).transpose());
  const Matrix right = kronecker(b, ones_vector(kb, weighted));
  return left * right;
}

}  // namespace

Matrix kronecker(const Matrix& a, const Matrix& b) {
  check_nonempty(a, "kronecker");
  check_nonempty(b, "kronecker");
  const std::uint64_t rows =
      static_cast<std::uint64_t>(a.rows()) * static_cast<std::uint64_t>(b.rows());
  const std::uint64_t cols =
      static_cast<std::uint64_t>(a.cols()) * static_cast<std::uint64_t>(b.cols());
  check_product_size(rows, cols, "kronecker");

  Matrix out(static_cast<Index>(rows), static_cast<Index>(cols));
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Matrix stp(const Matrix& a, const Matrix& b) {
  check_nonempty(a, "stp");
  check_nonempty(b, "stp");
  if (a.cols() == b.rows()) return a * b;

  const std::uint64_t t = checked_lcm(a.cols(), b.rows());
  const Index ka = static_cast<Index>(t) / a.cols();
  const Index kb = static_cast<Index>(t) / b.rows();
  check_product_size(static_cast<std::uint64_t>(a.rows()) * ka, t, "stp");
  check_product_size(t, static_cast<std::uint64_t>(b.cols()) * kb, "stp");

  const Matrix left = kronecker(a, Matrix::Identity(ka, ka));
  const Matrix right = kronecker(b, Matrix::Identity(kb, kb));
  return left * right;
}

Matrix dkstp_weighted(const Matrix& a, const Matrix& b) {
  return dkstp_impl(a, b, true);
}

Matrix dkstp_unweighted(const Matrix& a, const Matrix& b) {
  return dkstp_impl(a, b, false);
}

GroupSumSignal group_sum(const Vector& x, Index gamma) {
  require(gamma >= 1, "group_sum: gamma must be >= 1");
  require(x.size() > 0, "group_sum: empty signal");
  require(x.size() % gamma == 0,
          "group_sum: gamma " + std::to_string(gamma) +
              " does not divide signal length " + std::to_string(x.size()));

  GroupSumSignal g;
  g.gamma = gamma;
  g.values.resize(x.size() / gamma);
  for (Index j = 0; j < g.values.size(); ++j) {
    double s = 0.0;
    for (Index i = 0; i < gamma; ++i) s += x[j * gamma + i];
    g.values[j] = s;
  }
  return g;
}

Vector equalize(const GroupSumSignal& g) {
  require(g.gamma >= 1, "equalize: gamma must be >= 1");
  require(g.values.size() > 0, "equalize: empty group signal");
  const Index gamma = g.gamma;
  Vector x(g.values.size() * gamma);
  for (Index j = 0; j < g.values.size(); ++j) {
    const double v = g.values[j];
    const double w = v / static_cast<double>(gamma);
    // The last window entry absorbs the division rounding residual so that
    // group_sum() recovers v bit-exactly (the subtraction is exact because
    // the partial sum lies within a factor of two of v).
    double partial = 0.0;
    for (Index i = 0; i + 1 < gamma; ++i) {
      x[j * gamma + i] = w;
      partial += w;
    }
    x[j * gamma + gamma - 1] = v - partial;
  }
  return x;
}

Vector apply_dkstp_operator(const Matrix& a, Index gamma, const Vector& x) {
  check_nonempty(a, "apply_dkstp_operator");
  require(gamma >= 1, "apply_dkstp_operator: gamma must be >= 1");
  require(x.size() == a.cols() * gamma,
          "apply_dkstp_operator: signal length " + std::to_string(x.size()) +
              " != cols(a) * gamma = " + std::to_string(a.cols() * gamma));
  if (gamma == 1) return a * x;
  const GroupSumSignal g = group_sum(x, gamma);
  return (a * g.values) / std::sqrt(static_cast<double>(gamma));
}

}  // namespace dkstp
