#include "dkstp/measurement.hpp"

#include "dkstp/rng.hpp"
#include "dkstp/stp.hpp"

#include <cmath>

namespace dkstp {

const char* to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::Gaussian: return "gaussian";
    case MatrixKind::Bernoulli: return "bernoulli";
    case MatrixKind::Toeplitz: return "toeplitz";
  }
  return "?";
}

const char* to_string(Scaling s) {
  return s == Scaling::Unit ? "unit" : "invsqrt";
}

const char* to_string(Method m) {
  switch (m) {
    case Method::CS: return "cs";
    case Method::STPCS: return "stp";
    case Method::DKSTPCS: return "dkstp";
  }
  return "?";
}

MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "gaussian") return MatrixKind::Gaussian;
  if (s == "bernoulli") return MatrixKind::Bernoulli;
  if (s == "toeplitz") return MatrixKind::Toeplitz;
  fail_invalid("unknown matrix kind '" + s +
               "' (expected gaussian|bernoulli|toeplitz)");
}

Method method_from_string(const std::string& s) {
  if (s == "cs") return Method::CS;
  if (s == "stp") return Method::STPCS;
  if (s == "dkstp") return Method::DKSTPCS;
  fail_invalid("unknown method '" + s + "' (expected cs|stp|dkstp)");
}

Matrix generate_matrix(const MatrixDescriptor& d) {
  require(d.rows >= 1 && d.cols >= 1, "generate_matrix: empty shape");
  const std::uint64_t elems =
      static_cast<std::uint64_t>(d.rows) * static_cast<std::uint64_t>(d.cols);
  require(elems <= kMaxMaterializedElements,
          "generate_matrix: " + std::to_string(d.rows) + "x" +
              std::to_string(d.cols) + " exceeds element limit");

  const Index rows = static_cast<Index>(d.rows);
  const Index cols = static_cast<Index>(d.cols);
  Matrix m(rows, cols);
  Xoshiro256pp rng(d.seed);

  switch (d.kind) {
    case MatrixKind::Gaussian:
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
      break;
    case MatrixKind::Bernoulli:
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = rng.sign_unit();
      break;
    case MatrixKind::Toeplitz: {
      Vector g(rows + cols - 1);
      for (Index k = 0; k < g.size(); ++k) g[k] = rng.normal();
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) m(i, j) = g[i - j + cols - 1];
      break;
    }
  }

  if (d.scaling == Scaling::InvSqrtRows)
    m *= 1.0 / std::sqrt(static_cast<double>(rows));
  return m;
}

SensingScheme make_scheme(Method method, MatrixKind kind, Index gamma,
                          std::uint64_t seed, Scaling scaling, Index signal_dim,
                          Index measurements) {
  require(signal_dim >= 1, "make_scheme: signal_dim must be >= 1");
  require(measurements >= 1, "make_scheme: measurements must be >= 1");
  require(gamma >= 1, "make_scheme: gamma must be >= 1");

  SensingScheme s;
  s.method = method;
  s.gamma = (method == Method::CS) ? 1 : gamma;
  s.descriptor.kind = kind;
  s.descriptor.seed = seed;
  s.descriptor.scaling = scaling;

  Index rows = measurements, cols = signal_dim;
  switch (method) {
    case Method::CS:
      break;
    case Method::STPCS:
      require(signal_dim % gamma == 0,
              "make_scheme: gamma " + std::to_string(gamma) +
                  " does not divide signal_dim " + std::to_string(signal_dim));
      require(measurements % gamma == 0,
              "make_scheme: gamma " + std::to_string(gamma) +
                  " does not divide measurements " +
                  std::to_string(measurements));
      rows = measurements / gamma;
      cols = signal_dim / gamma;
      break;
    case Method::DKSTPCS:
      require(signal_dim % gamma == 0,
              "make_scheme: gamma " + std::to_string(gamma) +
                  " does not divide signal_dim " + std::to_string(signal_dim));
      cols = signal_dim / gamma;
      break;
  }
  s.descriptor.rows = static_cast<std::uint32_t>(rows);
  s.descriptor.cols = static_cast<std::uint32_t>(cols);
  return s;
}

SensingOperator::SensingOperator(const SensingScheme& scheme, Index signal_dim,
                                 Index measurements)
    : scheme_(scheme), signal_dim_(signal_dim), measurements_(measurements) {
  // Recompute the expected stored shape and demand the descriptor match it:
  // a packet whose descriptor disagrees with its own geometry is corrupt.
  const SensingScheme expected =
      make_scheme(scheme.method, scheme.descriptor.kind, scheme.gamma,
                  scheme.descriptor.seed, scheme.descriptor.scaling, signal_dim,
                  measurements);
  require(scheme.descriptor.rows == expected.descriptor.rows &&
              scheme.descriptor.cols == expected.descriptor.cols,
          "sensing operator: descriptor shape " +
              std::to_string(scheme.descriptor.rows) + "x" +
              std::to_string(scheme.descriptor.cols) + " does not match " +
              std::to_string(expected.descriptor.rows) + "x" +
              std::to_string(expected.descriptor.cols) + " expected for " +
              to_string(scheme.method) + " with gamma " +
              std::to_string(scheme.gamma));
  require(scheme.method != Method::CS || scheme.gamma == 1,
          "sensing operator: cs requires gamma == 1");
  stored_ = generate_matrix(scheme.descriptor);
}

SensingOperator build_operator(const SensingScheme& scheme, Index signal_dim,
                               Index measurements) {
  return SensingOperator(scheme, signal_dim, measurements);
}

Index SensingOperator::solve_dim() const {
  return method() == Method::DKSTPCS ? signal_dim_ / gamma() : signal_dim_;
}

Vector SensingOperator::apply(const Vector& x) const {
  require(x.size() == signal_dim_, "sensing operator: signal length " +
                                       std::to_string(x.size()) +
                                       " != " + std::to_string(signal_dim_));
  return apply_block(x).col(0);
}

Matrix SensingOperator::apply_block(const Matrix& x_cols) const {
  require(x_cols.rows() == signal_dim_,
          "sensing operator: block rows " + std::to_string(x_cols.rows()) +
              " != signal dim " + std::to_string(signal_dim_));
  switch (method()) {
    case Method::CS:
      return stored_ * x_cols;
    case Method::STPCS: {
      // (A (x) I_g) x: view x as a g x (p/g) column-major matrix X, then
      // out = X * A^T viewed the same way.
      const Index g = gamma();
      const Index ns = signal_dim_ / g;
      const Index mg = measurements_ / g;
      Matrix out(measurements_, x_cols.cols());
      for (Index b = 0; b < x_cols.cols(); ++b) {
        Eigen::Map<const Matrix> xm(x_cols.col(b).data(), g, ns);
        Eigen::Map<Matrix> om(out.col(b).data(), g, mg);
        om = xm * stored_.transpose();
      }
      return out;
    }
    case Method::DKSTPCS: {
      const Index g = gamma();
      Matrix sums(signal_dim_ / g, x_cols.cols());
      for (Index b = 0; b < x_cols.cols(); ++b)
        sums.col(b) = group_sum(x_cols.col(b), g).values;
      return apply_solve_domain(sums);
    }
  }
  fail_invalid("sensing operator: bad method");
}

Matrix SensingOperator::apply_solve_domain(const Matrix& v_cols) const {
  require(v_cols.rows() == solve_dim(),
          "sensing operator: solve-domain rows " +
              std::to_string(v_cols.rows()) +
              " != " + std::to_string(solve_dim()));
  switch (method()) {
    case Method::CS:
      return stored_ * v_cols;
    case Method::STPCS:
      return apply_block(v_cols);
    case Method::DKSTPCS:
      return (stored_ * v_cols) / std::sqrt(static_cast<double>(gamma()));
  }
  fail_invalid("sensing operator: bad method");
}

Matrix SensingOperator::apply_solve_domain_adjoint(const Matrix& w_cols) const {
  require(w_cols.rows() == measurements_,
          "sensing operator: adjoint rows " + std::to_string(w_cols.rows()) +
              " != " + std::to_string(measurements_));
  switch (method()) {
    case Method::CS:
      return stored_.transpose() * w_cols;
    case Method::STPCS: {
      const Index g = gamma();
      const Index ns = signal_dim_ / g;
      const Index mg = measurements_ / g;
      Matrix out(signal_dim_, w_cols.cols());
      for (Index b = 0; b < w_cols.cols(); ++b) {
        Eigen::Map<const Matrix> wm(w_cols.col(b).data(), g, mg);
        Eigen::Map<Matrix> om(out.col(b).data(), g, ns);
        om = wm * stored_;
      }
      return out;
    }
    case Method::DKSTPCS:
      return (stored_.transpose() * w_cols) /
             std::sqrt(static_cast<double>(gamma()));
  }
  fail_invalid("sensing operator: bad method");
}

Matrix SensingOperator::gram() const {
  switch (method()) {
    case Method::CS:
      return stored_ * stored_.transpose();
    case Method::STPCS:
      return kronecker(stored_ * stored_.transpose(),
                       Matrix::Identity(gamma(), gamma()));
    case Method::DKSTPCS:
      return (stored_ * stored_.transpose()) / static_cast<double>(gamma());
  }
  fail_invalid("sensing operator: bad method");
}

Matrix SensingOperator::materialized() const {
  switch (method()) {
    case Method::CS:
      return stored_;
    case Method::STPCS:
      return kronecker(stored_, Matrix::Identity(gamma(), gamma()));
    case Method::DKSTPCS: {
      const double w = 1.0 / std::sqrt(static_cast<double>(gamma()));
      return kronecker(stored_, Matrix::Constant(1, gamma(), w));
    }
  }
  fail_invalid("sensing operator: bad method");
}

}  // namespace dkstp
