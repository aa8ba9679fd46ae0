#include "dkstp/solver.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <cmath>
#include <memory>

namespace dkstp {

namespace {

constexpr double kRankRelTol = 1e-10;

void validate_config(const SolverConfig& cfg) {
  require(cfg.abs_tol > 0.0 && cfg.rel_tol > 0.0,
          "solver: tolerances must be > 0");
  require(cfg.rho > 0.0, "solver: rho must be > 0");
  require(cfg.lambda >= 0.0, "solver: lambda must be >= 0");
  require(cfg.max_iters >= 1, "solver: max_iters must be >= 1");
}

void validate_system(const LinearSystem& sys, const Matrix& y_cols) {
  require(sys.rows >= 1 && sys.cols >= 1, "solver: empty system");
  require(sys.mul && sys.mul_adjoint && sys.gram, "solver: incomplete system");
  require(y_cols.rows() == sys.rows,
          "solver: measurement length " + std::to_string(y_cols.rows()) +
              " != system rows " + std::to_string(sys.rows));
  require(y_cols.allFinite(), "solver: measurements must be finite");
}

// Factorization of the (normalized) Gram with the rank decision applied.
Eigen::LDLT<Matrix> checked_gram_ldlt(const Matrix& gram, const char* who) {
  Eigen::LDLT<Matrix> ldlt(gram);
  bool deficient = ldlt.info() != Eigen::Success;
  if (!deficient) {
    const Vector d = ldlt.vectorD();
    const double dmax = d.maxCoeff();
    deficient = !(dmax > 0.0) || d.minCoeff() <= dmax * kRankRelTol;
  }
  if (deficient)
    fail_invalid(std::string(who) +
                 ": psi is rank-deficient (relative tolerance 1e-10)");
  return ldlt;
}

Matrix soft_threshold(const Matrix& a, double kappa) {
  return a.array().sign() * (a.array().abs() - kappa).max(0.0);
}

// Unique-feasible-point path for square and overdetermined systems, where
// the L1 objective has no freedom left.
std::vector<SolveReport> bp_direct(const LinearSystem& sys,
                                   const Matrix& y_cols,
                                   const SolverConfig& cfg) {
  const Index m = sys.rows, n = sys.cols, nb = y_cols.cols();
  Matrix x;
  if (n == m) {
    // s = psi^T (psi psi^T)^{-1} y with one refinement sweep.
    Matrix g = sys.gram();
    const double sigma2 = g.trace() / static_cast<double>(m);
    require(sigma2 > 0.0, "basis_pursuit: zero operator");
    g /= sigma2;
    const auto ldlt = checked_gram_ldlt(g, "basis_pursuit");
    x = sys.mul_adjoint(ldlt.solve(y_cols / sigma2));
    x += sys.mul_adjoint(ldlt.solve((y_cols - sys.mul(x)) / sigma2));
  } else {
    require(static_cast<bool>(sys.dense),
            "basis_pursuit: overdetermined system needs dense access");
    const Matrix d = sys.dense();
    Eigen::ColPivHouseholderQR<Matrix> qr(d);
    qr.setThreshold(kRankRelTol);
    if (qr.rank() < n)
      fail_invalid("basis_pursuit: psi is rank-deficient (relative tolerance 1e-10)");
    x = qr.solve(y_cols);
  }

  const Matrix resid = sys.mul(x) - y_cols;
  std::vector<SolveReport> out(nb);
  for (Index b = 0; b < nb; ++b) {
    const double feas = resid.col(b).norm();
    const double ny = y_cols.col(b).norm();
    SolveReport& r = out[b];
    r.solution = x.col(b);
    r.iterations = 1;
    r.primal_residual = feas;
    r.dual_residual = 0.0;
    r.converged = feas <= 1e-6 * std::max(1.0, ny) &&
                  feas <= cfg.abs_tol * std::sqrt(double(m)) + cfg.rel_tol * ny;
  }
  return out;
}

}  // namespace

const char* to_string(SolverKind k) {
  switch (k) {
    case SolverKind::BP: return "bp";
    case SolverKind::BPDN: return "bpdn";
    case SolverKind::OMP: return "omp";
  }
  return "?";
}

SolverKind solver_kind_from_string(const std::string& s) {
  if (s == "bp") return SolverKind::BP;
  if (s == "bpdn") return SolverKind::BPDN;
  if (s == "omp") return SolverKind::OMP;
  fail_invalid("unknown solver '" + s + "' (expected bp|bpdn|omp)");
}

LinearSystem make_dense_system(Matrix psi) {
  auto sp = std::make_shared<Matrix>(std::move(psi));
  LinearSystem sys;
  sys.rows = sp->rows();
  sys.cols = sp->cols();
  sys.mul = [sp](const Matrix& v) -> Matrix { return (*sp) * v; };
  sys.mul_adjoint = [sp](const Matrix& w) -> Matrix {
    return sp->transpose() * w;
  };
  sys.gram = [sp]() -> Matrix { return (*sp) * sp->transpose(); };
  sys.dense = [sp]() -> Matrix { return *sp; };
  return sys;
}

std::vector<SolveReport> basis_pursuit_batch(const LinearSystem& sys,
                                             const Matrix& y_cols,
                                             const SolverConfig& cfg) {
  validate_config(cfg);
  validate_system(sys, y_cols);
  const Index m = sys.rows, n = sys.cols, nb = y_cols.cols();
  if (nb == 0) return {};
  if (n <= m) return bp_direct(sys, y_cols, cfg);

  // Normalize by the RMS row norm so the iteration (and its stopping rule)
  // is invariant under scaling of (psi, y).
  Matrix g = sys.gram();
  const double sigma2 = g.trace() / static_cast<double>(m);
  require(sigma2 > 0.0, "basis_pursuit: zero operator");
  const double sigma = std::sqrt(sigma2);
  g /= sigma2;
  const auto ldlt = checked_gram_ldlt(g, "basis_pursuit");

  const Matrix yh = y_cols / sigma;
  Vector norm_y(nb), norm_yh(nb);
  for (Index b = 0; b < nb; ++b) {
    norm_y[b] = y_cols.col(b).norm();
    norm_yh[b] = yh.col(b).norm();
  }

  const double kappa = 1.0 / cfg.rho;
  const double root_m = std::sqrt(static_cast<double>(m));
  const double root_n = std::sqrt(static_cast<double>(n));

  Matrix x = Matrix::Zero(n, nb), z = Matrix::Zero(n, nb),
         u = Matrix::Zero(n, nb), z_prev(n, nb);
  Matrix sol = Matrix::Zero(n, nb);

  std::vector<SolveReport> out(nb);
  std::vector<char> done(nb, 0);
  Index remaining = nb;
  Index it = 0;

  while (it < cfg.max_iters && remaining > 0) {
    ++it;
    const Matrix v = z - u;
    // Projection onto {s : psi s = y} in the normalized system.
    x = v - sys.mul_adjoint(ldlt.solve(sys.mul(v) / sigma2 - yh / sigma));
    z_prev.swap(z);
    z = soft_threshold(x + u, kappa);
    u += x - z;

    for (Index b = 0; b < nb; ++b) {
      if (done[b]) continue;
      const double rp = (x.col(b) - z.col(b)).norm();
      const double rd = cfg.rho * (z.col(b) - z_prev.col(b)).norm();
      const double eps_pri = cfg.abs_tol * root_m + cfg.rel_tol * norm_yh[b];
      const double eps_dual =
          cfg.abs_tol * root_n + cfg.rel_tol * cfg.rho * u.col(b).norm();
      if (rp <= eps_pri && rd <= eps_dual) {
        done[b] = 1;
        --remaining;
        sol.col(b) = x.col(b);
        SolveReport& r = out[b];
        r.iterations = it;
        r.primal_residual = rp;
        r.dual_residual = rd;
        // The stopping rule is scale-invariant; the flag also certifies the
        // residual bound in original units.
        r.converged = rp <= cfg.abs_tol * root_m + cfg.rel_tol * norm_y[b];
      }
    }
  }

  for (Index b = 0; b < nb; ++b) {
    if (!done[b]) {
      sol.col(b) = x.col(b);
      SolveReport& r = out[b];
      r.iterations = it;
      r.primal_residual = (x.col(b) - z.col(b)).norm();
      r.dual_residual = cfg.rho * (z.col(b) - z_prev.col(b)).norm();
      r.converged = false;
    }
    out[b].solution = sol.col(b);
  }
  return out;
}

std::vector<SolveReport> bpdn_batch(const LinearSystem& sys,
                                    const Matrix& y_cols,
                                    const SolverConfig& cfg) {
  validate_config(cfg);
  require(cfg.lambda > 0.0, "bpdn: lambda must be > 0 (use bp for lambda = 0)");
  validate_system(sys, y_cols);
  const Index m = sys.rows, n = sys.cols, nb = y_cols.cols();
  if (nb == 0) return {};

  // x-update solves (psi^T psi + rho I) x = psi^T y + rho (z - u) through the
  // matrix inversion identity on the rows x rows Gram.
  Matrix g = sys.gram();
  g.diagonal().array() += cfg.rho;
  const Eigen::LDLT<Matrix> ldlt(g);
  require(ldlt.info() == Eigen::Success, "bpdn: Gram factorization failed");

  const Matrix q = sys.mul_adjoint(y_cols);
  const double kappa = cfg.lambda / cfg.rho;
  const double root_m = std::sqrt(static_cast<double>(m));
  const double root_n = std::sqrt(static_cast<double>(n));
  Vector norm_y(nb);
  for (Index b = 0; b < nb; ++b) norm_y[b] = y_cols.col(b).norm();

  Matrix x = Matrix::Zero(n, nb), z = Matrix::Zero(n, nb),
         u = Matrix::Zero(n, nb), z_prev(n, nb);
  Matrix sol = Matrix::Zero(n, nb);

  std::vector<SolveReport> out(nb);
  std::vector<char> done(nb, 0);
  Index remaining = nb;
  Index it = 0;

  while (it < cfg.max_iters && remaining > 0) {
    ++it;
    const Matrix v = q + cfg.rho * (z - u);
    x = (v - sys.mul_adjoint(ldlt.solve(sys.mul(v)))) / cfg.rho;
    z_prev.swap(z);
    z = soft_threshold(x + u, kappa);
    u += x - z;

    for (Index b = 0; b < nb; ++b) {
      if (done[b]) continue;
      const double rp = (x.col(b) - z.col(b)).norm();
      const double rd = cfg.rho * (z.col(b) - z_prev.col(b)).norm();
      const double eps_pri = cfg.abs_tol * root_m + cfg.rel_tol * norm_y[b];
      const double eps_dual =
          cfg.abs_tol * root_n + cfg.rel_tol * cfg.rho * u.col(b).norm();
      if (rp <= eps_pri && rd <= eps_dual) {
        done[b] = 1;
        --remaining;
        sol.col(b) = z.col(b);
        SolveReport& r = out[b];
        r.iterations = it;
        r.primal_residual = rp;
        r.dual_residual = rd;
        r.converged = true;
      }
    }
  }

  for (Index b = 0; b < nb; ++b) {
    if (!done[b]) {
      sol.col(b) = z.col(b);
      SolveReport& r = out[b];
      r.iterations = it;
      r.primal_residual = (x.col(b) - z.col(b)).norm();
      r.dual_residual = cfg.rho * (z.col(b) - z_prev.col(b)).norm();
      r.converged = false;
    }
    out[b].solution = sol.col(b);
  }
  return out;
}

std::vector<SolveReport> omp_batch(const LinearSystem& sys,
                                   const Matrix& y_cols,
                                   const SolverConfig& cfg) {
  validate_config(cfg);
  validate_system(sys, y_cols);
  require(static_cast<bool>(sys.dense), "omp: system needs dense access");
  const Index m = sys.rows, n = sys.cols, nb = y_cols.cols();
  if (nb == 0) return {};

  const Matrix d = sys.dense();
  const Vector col_sq = d.colwise().squaredNorm();
  require(col_sq.minCoeff() > 0.0, "omp: psi has a zero column");

  const Index budget =
      cfg.omp_sparsity > 0 ? std::min<Index>(cfg.omp_sparsity, std::min(m, n))
                           : std::max<Index>(1, m / 4);
  const double root_m = std::sqrt(static_cast<double>(m));

  std::vector<SolveReport> out(nb);
  for (Index b = 0; b < nb; ++b) {
    const Vector y = y_cols.col(b);
    const double ny = y.norm();
    Vector r = y;

    std::vector<Index> sel;
    Matrix chol(budget, budget);  // lower-triangular factor of the selected Gram
    Vector rhs(budget);           // psi_sel^T y
    Vector coef;

    while (static_cast<Index>(sel.size()) < budget && r.norm() > cfg.abs_tol) {
      const Vector corr = d.transpose() * r;
      Index best = -1;
      double best_abs = 0.0;
      for (Index j = 0; j < n; ++j) {
        const double a = std::abs(corr[j]);
        if (a > best_abs) {
          best_abs = a;
          best = j;
        }
      }
      if (best < 0 || best_abs == 0.0) break;

      // Incremental Cholesky of psi_sel^T psi_sel.
      const Index k = static_cast<Index>(sel.size());
      double diag = col_sq[best];
      if (k > 0) {
        Vector cross(k);
        for (Index i = 0; i < k; ++i) cross[i] = d.col(sel[i]).dot(d.col(best));
        const Vector w = chol.topLeftCorner(k, k)
                             .triangularView<Eigen::Lower>()
                             .solve(cross);
        diag -= w.squaredNorm();
        if (diag <= 1e-12 * col_sq[best]) break;  // numerically dependent atom
        chol.block(k, 0, 1, k) = w.transpose();
      }
      chol(k, k) = std::sqrt(diag);
      rhs[k] = d.col(best).dot(y);
      sel.push_back(best);

      const Index kk = static_cast<Index>(sel.size());
      const auto l = chol.topLeftCorner(kk, kk).triangularView<Eigen::Lower>();
      coef = l.transpose().solve(l.solve(rhs.head(kk)));

      r = y;
      for (Index i = 0; i < kk; ++i) r -= coef[i] * d.col(sel[i]);
    }

    SolveReport& rep = out[b];
    rep.solution = Vector::Zero(n);
    for (std::size_t i = 0; i < sel.size(); ++i)
      rep.solution[sel[i]] = coef[static_cast<Index>(i)];
    rep.iterations = static_cast<Index>(sel.size());
    rep.primal_residual = r.norm();
    rep.dual_residual = 0.0;
    rep.converged =
        rep.primal_residual <= cfg.abs_tol * root_m + cfg.rel_tol * ny;
  }
  return out;
}

std::vector<SolveReport> solve_batch(const LinearSystem& sys,
                                     const Matrix& y_cols,
                                     const SolverConfig& cfg) {
  switch (cfg.kind) {
    case SolverKind::BP: return basis_pursuit_batch(sys, y_cols, cfg);
    case SolverKind::BPDN: return bpdn_batch(sys, y_cols, cfg);
    case SolverKind::OMP: return omp_batch(sys, y_cols, cfg);
  }
  fail_invalid("solver: bad kind");
}

SolveReport basis_pursuit(const Matrix& psi, const Vector& y,
                          const SolverConfig& cfg) {
  return basis_pursuit_batch(make_dense_system(psi), y, cfg).front();
}

SolveReport bpdn(const Matrix& psi, const Vector& y, const SolverConfig& cfg) {
  return bpdn_batch(make_dense_system(psi), y, cfg).front();
}

SolveReport omp(const Matrix& psi, const Vector& y, const SolverConfig& cfg) {
  return omp_batch(make_dense_system(psi), y, cfg).front();
}

SolveReport solve(const Matrix& psi, const Vector& y, const SolverConfig& cfg) {
  return solve_batch(make_dense_system(psi), y, cfg).front();
}

}  // namespace dkstp
