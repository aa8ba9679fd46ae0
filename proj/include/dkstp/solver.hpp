#pragma once

#include "dkstp/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace dkstp {

enum class SolverKind : std::uint8_t { BP = 0, BPDN = 1, OMP = 2 };

const char* to_string(SolverKind k);
SolverKind solver_kind_from_string(const std::string& s);

struct SolverConfig {
  SolverKind kind = SolverKind::BP;
  Index max_iters = 2000;
  double abs_tol = 1e-7;
  double rel_tol = 1e-5;
  double rho = 1.0;        // splitting penalty (BP/BPDN)
  double lambda = 0.01;    // BPDN regularization weight
  Index omp_sparsity = 0;  // atom budget; 0 selects rows/4 (at least 1)
};

struct SolveReport {
  Vector solution;
  Index iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  bool converged = false;
};

// A linear measurement system y = Phi v presented through callbacks so that
// structured operators (Kronecker factors, group reductions, compositions
// with a sparsifying basis) never have to materialize.  `mul` maps cols-dim
// columns to rows-dim columns, `mul_adjoint` the transpose, `gram` returns
// Phi*Phi^T (rows x rows), `dense` materializes Phi (used by the greedy
// solver and the overdetermined direct path only).
struct LinearSystem {
  Index rows = 0;
  Index cols = 0;
  std::function<Matrix(const Matrix&)> mul;
  std::function<Matrix(const Matrix&)> mul_adjoint;
  std::function<Matrix()> gram;
  std::function<Matrix()> dense;
};

LinearSystem make_dense_system(Matrix psi);

// L1-minimizing recovery: min ||s||_1  s.t.  psi s = y.
//
// Underdetermined systems run an operator-splitting iteration alternating
// (i) projection onto {s : psi s = y} through a cached factorization of
// psi psi^T, (ii) soft-thresholding with threshold 1/rho, (iii) a dual
// update.  The system is normalized internally by the RMS row norm, which
// makes the iteration and its stopping rule invariant under scaling of
// (psi, y); the convergence flag additionally verifies the residual bound
// in original units.  Square/overdetermined systems take a direct path to
// the unique feasible (least-squares) point.
//
// Rank deficiency (relative spectral tolerance 1e-10) throws.  On
// non-convergence the best iterate is returned with converged=false.
SolveReport basis_pursuit(const Matrix& psi, const Vector& y,
                          const SolverConfig& cfg);

// Noise-tolerant variant: min 0.5*||psi s - y||_2^2 + lambda*||s||_1 by the
// same splitting scheme (x-update via the matrix inversion identity on the
// rows x rows Gram).  lambda <= 0 is rejected; use basis_pursuit instead.
SolveReport bpdn(const Matrix& psi, const Vector& y, const SolverConfig& cfg);

// Greedy max-correlation selection with least-squares refit each step
// (incremental Cholesky).  Stops at the atom budget or when the residual
// norm drops to abs_tol.  Ties break toward the lowest column index.
SolveReport omp(const Matrix& psi, const Vector& y, const SolverConfig& cfg);

// Dispatch on cfg.kind.
SolveReport solve(const Matrix& psi, const Vector& y, const SolverConfig& cfg);

// Multi-right-hand-side variants: column b of y_cols is an independent
// problem over the shared system.  Columns are snapshot the first time they
// individually satisfy the stopping rule, so results match one-at-a-time
// solves while the heavy linear algebra runs batched.
std::vector<SolveReport> basis_pursuit_batch(const LinearSystem& sys,
                                             const Matrix& y_cols,
                                             const SolverConfig& cfg);
std::vector<SolveReport> bpdn_batch(const LinearSystem& sys,
                                    const Matrix& y_cols,
                                    const SolverConfig& cfg);
std::vector<SolveReport> omp_batch(const LinearSystem& sys,
                                   const Matrix& y_cols,
                                   const SolverConfig& cfg);
std::vector<SolveReport> solve_batch(const LinearSystem& sys,
                                     const Matrix& y_cols,
                                     const SolverConfig& cfg);

}  // namespace dkstp
