#include "dkstp/measurement.hpp"
#include "dkstp/rng.hpp"
#include "dkstp/solver.hpp"
#include "dkstp/sparsity.hpp"

#include "doctest.h"
#include "oracles.hpp"

#include <set>

using namespace dkstp;

namespace {

SolverConfig tight_bp() {
  SolverConfig cfg;
  cfg.max_iters = 20000;
  cfg.abs_tol = 1e-11;
  cfg.rel_tol = 1e-9;
  return cfg;
}

Matrix gaussian(Index rows, Index cols, std::uint64_t seed,
                Scaling scaling = Scaling::InvSqrtRows) {
  return generate_matrix(MatrixDescriptor{MatrixKind::Gaussian,
                                          std::uint32_t(rows),
                                          std::uint32_t(cols), seed, scaling});
}

}  // namespace

TEST_CASE("basis pursuit: identity system returns the data") {
  Vector y(4);
  y << 0, 5, 0, 0;
  const SolveReport rep = basis_pursuit(Matrix::Identity(4, 4), y, SolverConfig{});
  CHECK(rep.converged);
  CHECK((rep.solution - y).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("basis pursuit: 2x3 system with a known unique L1 minimizer") {
  Matrix psi(2, 3);
  psi << 1, 0, 0.5, 0, 1, 0.5;
  Vector y(2);
  y << 1, 0;

  // The feasible set is x(t) = (1 - 0.5 t, -0.5 t, t); a grid search over t
  // certifies that the L1 norm is minimized at t = 0, i.e. at (1, 0, 0).
  double best_t = -10, best_l1 = 1e300;
  for (double t = -4.0; t <= 4.0; t += 1e-4) {
    const double l1 = std::abs(1 - 0.5 * t) + std::abs(0.5 * t) + std::abs(t);
    if (l1 < best_l1) {
      best_l1 = l1;
      best_t = t;
    }
  }
  REQUIRE(std::abs(best_t) <= 1e-9);

  const SolveReport rep = basis_pursuit(psi, y, tight_bp());
  CHECK(rep.converged);
  Vector want(3);
  want << 1, 0, 0;
  CHECK((rep.solution - want).norm() <= 1e-8);
}

TEST_CASE("basis pursuit: square invertible system takes the direct path") {
  const Matrix psi = gaussian(12, 12, 3, Scaling::Unit);
  Vector s0(12);
  Xoshiro256pp rng(5);
  for (Index i = 0; i < 12; ++i) s0[i] = rng.normal();
  const Vector y = psi * s0;
  const SolveReport rep = basis_pursuit(psi, y, SolverConfig{});
  CHECK(rep.converged);
  CHECK((rep.solution - s0).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK(rep.iterations <= 2);
}

TEST_CASE("basis pursuit: tall consistent system recovers the preimage") {
  const Matrix psi = gaussian(5, 3, 7, Scaling::Unit);
  Vector s0(3);
  s0 << 0.5, -2.0, 1.25;
  const SolveReport rep = basis_pursuit(psi, psi * s0, SolverConfig{});
  CHECK(rep.converged);
  CHECK((rep.solution - s0).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("basis pursuit: tall inconsistent system reports non-convergence") {
  const Matrix psi = gaussian(5, 3, 11, Scaling::Unit);
  Vector y(5);
  y << 1, 2, 3, 4, 5;  // generically outside the column span
  const SolveReport rep = basis_pursuit(psi, y, SolverConfig{});
  CHECK_FALSE(rep.converged);
  REQUIRE(rep.solution.size() == 3);
}

TEST_CASE("basis pursuit: rank-deficient systems are rejected") {
  Matrix wide(2, 4);
  wide.row(0) = Vector::LinSpaced(4, 1, 4);
  wide.row(1) = 2.0 * wide.row(0);
  CHECK_THROWS_AS(basis_pursuit(wide, Vector::Zero(2), SolverConfig{}),
                  std::invalid_argument);

  Matrix tall(5, 3);
  tall = gaussian(5, 3, 13, Scaling::Unit);
  tall.col(2) = tall.col(0);  // column rank 2 < 3
  CHECK_THROWS_AS(basis_pursuit(tall, Vector::Zero(5), SolverConfig{}),
                  std::invalid_argument);
}

TEST_CASE("basis pursuit: power-of-two rescaling is bit-exact, general scaling close") {
  const Matrix psi = gaussian(10, 30, 17);
  const auto inst = oracle::plant(psi, 3, 40);
  const SolverConfig cfg = tight_bp();
  const SolveReport base = basis_pursuit(psi, inst.y, cfg);
  for (double c : {0.5, 2.0}) {
    const SolveReport scaled = basis_pursuit(c * psi, c * inst.y, cfg);
    CHECK((scaled.solution.array() == base.solution.array()).all());
    CHECK(scaled.iterations == base.iterations);
  }
  const SolveReport ten = basis_pursuit(10.0 * psi, 10.0 * inst.y, cfg);
  CHECK((ten.solution - base.solution).norm() <= 1e-8);
}

TEST_CASE("basis pursuit: converged reports satisfy the residual contract") {
  const Matrix psi = gaussian(12, 40, 19);
  const auto inst = oracle::plant(psi, 3, 41);
  SolverConfig cfg;  // default tolerances
  const SolveReport rep = basis_pursuit(psi, inst.y, cfg);
  REQUIRE(rep.converged);
  CHECK(rep.primal_residual <=
        cfg.abs_tol * std::sqrt(12.0) + cfg.rel_tol * inst.y.norm());
  CHECK((psi * rep.solution - inst.y).norm() <=
        1e-6 * std::max(1.0, inst.y.norm()));
}

TEST_CASE("basis pursuit: iteration budget exhaustion is reported honestly") {
  const Matrix psi = gaussian(20, 80, 23);
  const auto inst = oracle::plant(psi, 8, 42);
  SolverConfig cfg;
  cfg.max_iters = 3;
  const SolveReport rep = basis_pursuit(psi, inst.y, cfg);
  CHECK_FALSE(rep.converged);
  CHECK(rep.iterations == 3);
  REQUIRE(rep.solution.size() == 80);
}

TEST_CASE("basis pursuit: objective never exceeds a feasible planted point") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Matrix psi = gaussian(15, 45, 100 + seed);
    const auto inst = oracle::plant(psi, 4, 200 + seed);
    const SolveReport rep = basis_pursuit(psi, inst.y, tight_bp());
    REQUIRE(rep.converged);
    CHECK(rep.solution.lpNorm<1>() <= inst.s0.lpNorm<1>() + 1e-5);
  }
}

TEST_CASE("bpdn: zero data gives the zero solution") {
  const Matrix psi = gaussian(6, 12, 29);
  SolverConfig cfg;
  cfg.kind = SolverKind::BPDN;
  const SolveReport rep = bpdn(psi, Vector::Zero(6), cfg);
  CHECK(rep.converged);
  CHECK(rep.solution.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("bpdn: identity system soft-thresholds the data") {
  Vector y(5);
  y << 3.0, -0.005, 0.02, -1.5, 0.0;
  SolverConfig cfg;
  cfg.kind = SolverKind::BPDN;
  cfg.lambda = 0.01;
  cfg.max_iters = 20000;
  cfg.abs_tol = 1e-11;
  cfg.rel_tol = 1e-10;
  const SolveReport rep = bpdn(Matrix::Identity(5, 5), y, cfg);
  for (Index i = 0; i < 5; ++i) {
    const double want =
        std::copysign(std::max(std::abs(y[i]) - cfg.lambda, 0.0), y[i]);
    CHECK(rep.solution[i] == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("bpdn: large regularization zeroes the solution") {
  const Matrix psi = gaussian(8, 20, 37);
  Vector y(8);
  Xoshiro256pp rng(6);
  for (Index i = 0; i < 8; ++i) y[i] = rng.normal();
  SolverConfig cfg;
  cfg.kind = SolverKind::BPDN;
  cfg.lambda = (psi.transpose() * y).cwiseAbs().maxCoeff() * 1.001;
  const SolveReport rep = bpdn(psi, y, cfg);
  CHECK(rep.solution.cwiseAbs().maxCoeff() <= 1e-9);
}

TEST_CASE("bpdn: non-positive regularization is rejected") {
  SolverConfig cfg;
  cfg.kind = SolverKind::BPDN;
  cfg.lambda = 0.0;
  CHECK_THROWS_AS(bpdn(Matrix::Identity(3, 3), Vector::Zero(3), cfg),
                  std::invalid_argument);
  cfg.lambda = -1.0;
  CHECK_THROWS_AS(bpdn(Matrix::Identity(3, 3), Vector::Zero(3), cfg),
                  std::invalid_argument);
}

TEST_CASE("bpdn: planted 5-sparse with measurement noise keeps support and values") {
  int support_ok = 0;
  double worst_coef = 0.0;
  const double sigma = 0.01;
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix psi = gaussian(50, 100, 2400 + seed);
    oracle::Xoshiro256ppRef rng(dkstp::derive_seed(99, {seed}));
    std::set<Index> sup;
    while (Index(sup.size()) < 5) sup.insert(Index(rng.uniform01() * 100));
    Vector s0 = Vector::Zero(100);
    for (Index j : sup) s0[j] = rng.sign_unit();
    Vector y = psi * s0;
    for (Index i = 0; i < 50; ++i) y[i] += sigma * rng.normal();

    SolverConfig cfg;
    cfg.kind = SolverKind::BPDN;
    cfg.lambda = 0.005;
    cfg.max_iters = 30000;
    cfg.abs_tol = 1e-10;
    cfg.rel_tol = 1e-8;
    const SolveReport rep = bpdn(psi, y, cfg);

    std::vector<Index> order(100);
    for (Index i = 0; i < 100; ++i) order[i] = i;
    std::partial_sort(order.begin(), order.begin() + 5, order.end(),
                      [&](Index a, Index b) {
                        return std::abs(rep.solution[a]) >
                               std::abs(rep.solution[b]);
                      });
    if (std::set<Index>(order.begin(), order.begin() + 5) == sup) ++support_ok;
    for (Index j : sup)
      worst_coef = std::max(worst_coef, std::abs(rep.solution[j] - s0[j]));
  }
  CHECK(support_ok == 20);
  CHECK(worst_coef <= 5.0 * sigma);
}

TEST_CASE("omp: one-atom data selects that atom first and exactly") {
  // Orthonormal columns via the analysis basis of a DCT.
  const DctBasis basis(10);
  const Matrix psi = basis.matrix();
  const Vector y = 3.0 * psi.col(7);
  SolverConfig cfg;
  cfg.kind = SolverKind::OMP;
  cfg.omp_sparsity = 1;
  const SolveReport rep = omp(psi, y, cfg);
  CHECK(rep.iterations == 1);
  CHECK(rep.solution[7] == doctest::Approx(3.0).epsilon(1e-12));
  Vector rest = rep.solution;
  rest[7] = 0.0;
  CHECK(rest.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("omp: zero data stops immediately") {
  const Matrix psi = gaussian(6, 12, 43);
  SolverConfig cfg;
  cfg.kind = SolverKind::OMP;
  const SolveReport rep = omp(psi, Vector::Zero(6), cfg);
  CHECK(rep.iterations == 0);
  CHECK(rep.converged);
  CHECK(rep.solution.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("omp: ties break toward the lowest column index") {
  Matrix psi(2, 3);
  psi.col(0) << 1, 0;
  psi.col(1) << 1, 0;  // identical correlation with y
  psi.col(2) << 0, 1;
  Vector y(2);
  y << 1, 0;
  SolverConfig cfg;
  cfg.kind = SolverKind::OMP;
  cfg.omp_sparsity = 1;
  const SolveReport rep = omp(psi, y, cfg);
  CHECK(rep.solution[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.solution[1] == 0.0);
}

TEST_CASE("omp: default atom budget is a quarter of the measurements") {
  const Matrix psi = gaussian(8, 16, 47);
  const auto inst = oracle::plant(psi, 3, 48);
  SolverConfig cfg;
  cfg.kind = SolverKind::OMP;
  cfg.abs_tol = 1e-300;  // never stop on the residual
  const SolveReport rep = omp(psi, inst.y, cfg);
  CHECK(rep.iterations == 2);  // max(1, 8/4)
  CHECK((rep.solution.array() != 0.0).count() <= 2);
}

TEST_CASE("omp: planted 3-sparse at 30x60 recovers the exact support") {
  for (unsigned seed = 0; seed < 20; ++seed) {
    const Matrix psi = gaussian(30, 60, 3100 + seed);
    const auto inst = oracle::plant(psi, 3, dkstp::derive_seed(55, {seed}));
    SolverConfig cfg;
    cfg.kind = SolverKind::OMP;
    cfg.omp_sparsity = 3;
    const SolveReport rep = omp(psi, inst.y, cfg);
    std::set<Index> got;
    for (Index i = 0; i < 60; ++i)
      if (rep.solution[i] != 0.0) got.insert(i);
    CHECK(got == inst.support);
    CHECK((rep.solution - inst.s0).norm() <= 1e-8 * inst.s0.norm());
  }
}

TEST_CASE("solve: dispatches on the configured kind") {
  const Matrix psi = Matrix::Identity(3, 3);
  Vector y(3);
  y << 1, -2, 0;
  SolverConfig cfg;
  cfg.kind = SolverKind::OMP;
  cfg.omp_sparsity = 3;
  const SolveReport viaomp = solve(psi, y, cfg);
  CHECK((viaomp.solution - y).cwiseAbs().maxCoeff() <= 1e-10);
  cfg.kind = SolverKind::BP;
  const SolveReport viabp = solve(psi, y, cfg);
  CHECK((viabp.solution - y).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("batch solving matches one-at-a-time solving") {
  const Matrix psi = gaussian(14, 42, 53);
  Matrix ys(14, 4);
  std::vector<Vector> truths;
  for (Index j = 0; j < 4; ++j) {
    const auto inst = oracle::plant(psi, 3, 600 + std::uint64_t(j));
    ys.col(j) = inst.y;
    truths.push_back(inst.s0);
  }
  const SolverConfig cfg = tight_bp();
  const auto batch = basis_pursuit_batch(make_dense_system(psi), ys, cfg);
  REQUIRE(batch.size() == 4);
  for (Index j = 0; j < 4; ++j) {
    const SolveReport solo = basis_pursuit(psi, ys.col(j), cfg);
    CHECK(batch[j].converged == solo.converged);
    CHECK((batch[j].solution - solo.solution).norm() <= 1e-10);
  }
  // Determinism: a second batch run is bit-identical.
  const auto again = basis_pursuit_batch(make_dense_system(psi), ys, cfg);
  for (Index j = 0; j < 4; ++j)
    CHECK((again[j].solution.array() == batch[j].solution.array()).all());
}

TEST_CASE("batch solving through callbacks matches the dense system") {
  // Compose a sensing matrix with a synthesis basis through callbacks, the
  // way the reconstruction pipeline does, and check against the explicit
  // product.
  const Matrix a = gaussian(10, 20, 59);
  const DctBasis basis(20);
  const Matrix dense = a * basis.matrix();

  LinearSystem sys;
  sys.rows = 10;
  sys.cols = 20;
  sys.mul = [&](const Matrix& v) { return a * basis.synthesize_block(v); };
  sys.mul_adjoint = [&](const Matrix& w) {
    return basis.analyze_block(a.transpose() * w);
  };
  sys.gram = [&]() { return a * a.transpose(); };  // basis is orthonormal
  sys.dense = [&]() { return dense; };

  Matrix ys(10, 2);
  const auto i0 = oracle::plant(dense, 2, 700);
  const auto i1 = oracle::plant(dense, 3, 701);
  ys.col(0) = i0.y;
  ys.col(1) = i1.y;
  const SolverConfig cfg = tight_bp();
  const auto via_cb = basis_pursuit_batch(sys, ys, cfg);
  const auto via_dense = basis_pursuit_batch(make_dense_system(dense), ys, cfg);
  for (Index j = 0; j < 2; ++j)
    CHECK((via_cb[j].solution - via_dense[j].solution).norm() <= 1e-9);
}

TEST_CASE("omp batch and bpdn batch match their single-system forms") {
  const Matrix psi = gaussian(12, 24, 61);
  Matrix ys(12, 3);
  for (Index j = 0; j < 3; ++j)
    ys.col(j) = oracle::plant(psi, 2, 800 + std::uint64_t(j)).y;

  SolverConfig omp_cfg;
  omp_cfg.kind = SolverKind::OMP;
  omp_cfg.omp_sparsity = 2;
  const auto ob = omp_batch(make_dense_system(psi), ys, omp_cfg);
  for (Index j = 0; j < 3; ++j)
    CHECK((ob[j].solution - omp(psi, ys.col(j), omp_cfg).solution)
              .cwiseAbs()
              .maxCoeff() <= 1e-12);

  SolverConfig bd_cfg;
  bd_cfg.kind = SolverKind::BPDN;
  bd_cfg.lambda = 0.01;
  const auto bb = bpdn_batch(make_dense_system(psi), ys, bd_cfg);
  for (Index j = 0; j < 3; ++j)
    CHECK((bb[j].solution - bpdn(psi, ys.col(j), bd_cfg).solution)
              .cwiseAbs()
              .maxCoeff() <= 1e-10);
}

TEST_CASE("solver kind strings round trip") {
  CHECK(solver_kind_from_string("bp") == SolverKind::BP);
  CHECK(solver_kind_from_string("bpdn") == SolverKind::BPDN);
  CHECK(solver_kind_from_string("omp") == SolverKind::OMP);
  CHECK(std::string(to_string(SolverKind::BPDN)) == "bpdn");
  CHECK_THROWS_AS(solver_kind_from_string("ista"), std::invalid_argument);
}
