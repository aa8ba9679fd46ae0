#pragma once

#include "dkstp/types.hpp"

#include <vector>

namespace dkstp {

// Result of the exhaustive spark search.  `spark` is the size of the
// smallest linearly dependent column subset; a full-column-rank matrix is
// reported with the sentinel value cols+1 and an empty witness.  `resolved`
// is false when the enumeration reached `limit` without finding a dependent
// subset but could not certify full spark either; `spark` is then the lower
// bound limit+1.
struct SparkResult {
  Index spark = 0;
  std::vector<Index> witness;
  bool resolved = true;
};

inline Index full_spark_sentinel(Index cols) { return cols + 1; }

// Exhaustive subset enumeration up to subset size `limit` (guarded:
// limit <= min(cols, 12)).  Dependency decided by SVD rank at relative
// tolerance 1e-10 against the subset's largest singular value.  The witness
// is the lexicographically first dependent subset of minimal size.
SparkResult spark(const Matrix& a, Index limit);

// Mutual coherence: max over i != j of |<a_i, a_j>| / (||a_i|| ||a_j||),
// clamped to [0, 1].  Zero columns are rejected.
double coherence(const Matrix& a);

enum class RipMode : std::uint8_t { Exhaustive = 0, Sampled = 1 };

struct RipEstimate {
  Index k = 0;
  double delta = 0.0;
  bool failed = false;  // delta >= 1: the isometry property of order k fails
  RipMode mode = RipMode::Exhaustive;
};

// Restricted isometry constant of order k: max over supports S, |S| = k, of
// max(lambda_max(G_S) - 1, 1 - lambda_min(G_S)) where G_S is the Gram of the
// S-submatrix.  Exhaustive mode enumerates all C(n,k) supports (guard:
// C(n,k) <= 1e6); Sampled mode evaluates a fixed, deterministically seeded
// sample of supports and is a lower bound.
RipEstimate rip_constant(const Matrix& a, Index k, RipMode mode);

struct IntraGroupReport {
  bool within_group_equal = false;
  double cross_group_coherence = 0.0;
  bool holds = false;
};

// Checks the grouped-column structure: all gamma columns within each group
// bit-identical, and the group representatives (first column of each group)
// mutually incoherent below tau.
IntraGroupReport intra_group_check(const Matrix& a, Index gamma, double tau);

// Default tau: 10x the Welch bound sqrt((n-m)/(m(n-1))) of an m x n matrix,
// capped at 0.99.  Degenerates to 0 when n <= m (pass an explicit tau there).
double default_intra_group_tau(Index rows, Index cols);

// Largest sparsity levels with guaranteed unique recovery:
//   k_spark: largest k with k < spark/2 (conservative if spark unresolved)
//   k_mu:    largest k with k < (1 + 1/mu)/2; mu == 0 means every sparsity
//            level is admissible and k_mu = cols.
struct UniquenessBounds {
  Index k_spark = 0;
  Index k_mu = 0;
};

UniquenessBounds uniqueness_bounds(const Matrix& a, Index spark_limit);

// Exhaustive minimum-L0 reference solver (desk scale: cols <= 20, kmax <= 4).
// Returns the sparsest s with ||psi s - y|| <= 1e-8 ||y||, ties broken by
// smaller residual then lexicographically first support.  Throws when no
// support within the budget achieves the bound.
Vector l0_oracle(const Matrix& psi, const Vector& y, Index kmax);

}  // namespace dkstp
