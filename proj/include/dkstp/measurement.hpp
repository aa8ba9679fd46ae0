#pragma once

#include "dkstp/types.hpp"

#include <cstdint>
#include <string>

namespace dkstp {

enum class MatrixKind : std::uint8_t { Gaussian = 0, Bernoulli = 1, Toeplitz = 2 };
enum class Scaling : std::uint8_t { Unit = 0, InvSqrtRows = 1 };
enum class Method : std::uint8_t { CS = 0, STPCS = 1, DKSTPCS = 2 };

const char* to_string(MatrixKind k);
const char* to_string(Scaling s);
const char* to_string(Method m);
MatrixKind matrix_kind_from_string(const std::string& s);
Method method_from_string(const std::string& s);

// Everything needed to regenerate a stored random matrix bit-for-bit.
struct MatrixDescriptor {
  MatrixKind kind = MatrixKind::Gaussian;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::uint64_t seed = 0;
  Scaling scaling = Scaling::Unit;
};

// Deterministically generates the matrix described by `d`.  Entries are
// drawn row-major (row 0 left to right, then row 1, ...) from a
// Xoshiro256pp stream seeded with d.seed:
//   Gaussian  - i.i.d. standard normals
//   Bernoulli - i.i.d. +1/-1 signs
//   Toeplitz  - a length rows+cols-1 normal sequence g laid out along
//               diagonals, entry (i,j) = g[i - j + cols - 1]
// Scaling::InvSqrtRows multiplies every entry by 1/sqrt(rows).
Matrix generate_matrix(const MatrixDescriptor& d);

// A measurement scheme: which compression family, the grouping factor, and
// the descriptor of the stored random matrix.
struct SensingScheme {
  Method method = Method::CS;
  Index gamma = 1;
  MatrixDescriptor descriptor;
};

// Computes the stored-matrix shape for a scheme and fills in the descriptor
// dimensions.  signal_dim is the length p of the vectorized block; m is the
// number of measurements.
//   CS       stores m x p
//   STPCS    stores (m/gamma) x (p/gamma), expanded as A (x) I_gamma
//   DKSTPCS  stores m x (p/gamma), expanded as A (x) e_gamma^T (weighted)
SensingScheme make_scheme(Method method, MatrixKind kind, Index gamma,
                          std::uint64_t seed, Scaling scaling, Index signal_dim,
                          Index measurements);

// A sensing operator bound to a concrete signal dimension.  The expanded
// matrix is kept implicit; applications use the stored factor directly.
class SensingOperator {
 public:
  // Validates divisibility and descriptor consistency, generates the stored
  // matrix.
  SensingOperator(const SensingScheme& scheme, Index signal_dim,
                  Index measurements);

  const SensingScheme& scheme() const { return scheme_; }
  Method method() const { return scheme_.method; }
  Index gamma() const { return scheme_.gamma; }
  Index signal_dim() const { return signal_dim_; }
  Index measurements() const { return measurements_; }
  const Matrix& stored() const { return stored_; }

  // Number of scalars that must be transmitted/stored to rebuild the
  // operator deterministically (the stored factor's element count).
  std::uint64_t stored_parameter_count() const {
    return static_cast<std::uint64_t>(stored_.rows()) *
           static_cast<std::uint64_t>(stored_.cols());
  }

  // y = Phi x for a full-length signal (length signal_dim).  For DKSTPCS the
  // group-sum reduction and 1/sqrt(gamma) weight are applied internally.
  Vector apply(const Vector& x) const;
  Matrix apply_block(const Matrix& x_cols) const;  // one signal per column

  // The linear-solve domain: the space the reconstruction problem lives in.
  // CS / STPCS solve for the full signal (dim p); DKSTPCS solves for the
  // group-sum signal (dim p/gamma).
  Index solve_dim() const;
  Matrix apply_solve_domain(const Matrix& v_cols) const;           // m x B
  Matrix apply_solve_domain_adjoint(const Matrix& w_cols) const;   // solve_dim x B
  // Gram matrix (m x m) of the solve-domain operator.
  Matrix gram() const;

  // Dense expanded m x p matrix (CS: A, STPCS: A (x) I, DKSTPCS: weighted
  // A (x) e^T).  Guarded by the materialization limit; test/CLI use only.
  Matrix materialized() const;

 private:
  SensingScheme scheme_;
  Index signal_dim_ = 0;
  Index measurements_ = 0;
  Matrix stored_;
};

// Convenience wrapper matching the scheme validation in the constructor.
SensingOperator build_operator(const SensingScheme& scheme, Index signal_dim,
                               Index measurements);

}  // namespace dkstp
