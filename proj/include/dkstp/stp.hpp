#pragma once

#include "dkstp/types.hpp"

namespace dkstp {

// Kronecker product a (x) b.
Matrix kronecker(const Matrix& a, const Matrix& b);

// Semi-tensor product of arbitrary matrices: both factors are inflated with
// identity blocks up to t = lcm(cols(a), rows(b)) and then multiplied.
// Degenerates to the ordinary product when cols(a) == rows(b).
Matrix stp(const Matrix& a, const Matrix& b);

// Dimension-keeping variants.  `dkstp_weighted` inflates with the unit-norm
// constant vector e_k = (1/sqrt(k), ..., 1/sqrt(k)); the unweighted variant
// uses the all-ones vector.  Both keep the outer dimensions rows(a) x cols(b)
// and degenerate to the ordinary product when cols(a) == rows(b).
Matrix dkstp_weighted(const Matrix& a, const Matrix& b);
Matrix dkstp_unweighted(const Matrix& a, const Matrix& b);

// Sums non-overlapping windows of length gamma.  gamma must divide x.size().
GroupSumSignal group_sum(const Vector& x, Index gamma);

// Right inverse of group_sum up to averaging: every entry of window j becomes
// values[j] / gamma, so group_sum(equalize(g), gamma) == g exactly.
Vector equalize(const GroupSumSignal& g);

// Applies the weighted dimension-keeping operator a (x) e_gamma^T to a signal
// of length cols(a) * gamma without materializing the expansion:
//   (a (x) e_gamma^T) x = (1/sqrt(gamma)) * a * group_sum(x, gamma).
Vector apply_dkstp_operator(const Matrix& a, Index gamma, const Vector& x);

}  // namespace dkstp
