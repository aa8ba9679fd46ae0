#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dkstp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Hard caps that keep expanded/materialized objects at desk scale.  Operators
// above these sizes must stay implicit; materialization throws instead of
// silently allocating gigabytes.
inline constexpr std::uint64_t kMaxMaterializedElements = std::uint64_t{1} << 25;  // ~32M doubles = 256 MB
inline constexpr std::uint64_t kMaxExpandedDim = std::uint64_t{1} << 22;

// A signal reduced by summing non-overlapping windows of length `gamma`.
// Window j covers indices [j*gamma, (j+1)*gamma).
struct GroupSumSignal {
  Index gamma = 1;
  Vector values;

  Index groups() const { return values.size(); }
};

[[noreturn]] inline void fail_invalid(const std::string& msg) {
  throw std::invalid_argument(msg);
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) fail_invalid(msg);
}

}  // namespace dkstp
