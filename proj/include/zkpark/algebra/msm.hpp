#pragma once

#include <span>

#include "zkpark/algebra/curve.hpp"

namespace zkpark {

/// sum_i scalars[i] * points[i]; the empty sum is the identity. Throws
/// ArgumentError on a length mismatch.
G1Point msm(std::span<const G1Point> points, std::span<const Fr> scalars);

}  // namespace zkpark
