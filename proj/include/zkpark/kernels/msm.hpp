#pragma once

#include <span>
#include <vector>

#include "zkpark/algebra/curve.hpp"

namespace zkpark::kernels {

/// sum_i scalars[i] * points[i] by independent double-and-add per term.
/// Slow; kept as the testing oracle for the bucket kernels.
G1Jacobian msm_reference(std::span<const G1Affine> points, std::span<const Fr> scalars);

/// Pippenger bucket method, one thread.
G1Jacobian msm_serial(std::span<const G1Affine> points, std::span<const Fr> scalars);

/// Pippenger with windows distributed over OpenMP threads.
G1Jacobian msm_parallel(std::span<const G1Affine> points, std::span<const Fr> scalars);

/// Dispatches on input size.
G1Jacobian msm_dispatch(std::span<const G1Affine> points, std::span<const Fr> scalars);

/// Window width used by the bucket kernels for an input of size n.
unsigned pippenger_window(std::size_t n);

/// scalars[i] * base for every i, by plain double-and-add.
std::vector<G1Affine> fixed_base_mul_serial(const G1Affine& base, std::span<const Fr> scalars);

/// Same result via a precomputed 8-bit window table, scalars split across
/// OpenMP threads.
std::vector<G1Affine> fixed_base_mul_parallel(const G1Affine& base, std::span<const Fr> scalars);

}  // namespace zkpark::kernels
