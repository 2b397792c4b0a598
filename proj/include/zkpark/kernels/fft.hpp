#pragma once

#include <span>

#include "zkpark/algebra/fields.hpp"

namespace zkpark::kernels {

// In-place radix-2 decimation-in-time NTT: values[i] <- sum_j values[j] *
// omega^(i*j). values.size() must be a power of two and omega a primitive
// root of unity of exactly that order.

/// Reference kernel; single-threaded.
void fft_serial(std::span<Fr> values, const Fr& omega);

/// OpenMP kernel: butterflies of each stage are split across threads.
/// Produces bit-identical output to fft_serial.
void fft_parallel(std::span<Fr> values, const Fr& omega);

/// Picks the parallel kernel for large inputs when OpenMP has >1 thread.
void fft(std::span<Fr> values, const Fr& omega);

}  // namespace zkpark::kernels
