#include "zkpark/kernels/fft.hpp"

#include <algorithm>
#include <utility>
#include <vector>

#include "zkpark/error.hpp"
#include "zkpark/kernels/parallel.hpp"

namespace zkpark::kernels {

namespace {

unsigned log2_exact(std::size_t n) {
  if (n == 0 || (n & (n - 1)) != 0) throw ConfigError("FFT size must be a power of two");
  return static_cast<unsigned>(__builtin_ctzll(n));
}

std::size_t reverse_bits(std::size_t x, unsigned bits) {
  std::size_t r = 0;
  for (unsigned i = 0; i < bits; ++i) {
    r = (r << 1) | (x & 1U);
    x >>= 1;
  }
  return r;
}

void bit_reverse_permute(std::span<Fr> values, unsigned log_n) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::size_t j = reverse_bits(i, log_n);
    if (i < j) std::swap(values[i], values[j]);
  }
}

// roots[k] = omega^k for k < n/2.
std::vector<Fr> half_roots(const Fr& omega, std::size_t n, bool parallel) {
  std::vector<Fr> roots(n / 2);
  if (roots.empty()) return roots;
  if (!parallel) {
    Fr acc = Fr::one();
    for (auto& r : roots) {
      r = acc;
      acc *= omega;
    }
    return roots;
  }
  const auto total = static_cast<std::ptrdiff_t>(roots.size());
#pragma omp parallel
  {
#if defined(_OPENMP)
    const auto threads = static_cast<std::ptrdiff_t>(omp_get_num_threads());
    const auto tid = static_cast<std::ptrdiff_t>(omp_get_thread_num());
#else
    const std::ptrdiff_t threads = 1;
    const std::ptrdiff_t tid = 0;
#endif
    const std::ptrdiff_t chunk = (total + threads - 1) / threads;
    const std::ptrdiff_t begin = tid * chunk;
    const std::ptrdiff_t end = std::min(total, begin + chunk);
    if (begin < end) {
      Fr acc = omega.pow(static_cast<std::uint64_t>(begin));
      for (std::ptrdiff_t k = begin; k < end; ++k) {
        roots[static_cast<std::size_t>(k)] = acc;
        acc *= omega;
      }
    }
  }
  return roots;
}

}  // namespace

void fft_serial(std::span<Fr> values, const Fr& omega) {
  const std::size_t n = values.size();
  const unsigned log_n = log2_exact(n);
  if (n == 1) return;
  bit_reverse_permute(values, log_n);
  const std::vector<Fr> roots = half_roots(omega, n, false);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
    for (std::size_t start = 0; start < n; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Fr u = values[start + k];
        const Fr v = values[start + k + half] * roots[k * step];
        values[start + k] = u + v;
        values[start + k + half] = u - v;
      }
    }
  }
}

void fft_parallel(std::span<Fr> values, const Fr& omega) {
  const std::size_t n = values.size();
  const unsigned log_n = log2_exact(n);
  if (n == 1) return;
  bit_reverse_permute(values, log_n);
  const std::vector<Fr> roots = half_roots(omega, n, true);
  const auto butterflies = static_cast<std::ptrdiff_t>(n / 2);
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t step = n / len;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t idx = 0; idx < butterflies; ++idx) {
      const std::size_t b = static_cast<std::size_t>(idx);
      const std::size_t start = (b / half) * len;
      const std::size_t k = b % half;
      const Fr u = values[start + k];
      const Fr v = values[start + k + half] * roots[k * step];
      values[start + k] = u + v;
      values[start + k + half] = u - v;
    }
  }
}

void fft(std::span<Fr> values, const Fr& omega) {
  if (use_parallel(values.size())) {
    fft_parallel(values, omega);
  } else {
    fft_serial(values, omega);
  }
}

}  // namespace zkpark::kernels
