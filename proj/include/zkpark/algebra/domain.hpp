#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "zkpark/algebra/fields.hpp"
#include "zkpark/algebra/polynomial.hpp"

namespace zkpark {

// Multiplicative subgroup H = {1, omega, ..., omega^(n-1)} of F_r^*, with
// omega = g^((r-1)/n) for the fixed generator g = 5.
class EvaluationDomain {
 public:
  /// Throws ConfigError unless 2 <= size <= 2^28 and size is a power of two.
  explicit EvaluationDomain(std::size_t size);

  std::size_t size() const { return size_; }
  unsigned log_size() const { return log_size_; }
  const Fr& omega() const { return omega_; }
  const Fr& omega_inv() const { return omega_inv_; }
  const Fr& size_inv() const { return size_inv_; }

  Fr element(std::size_t i) const { return omega_.pow(static_cast<std::uint64_t>(i)); }

  /// Evaluations at omega^0..omega^(n-1); coeffs.size() must be <= n.
  std::vector<Fr> fft(std::span<const Fr> coeffs) const;
  /// Coefficients of the unique polynomial of degree < n through evals.
  std::vector<Fr> ifft(std::span<const Fr> evals) const;
  /// Evaluations at shift * omega^i.
  std::vector<Fr> coset_fft(std::span<const Fr> coeffs, const Fr& shift) const;
  std::vector<Fr> coset_ifft(std::span<const Fr> evals, const Fr& shift) const;

  /// Z_H(zeta) = zeta^n - 1.
  Fr vanishing_eval(const Fr& zeta) const;
  /// L_i(zeta) = omega^i (zeta^n - 1) / (n (zeta - omega^i)); zeta must not
  /// lie in H unless it equals omega^i.
  Fr lagrange_eval(std::size_t i, const Fr& zeta) const;

  bool operator==(const EvaluationDomain& o) const { return size_ == o.size_; }

 private:
  std::size_t size_;
  unsigned log_size_;
  Fr omega_;
  Fr omega_inv_;
  Fr size_inv_;
};

std::vector<Fr> fft(const Polynomial& p, const EvaluationDomain& domain);
Polynomial ifft(std::span<const Fr> evals, const EvaluationDomain& domain);
Fr vanishing_poly_eval(const EvaluationDomain& domain, const Fr& zeta);

}  // namespace zkpark
