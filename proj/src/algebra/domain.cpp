#include "zkpark/algebra/domain.hpp"

#include <algorithm>

#include "zkpark/error.hpp"
#include "zkpark/kernels/fft.hpp"

namespace zkpark {

EvaluationDomain::EvaluationDomain(std::size_t size) : size_(size) {
  if (size < 2 || (size & (size - 1)) != 0) throw ConfigError("domain size must be a power of two >= 2");
  log_size_ = static_cast<unsigned>(__builtin_ctzll(size));
  if (log_size_ > kFrTwoAdicity) throw ConfigError("domain larger than 2^28");
  U256 exp = Fr::kModulus;
  sub_in_place(exp, U256::from_u64(1));
  exp = shift_right(exp, log_size_);
  omega_ = fr_generator().pow(exp);
  omega_inv_ = omega_.inverse();
  size_inv_ = Fr::from_u64(size).inverse();
}

std::vector<Fr> EvaluationDomain::fft(std::span<const Fr> coeffs) const {
  if (coeffs.size() > size_) throw ArgumentError("fft: more coefficients than domain points");
  std::vector<Fr> out(size_);
  std::copy(coeffs.begin(), coeffs.end(), out.begin());
  kernels::fft(out, omega_);
  return out;
}

std::vector<Fr> EvaluationDomain::ifft(std::span<const Fr> evals) const {
  if (evals.size() != size_) throw ArgumentError("ifft: evaluation count must equal domain size");
  std::vector<Fr> out(evals.begin(), evals.end());
  kernels::fft(out, omega_inv_);
  for (auto& c : out) c *= size_inv_;
  return out;
}

std::vector<Fr> EvaluationDomain::coset_fft(std::span<const Fr> coeffs, const Fr& shift) const {
  if (coeffs.size() > size_) throw ArgumentError("coset_fft: more coefficients than domain points");
  std::vector<Fr> out(size_);
  Fr s = Fr::one();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    out[i] = coeffs[i] * s;
    s *= shift;
  }
  kernels::fft(out, omega_);
  return out;
}

std::vector<Fr> EvaluationDomain::coset_ifft(std::span<const Fr> evals, const Fr& shift) const {
  std::vector<Fr> out = ifft(evals);
  const Fr shift_inv = shift.inverse();
  Fr s = Fr::one();
  for (auto& c : out) {
    c *= s;
    s *= shift_inv;
  }
  return out;
}

Fr EvaluationDomain::vanishing_eval(const Fr& zeta) const {
  return zeta.pow(static_cast<std::uint64_t>(size_)) - Fr::one();
}

Fr EvaluationDomain::lagrange_eval(std::size_t i, const Fr& zeta) const {
  const Fr wi = element(i);
  if (zeta == wi) return Fr::one();
  const Fr denom = Fr::from_u64(size_) * (zeta - wi);
  return wi * vanishing_eval(zeta) * denom.inverse();
}

std::vector<Fr> fft(const Polynomial& p, const EvaluationDomain& domain) { return domain.fft(p.coeffs()); }

Polynomial ifft(std::span<const Fr> evals, const EvaluationDomain& domain) {
  return Polynomial(domain.ifft(evals));
}

Fr vanishing_poly_eval(const EvaluationDomain& domain, const Fr& zeta) { return domain.vanishing_eval(zeta); }

}  // namespace zkpark
