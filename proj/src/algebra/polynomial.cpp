#include "zkpark/algebra/polynomial.hpp"

#include <algorithm>

namespace zkpark {

Polynomial::Polynomial(std::vector<Fr> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back().is_zero()) coeffs_.pop_back();
}

Fr evaluate_coeffs(std::span<const Fr> coeffs, const Fr& x) {
  Fr acc;
  for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * x + coeffs[i];
  return acc;
}

Fr Polynomial::evaluate(const Fr& x) const { return evaluate_coeffs(coeffs_, x); }

Polynomial Polynomial::operator+(const Polynomial& o) const {
  std::vector<Fr> out(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  std::vector<Fr> out(std::max(coeffs_.size(), o.coeffs_.size()));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) out[i] -= o.coeffs_[i];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<Fr> out(coeffs_.size() + o.coeffs_.size() - 1);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Fr& s) const {
  std::vector<Fr> out = coeffs_;
  for (auto& c : out) c *= s;
  return Polynomial(std::move(out));
}

Fr divide_by_linear_in_place(std::vector<Fr>& coeffs, const Fr& z) {
  if (coeffs.empty()) return Fr::zero();
  // Horner from the top: q_{k-1} = c_k + z * q_k.
  Fr carry;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    const Fr next = coeffs[i] + carry * z;
    coeffs[i] = carry;
    carry = next;
  }
  // coeffs[i] now holds q_i and the top slot is zero.
  coeffs.pop_back();
  return carry;
}

std::pair<Polynomial, Fr> Polynomial::divide_by_linear(const Fr& z) const {
  std::vector<Fr> q = coeffs_;
  const Fr rem = divide_by_linear_in_place(q, z);
  return {Polynomial(std::move(q)), rem};
}

}  // namespace zkpark
