#pragma once

#include <span>
#include <utility>
#include <vector>

#include "zkpark/algebra/fields.hpp"

namespace zkpark {

// Dense univariate polynomial over F_r, lowest degree first. Trailing zeros
// are trimmed, so the zero polynomial has no coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Fr> coeffs);

  template <class Rng>
  static Polynomial random(std::size_t degree, Rng& rng) {
    std::vector<Fr> c(degree + 1);
    for (auto& x : c) x = Fr::random(rng);
    if (c.back().is_zero()) c.back() = Fr::one();
    return Polynomial(std::move(c));
  }

  const std::vector<Fr>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(coeffs_.size()) - 1; }

  Fr evaluate(const Fr& x) const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Fr& s) const;
  bool operator==(const Polynomial& o) const { return coeffs_ == o.coeffs_; }

  /// (q, p(z)) with p(X) = q(X) * (X - z) + p(z).
  std::pair<Polynomial, Fr> divide_by_linear(const Fr& z) const;

 private:
  void trim();
  std::vector<Fr> coeffs_;
};

/// Horner evaluation of a raw coefficient vector.
Fr evaluate_coeffs(std::span<const Fr> coeffs, const Fr& x);

/// In-place synthetic division by (X - z); returns the remainder p(z) and
/// leaves the quotient in coeffs[0 .. size-2] (coeffs is shrunk by one).
Fr divide_by_linear_in_place(std::vector<Fr>& coeffs, const Fr& z);

}  // namespace zkpark
