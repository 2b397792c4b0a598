#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "zkpark/algebra/curve.hpp"
#include "zkpark/util/bytes.hpp"

namespace zkpark {

// Powers-of-tau reference string. Every SRS here comes from a public seed,
// so anyone holding the seed can forge proofs.
struct Srs {
  static constexpr std::string_view kUnsafeMarker = "UNSAFE-FOR-PRODUCTION: tau is derived from a public seed";

  std::vector<G1Affine> g1_powers;  // tau^0 .. tau^max_degree times G1
  G2Affine g2_gen;
  G2Affine g2_tau;
  std::string_view marker = kUnsafeMarker;

  std::size_t max_degree() const { return g1_powers.empty() ? 0 : g1_powers.size() - 1; }

  // e(g1_powers[1], g2_gen) == e(g1_powers[0], g2_tau)
  bool pairing_consistent() const;

  Bytes serialize() const;
};

Srs trusted_setup(std::size_t max_degree, std::span<const std::uint8_t> tau_seed);

// Commitment to a coefficient vector; CapacityError if it is too long.
G1Affine commit(const Srs& srs, std::span<const Fr> coeffs);

namespace detail {
Fr tau_from_seed(std::span<const std::uint8_t> tau_seed);
}

}  // namespace zkpark
