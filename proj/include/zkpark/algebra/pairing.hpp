#pragma once

#include <span>
#include <utility>

#include "zkpark/algebra/curve.hpp"
#include "zkpark/algebra/tower.hpp"

namespace zkpark {

// Ate pairing on BN254, e: G1 x G2 -> GT (the order-r subgroup of Fq12^*).
// Loop length is T = 6x^2 = t - 1 for the BN parameter x.

/// Product of Miller-loop values, before the final exponentiation.
Fq12 miller_loop(std::span<const std::pair<G1Affine, G2Affine>> terms);

/// f^((p^12 - 1) / r).
Fq12 final_exponentiation(const Fq12& f);

Fq12 pairing(const G1Affine& p, const G2Affine& q);

/// True iff prod e(P_i, Q_i) is the identity of GT. Throws DecodeError if a
/// point is off-curve or a G2 point lies outside the order-r subgroup.
bool pairing_check(std::span<const std::pair<G1Affine, G2Affine>> terms);

namespace detail {
/// Exponents used by the final exponentiation, little-endian 64-bit limbs.
std::span<const std::uint64_t> p_squared_limbs();
std::span<const std::uint64_t> hard_part_limbs();
U256 ate_loop_count();
}  // namespace detail

}  // namespace zkpark
