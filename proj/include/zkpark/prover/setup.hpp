#pragma once

#include <span>

#include "zkpark/prover/plonk.hpp"

namespace zkpark {

struct CircuitKeys {
  ConstraintSystem cs;
  ProvingKey pk;
  VerifyingKey vk;
};

// SRS degree used for a circuit of n gates: room for the quotient chunk of
// degree n + 5 plus one.
inline std::size_t srs_degree_for(std::size_t n_gates) { return n_gates + 6; }

// Membership circuit, SRS and keys for one depth, all derived from public
// inputs so that server and clients arrive at identical keys.
CircuitKeys membership_keys(unsigned depth, std::span<const std::uint8_t> srs_seed);

}  // namespace zkpark
