#pragma once

#include <span>
#include <utility>

#include "zkpark/circuit/builder.hpp"
#include "zkpark/identity/identity.hpp"
#include "zkpark/merkle/merkle.hpp"

namespace zkpark {

// Private inputs of the membership statement.
struct MembershipInputs {
  Fr sk;
  Fr uid_field;  // encode_uid(uid)
  MerklePath path;
  Fr nu;
};

// Enforces pk = hash1(sk), leaf = hash2(pk, hash1(uid_field)), the boolean
// index-bit fold of leaf up to public rh, and public nf = hash2(sk, nu).
// Publics are ordered (rh, nu, nf). ConfigError unless 2 <= depth <= 32.
ConstraintSystem build_membership_circuit(unsigned depth);

// ArgumentError if the path depth differs from the circuit's.
std::pair<Witness, PublicInputs> assign_witness(const ConstraintSystem& cs, const MembershipInputs& in);
std::pair<Witness, PublicInputs> assign_witness(const ConstraintSystem& cs, const IdentitySecret& secret,
                                                std::span<const std::uint8_t> uid, const MerklePath& path,
                                                const Fr& nu);

}  // namespace zkpark
