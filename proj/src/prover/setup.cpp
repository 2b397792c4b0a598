#include "zkpark/prover/setup.hpp"

#include "zkpark/circuit/membership.hpp"

namespace zkpark {

CircuitKeys membership_keys(unsigned depth, std::span<const std::uint8_t> srs_seed) {
  ConstraintSystem cs = build_membership_circuit(depth);
  auto srs = std::make_shared<const Srs>(trusted_setup(srs_degree_for(cs.n_gates()), srs_seed));
  auto [pk, vk] = preprocess(cs, std::move(srs));
  return {std::move(cs), std::move(pk), std::move(vk)};
}

}  // namespace zkpark
