#include "zkpark/prover/srs.hpp"

#include "zkpark/algebra/msm.hpp"
#include "zkpark/algebra/pairing.hpp"
#include "zkpark/kernels/msm.hpp"

namespace zkpark {

namespace detail {

Fr tau_from_seed(std::span<const std::uint8_t> tau_seed) {
  constexpr std::string_view kTag = "zkpark-srs-v1";
  Bytes input(kTag.begin(), kTag.end());
  input.insert(input.end(), tau_seed.begin(), tau_seed.end());
  Fr tau = Fr::from_wide_bytes(sha512(input));
  if (tau.is_zero()) tau = Fr::one() + Fr::one();
  return tau;
}

}  // namespace detail

Srs trusted_setup(std::size_t max_degree, std::span<const std::uint8_t> tau_seed) {
  Fr tau = detail::tau_from_seed(tau_seed);
  std::vector<Fr> powers(max_degree + 1);
  Fr acc = Fr::one();
  for (auto& p : powers) {
    p = acc;
    acc *= tau;
  }
  Srs srs;
  srs.g1_powers = kernels::fixed_base_mul_parallel(g1_generator(), powers);
  srs.g2_gen = g2_generator();
  srs.g2_tau = (G2Jacobian(g2_generator()) * tau).to_affine();
  // Discard tau.
  tau = Fr::zero();
  for (auto& p : powers) p = Fr::zero();
  return srs;
}

bool Srs::pairing_consistent() const {
  if (g1_powers.size() < 2) return false;
  const std::pair<G1Affine, G2Affine> terms[2] = {{g1_powers[1], g2_gen}, {-g1_powers[0], g2_tau}};
  return pairing_check(terms);
}

Bytes Srs::serialize() const {
  Bytes out;
  append_u64_le(out, g1_powers.size());
  for (const auto& p : g1_powers) {
    const auto e = encode_g1(p);
    out.insert(out.end(), e.begin(), e.end());
  }
  for (const auto& q : {g2_gen, g2_tau}) {
    const auto e = encode_g2(q);
    out.insert(out.end(), e.begin(), e.end());
  }
  return out;
}

G1Affine commit(const Srs& srs, std::span<const Fr> coeffs) {
  if (coeffs.size() > srs.g1_powers.size()) throw CapacityError("polynomial degree exceeds SRS size");
  return msm(std::span<const G1Affine>(srs.g1_powers.data(), coeffs.size()), coeffs);
}

}  // namespace zkpark
