#pragma once

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "zkpark/algebra/domain.hpp"
#include "zkpark/circuit/constraint_system.hpp"
#include "zkpark/prover/srs.hpp"

namespace zkpark {

inline constexpr std::string_view kPlonkProtocol = "zkpark-plonk-v1";
inline constexpr std::size_t kProofBytes = 9 * 64 + 6 * 32;

// Coset multipliers for the b and c wire columns.
inline Fr plonk_k1() { return Fr::from_u64(2); }
inline Fr plonk_k2() { return Fr::from_u64(3); }

struct VerifyingKey {
  std::uint64_t n = 0;
  std::uint32_t num_public = 0;
  // q_L, q_R, q_O, q_M, q_C
  std::array<G1Affine, 5> selectors;
  std::array<G1Affine, 3> sigmas;
  G2Affine g2_gen;
  G2Affine g2_tau;

  // u64 n, u32 num_public, u32 count + G1 commitments, u32 count + G2 points.
  Bytes serialize() const;
  static VerifyingKey deserialize(std::span<const std::uint8_t> bytes);
  std::array<std::uint8_t, 64> digest() const;
  bool operator==(const VerifyingKey&) const = default;
};

struct ProvingKey {
  ConstraintSystem cs;
  std::shared_ptr<const Srs> srs;
  VerifyingKey vk;

  std::size_t n = 0;
  std::array<std::vector<Fr>, 5> selector_coeffs;
  std::array<std::vector<Fr>, 3> sigma_coeffs;
  std::array<std::vector<Fr>, 3> sigma_evals;  // on H
  // Evaluations on the coset shift * H_4n used by the quotient.
  std::array<std::vector<Fr>, 5> selector_coset;
  std::array<std::vector<Fr>, 3> sigma_coset;
  std::vector<Fr> l0_coset;
  std::vector<Fr> coset_points;
};

struct Proof {
  G1Affine a, b, c, z, t_lo, t_mid, t_hi, w_zeta, w_zeta_omega;
  Fr a_eval, b_eval, c_eval, s1_eval, s2_eval, z_omega_eval;

  std::array<std::uint8_t, kProofBytes> serialize() const;
  // DecodeError on wrong length, off-curve points or non-canonical scalars.
  static Proof deserialize(std::span<const std::uint8_t> bytes);
  bool operator==(const Proof&) const = default;
};

// CapacityError if the SRS cannot commit to degree n + 5.
std::pair<ProvingKey, VerifyingKey> preprocess(const ConstraintSystem& cs, std::shared_ptr<const Srs> srs);

inline constexpr std::size_t kBlindingScalars = 9;

// UnsatisfiedWitness unless check_satisfied holds.
Proof prove_with_blinding(const ProvingKey& pk, const PublicInputs& publics, const Witness& witness,
                          const std::array<Fr, kBlindingScalars>& blinding);

template <class Rng>
Proof prove(const ProvingKey& pk, const PublicInputs& publics, const Witness& witness, Rng& rng) {
  std::array<Fr, kBlindingScalars> blinding;
  for (auto& b : blinding) b = Fr::random(rng);
  return prove_with_blinding(pk, publics, witness, blinding);
}

Proof prove(const ProvingKey& pk, const PublicInputs& publics, const Witness& witness);

bool verify(const VerifyingKey& vk, const PublicInputs& publics, const Proof& proof);
// DecodeError for malformed bytes; false for a well-formed but invalid proof.
bool verify(const VerifyingKey& vk, const PublicInputs& publics, std::span<const std::uint8_t> proof_bytes);

struct Challenges {
  Fr beta, gamma, alpha, zeta, v, u;
};

// Replays the transcript of a proof.
Challenges derive_challenges(const VerifyingKey& vk, const PublicInputs& publics, const Proof& proof);

}  // namespace zkpark
