#pragma once

#include "zkpark/algebra/montgomery_field.hpp"

namespace zkpark {

struct FrParams {
  /// Scalar-field order r of BN254 (the order of G1 and G2):
  /// 21888242871839275222246405745257275088548364400416034343698204186575808495617
  static constexpr U256 kModulus =
      U256::from_hex("30644e72e131a029b85045b68181585d2833e84879b9709143e1f593f0000001");
};

struct FqParams {
  /// Base-field prime p of BN254:
  /// 21888242871839275222246405745257275088696311157297823662689037894645226208583
  static constexpr U256 kModulus =
      U256::from_hex("30644e72e131a029b85045b68181585d97816a916871ca8d3c208c16d87cfd47");
};

/// Element of the BN254 scalar field F_r. Everything the proof system
/// arithmetizes (witnesses, hashes, challenges) lives here.
using Fr = MontgomeryField<FrParams>;
using FieldElement = Fr;

/// Element of the BN254 base field F_p (curve coordinates).
using Fq = MontgomeryField<FqParams>;

/// 2-adicity of r - 1: the largest supported evaluation domain is 2^28.
inline constexpr unsigned kFrTwoAdicity = 28;

/// Multiplicative generator of F_r^* (5 generates the whole group; r - 1 =
/// 2^28 * 3^2 * 13 * 29 * 983 * 11003 * 237073 * 405928799 *
/// 1670836401704629 * 13818364434197438864469338081).
inline Fr fr_generator() { return Fr::from_u64(5); }

}  // namespace zkpark
