#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "zkpark/algebra/fields.hpp"

namespace zkpark {

inline constexpr std::uint64_t kHash1Domain = 1;
inline constexpr std::uint64_t kHash2Domain = 2;
inline constexpr std::string_view kPoseidonTag = "zkpark-poseidon-v1";

class PoseidonParams {
 public:
  // Validates shape and MDS invertibility; throws ArgumentError / ConfigError.
  PoseidonParams(std::size_t width, std::size_t full_rounds, std::size_t partial_rounds, std::uint64_t alpha,
                 std::vector<std::vector<Fr>> mds, std::vector<Fr> round_constants);

  // Constants drawn from SHA-256(tag || u64_le counter), 254-bit masked, rejection sampled.
  static PoseidonParams generate(std::string_view tag, std::size_t width, std::size_t full_rounds,
                                 std::size_t partial_rounds, std::uint64_t alpha);

  // t = 3, R_F = 8, R_P = 57, alpha = 5.
  static const PoseidonParams& standard();

  std::size_t width() const { return width_; }
  std::size_t full_rounds() const { return full_rounds_; }
  std::size_t partial_rounds() const { return partial_rounds_; }
  std::size_t rounds() const { return full_rounds_ + partial_rounds_; }
  std::uint64_t alpha() const { return alpha_; }
  const std::vector<std::vector<Fr>>& mds() const { return mds_; }
  const std::vector<Fr>& round_constants() const { return round_constants_; }
  const Fr& round_constant(std::size_t round, std::size_t lane) const { return round_constants_[round * width_ + lane]; }

  // Full rounds are split evenly around the partial block.
  bool is_full_round(std::size_t round) const {
    return round < full_rounds_ / 2 || round >= full_rounds_ / 2 + partial_rounds_;
  }

 private:
  std::size_t width_;
  std::size_t full_rounds_;
  std::size_t partial_rounds_;
  std::uint64_t alpha_;
  std::vector<std::vector<Fr>> mds_;
  std::vector<Fr> round_constants_;
};

Fr determinant(std::vector<std::vector<Fr>> m);

std::vector<Fr> permute(std::span<const Fr> state, const PoseidonParams& params = PoseidonParams::standard());

Fr hash1(const Fr& a);
Fr hash2(const Fr& a, const Fr& b);

// "round_constant[i] <hex>" and "mds[i][j] <hex>" lines, 32-byte LE encodings.
std::string params_dump(const PoseidonParams& params = PoseidonParams::standard());

}  // namespace zkpark
