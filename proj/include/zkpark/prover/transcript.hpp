#pragma once

#include <span>
#include <string_view>

#include "zkpark/algebra/curve.hpp"
#include "zkpark/util/bytes.hpp"

namespace zkpark {

// Fiat-Shamir transcript. Absorbs are label- and length-framed; a challenge
// is SHA-512 over the framed state, reduced mod r, and the digest replaces
// the state so later absorbs stay bound to everything before.
class Transcript {
 public:
  explicit Transcript(std::string_view protocol);

  void absorb(std::string_view label, std::span<const std::uint8_t> data);
  void absorb(std::string_view label, const Fr& x);
  void absorb(std::string_view label, const G1Affine& p);

  Fr challenge(std::string_view label);

 private:
  Bytes state_;
};

}  // namespace zkpark
