#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#if defined(__x86_64__)
#include <immintrin.h>
#endif

namespace zkpark {

using u128 = unsigned __int128;

// Fixed-width 256-bit unsigned integer, little-endian 64-bit limbs.
struct U256 {
  std::array<std::uint64_t, 4> limb{};

  constexpr bool operator==(const U256&) const = default;

  constexpr bool is_zero() const {
    return (limb[0] | limb[1] | limb[2] | limb[3]) == 0;
  }

  constexpr bool bit(unsigned i) const {
    return i < 256 && ((limb[i / 64] >> (i % 64)) & 1U) != 0;
  }

  constexpr unsigned bit_length() const {
    for (int i = 3; i >= 0; --i) {
      if (limb[i] != 0) {
        return static_cast<unsigned>(i) * 64 + 64 - static_cast<unsigned>(__builtin_clzll(limb[i]));
      }
    }
    return 0;
  }

  static constexpr U256 from_u64(std::uint64_t v) { return U256{{v, 0, 0, 0}}; }

  // Parses an optionally 0x-prefixed big-endian hex literal of at most 64 digits.
  static constexpr U256 from_hex(std::string_view hex) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X')) {
      hex.remove_prefix(2);
    }
    U256 out;
    unsigned shift = 0;
    for (std::size_t k = hex.size(); k-- > 0;) {
      const char c = hex[k];
      std::uint64_t nib = 0;
      if (c >= '0' && c <= '9') {
        nib = static_cast<std::uint64_t>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        nib = static_cast<std::uint64_t>(c - 'a' + 10);
      } else if (c >= 'A' && c <= 'F') {
        nib = static_cast<std::uint64_t>(c - 'A' + 10);
      } else {
        continue;
      }
      out.limb[shift / 64] |= nib << (shift % 64);
      shift += 4;
    }
    return out;
  }

  std::string to_hex() const;
  std::string to_decimal() const;
};

constexpr int compare(const U256& a, const U256& b) {
  for (int i = 3; i >= 0; --i) {
    if (a.limb[i] != b.limb[i]) return a.limb[i] < b.limb[i] ? -1 : 1;
  }
  return 0;
}

// Carry-chain primitives. The u128 forms stay for constant evaluation and
// other targets; on x86-64 the intrinsics keep the chain in the flags register.
constexpr std::uint64_t add_carry(std::uint64_t a, std::uint64_t b, unsigned char carry, unsigned char& out) {
#if defined(__x86_64__)
  if (!std::is_constant_evaluated()) {
    unsigned long long r = 0;
    out = _addcarry_u64(carry, a, b, &r);
    return r;
  }
#endif
  const u128 s = static_cast<u128>(a) + b + carry;
  out = static_cast<unsigned char>(s >> 64);
  return static_cast<std::uint64_t>(s);
}

constexpr std::uint64_t sub_borrow(std::uint64_t a, std::uint64_t b, unsigned char borrow, unsigned char& out) {
#if defined(__x86_64__)
  if (!std::is_constant_evaluated()) {
    unsigned long long r = 0;
    out = _subborrow_u64(borrow, a, b, &r);
    return r;
  }
#endif
  const u128 d = static_cast<u128>(a) - b - borrow;
  out = static_cast<unsigned char>((d >> 64) & 1U);
  return static_cast<std::uint64_t>(d);
}

// a += b, returns carry out.
constexpr std::uint64_t add_in_place(U256& a, const U256& b) {
  unsigned char c = 0;
  a.limb[0] = add_carry(a.limb[0], b.limb[0], 0, c);
  a.limb[1] = add_carry(a.limb[1], b.limb[1], c, c);
  a.limb[2] = add_carry(a.limb[2], b.limb[2], c, c);
  a.limb[3] = add_carry(a.limb[3], b.limb[3], c, c);
  return c;
}

// a -= b, returns borrow out.
constexpr std::uint64_t sub_in_place(U256& a, const U256& b) {
  unsigned char c = 0;
  a.limb[0] = sub_borrow(a.limb[0], b.limb[0], 0, c);
  a.limb[1] = sub_borrow(a.limb[1], b.limb[1], c, c);
  a.limb[2] = sub_borrow(a.limb[2], b.limb[2], c, c);
  a.limb[3] = sub_borrow(a.limb[3], b.limb[3], c, c);
  return c;
}

constexpr U256 shift_right(const U256& a, unsigned s) {
  U256 out;
  const unsigned limbs = s / 64;
  const unsigned bits = s % 64;
  for (unsigned i = 0; i + limbs < 4; ++i) {
    out.limb[i] = a.limb[i + limbs] >> bits;
    if (bits != 0 && i + limbs + 1 < 4) {
      out.limb[i] |= a.limb[i + limbs + 1] << (64 - bits);
    }
  }
  return out;
}

}  // namespace zkpark
