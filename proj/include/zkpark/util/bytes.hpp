#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace zkpark {

using Bytes = std::vector<std::uint8_t>;

/// Ensures libsodium is initialized; safe to call repeatedly.
void ensure_sodium();

std::string to_hex(std::span<const std::uint8_t> bytes);
/// Throws DecodeError on odd length or non-hex characters.
Bytes from_hex(std::string_view hex);

std::string to_base64(std::span<const std::uint8_t> bytes);
/// Throws DecodeError on malformed input.
Bytes from_base64(std::string_view b64);

std::array<std::uint8_t, 32> sha256(std::span<const std::uint8_t> data);
std::array<std::uint8_t, 64> sha512(std::span<const std::uint8_t> data);

inline std::span<const std::uint8_t> as_bytes(std::string_view s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

void append_u32_le(Bytes& out, std::uint32_t v);
void append_u64_le(Bytes& out, std::uint64_t v);
std::uint32_t read_u32_le(std::span<const std::uint8_t> in);
std::uint64_t read_u64_le(std::span<const std::uint8_t> in);

}  // namespace zkpark
