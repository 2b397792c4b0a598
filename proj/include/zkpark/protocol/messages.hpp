#pragma once

#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "zkpark/circuit/constraint_system.hpp"
#include "zkpark/merkle/merkle.hpp"
#include "zkpark/util/bytes.hpp"

// Wire format shared by server, client and tests. Every message is JSON,
// except that an auth request may also travel in the compact binary form,
// which keeps a proof-carrying message within four relay frames.
namespace zkpark::protocol {

using Json = nlohmann::json;

inline constexpr std::size_t kMaxMessageBytes = 1 << 20;

enum class AuthOutcome : std::uint8_t {
  kAccept,
  kStaleNullifier,
  kUnknownRoot,
  kNullifierSeen,
  kInvalidProof,
  kMalformed,
};

std::string_view outcome_name(AuthOutcome o);
// nullopt for unknown names.
std::optional<AuthOutcome> outcome_from_name(std::string_view name);

// Field elements travel as 64 hex digits of the canonical little-endian
// encoding. DecodeError on bad length, bad digits or non-canonical values.
std::string fr_to_hex(const Fr& x);
Fr fr_from_hex(std::string_view hex);

Json path_to_json(const MerklePath& path);
MerklePath path_from_json(const Json& j);

struct AuthRequest {
  PublicInputs publics;
  Bytes proof;
};

Json auth_to_json(const AuthRequest& req);
// DecodeError on missing fields or bad encodings of rh, nu, nf or proof.
AuthRequest auth_from_json(const Json& j);

// 1 tag byte, rh, nu, nf (32 bytes each), then the proof bytes.
inline constexpr std::uint8_t kCompactAuthTag = 0xA5;
Bytes encode_compact_auth(const AuthRequest& req);
bool is_compact_auth(std::span<const std::uint8_t> message);
AuthRequest decode_compact_auth(std::span<const std::uint8_t> message);

Bytes dump(const Json& j);
// DecodeError unless the bytes are a JSON object.
Json parse(std::span<const std::uint8_t> message);

// Typed accessors for decoded messages; DecodeError if absent or mistyped.
std::string get_string(const Json& j, std::string_view key);
std::uint64_t get_u64(const Json& j, std::string_view key);

Json error_response(std::string_view reason, std::string_view detail = {});

}  // namespace zkpark::protocol
