#include "zkpark/protocol/messages.hpp"

#include <array>

#include "zkpark/error.hpp"

namespace zkpark::protocol {

namespace {

constexpr std::array<std::pair<AuthOutcome, std::string_view>, 6> kNames = {{
    {AuthOutcome::kAccept, "Accept"},
    {AuthOutcome::kStaleNullifier, "StaleNullifier"},
    {AuthOutcome::kUnknownRoot, "UnknownRoot"},
    {AuthOutcome::kNullifierSeen, "NullifierSeen"},
    {AuthOutcome::kInvalidProof, "InvalidProof"},
    {AuthOutcome::kMalformed, "Malformed"},
}};

const Json& field(const Json& j, std::string_view key) {
  if (!j.is_object()) throw DecodeError("message is not an object");
  const auto it = j.find(key);
  if (it == j.end()) throw DecodeError("missing field '" + std::string(key) + "'");
  return *it;
}

}  // namespace

std::string_view outcome_name(AuthOutcome o) {
  for (const auto& [k, v] : kNames) {
    if (k == o) return v;
  }
  return "Unknown";
}

std::optional<AuthOutcome> outcome_from_name(std::string_view name) {
  for (const auto& [k, v] : kNames) {
    if (v == name) return k;
  }
  return std::nullopt;
}

std::string fr_to_hex(const Fr& x) { return to_hex(x.to_bytes()); }

Fr fr_from_hex(std::string_view hex) {
  if (hex.size() != 64) throw DecodeError("field element must be 64 hex digits");
  return Fr::from_bytes(from_hex(hex));
}

Json path_to_json(const MerklePath& path) {
  Json siblings = Json::array();
  for (const Fr& s : path.siblings) siblings.push_back(fr_to_hex(s));
  return Json{{"index", path.index}, {"siblings", siblings}};
}

MerklePath path_from_json(const Json& j) {
  MerklePath p;
  p.index = get_u64(j, "index");
  const Json& s = field(j, "siblings");
  if (!s.is_array()) throw DecodeError("siblings must be an array");
  for (const Json& e : s) {
    if (!e.is_string()) throw DecodeError("sibling must be a hex string");
    p.siblings.push_back(fr_from_hex(e.get<std::string>()));
  }
  if (p.siblings.size() > IncrementalMerkleTree::kMaxDepth) throw DecodeError("path too long");
  if (p.siblings.size() < 64 && (p.index >> p.siblings.size()) != 0) throw DecodeError("path index exceeds depth");
  return p;
}

Json auth_to_json(const AuthRequest& req) {
  return Json{{"op", "auth"},
              {"rh", fr_to_hex(req.publics.rh)},
              {"nu", fr_to_hex(req.publics.nu)},
              {"nf", fr_to_hex(req.publics.nf)},
              {"proof", to_base64(req.proof)}};
}

AuthRequest auth_from_json(const Json& j) {
  AuthRequest req;
  req.publics.rh = fr_from_hex(get_string(j, "rh"));
  req.publics.nu = fr_from_hex(get_string(j, "nu"));
  req.publics.nf = fr_from_hex(get_string(j, "nf"));
  req.proof = from_base64(get_string(j, "proof"));
  return req;
}

Bytes encode_compact_auth(const AuthRequest& req) {
  Bytes out;
  out.reserve(1 + 3 * 32 + req.proof.size());
  out.push_back(kCompactAuthTag);
  for (const Fr& x : req.publics.as_array()) {
    const auto b = x.to_bytes();
    out.insert(out.end(), b.begin(), b.end());
  }
  out.insert(out.end(), req.proof.begin(), req.proof.end());
  return out;
}

bool is_compact_auth(std::span<const std::uint8_t> message) {
  return !message.empty() && message[0] == kCompactAuthTag;
}

AuthRequest decode_compact_auth(std::span<const std::uint8_t> message) {
  if (!is_compact_auth(message) || message.size() < 1 + 3 * 32) throw DecodeError("short compact auth message");
  AuthRequest req;
  req.publics.rh = Fr::from_bytes(message.subspan(1, 32));
  req.publics.nu = Fr::from_bytes(message.subspan(33, 32));
  req.publics.nf = Fr::from_bytes(message.subspan(65, 32));
  const auto proof = message.subspan(97);
  req.proof.assign(proof.begin(), proof.end());
  return req;
}

Bytes dump(const Json& j) {
  const std::string s = j.dump();
  return Bytes(s.begin(), s.end());
}

Json parse(std::span<const std::uint8_t> message) {
  Json j = Json::parse(message.begin(), message.end(), nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw DecodeError("message is not a JSON object");
  return j;
}

std::string get_string(const Json& j, std::string_view key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw DecodeError("field '" + std::string(key) + "' must be a string");
  return v.get<std::string>();
}

std::uint64_t get_u64(const Json& j, std::string_view key) {
  const Json& v = field(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw DecodeError("field '" + std::string(key) + "' must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

Json error_response(std::string_view reason, std::string_view detail) {
  Json j{{"ok", false}, {"reason", reason}};
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

}  // namespace zkpark::protocol
