#include "zkpark/prover/transcript.hpp"

namespace zkpark {

namespace {

void append_framed(Bytes& out, std::span<const std::uint8_t> data) {
  append_u32_le(out, static_cast<std::uint32_t>(data.size()));
  out.insert(out.end(), data.begin(), data.end());
}

}  // namespace

Transcript::Transcript(std::string_view protocol) { append_framed(state_, as_bytes(protocol)); }

void Transcript::absorb(std::string_view label, std::span<const std::uint8_t> data) {
  append_framed(state_, as_bytes(label));
  append_framed(state_, data);
}

void Transcript::absorb(std::string_view label, const Fr& x) { absorb(label, x.to_bytes()); }

void Transcript::absorb(std::string_view label, const G1Affine& p) { absorb(label, encode_g1(p)); }

Fr Transcript::challenge(std::string_view label) {
  append_framed(state_, as_bytes("challenge"));
  append_framed(state_, as_bytes(label));
  const auto digest = sha512(state_);
  state_.assign(digest.begin(), digest.end());
  return Fr::from_wide_bytes(digest);
}

}  // namespace zkpark
