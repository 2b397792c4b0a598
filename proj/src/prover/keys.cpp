#include <bit>

#include "zkpark/prover/plonk.hpp"

namespace zkpark {

namespace {

template <std::size_t N>
void append_array(Bytes& out, const std::array<std::uint8_t, N>& a) {
  out.insert(out.end(), a.begin(), a.end());
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> in) : in_(in) {}

  std::span<const std::uint8_t> take(std::size_t len) {
    if (in_.size() - pos_ < len) throw DecodeError("truncated input");
    const auto out = in_.subspan(pos_, len);
    pos_ += len;
    return out;
  }
  std::uint32_t u32() { return read_u32_le(take(4)); }
  std::uint64_t u64() { return read_u64_le(take(8)); }
  bool done() const { return pos_ == in_.size(); }

 private:
  std::span<const std::uint8_t> in_;
  std::size_t pos_ = 0;
};

}  // namespace

Bytes VerifyingKey::serialize() const {
  Bytes out;
  append_u64_le(out, n);
  append_u32_le(out, num_public);
  append_u32_le(out, static_cast<std::uint32_t>(selectors.size() + sigmas.size()));
  for (const auto& p : selectors) append_array(out, encode_g1(p));
  for (const auto& p : sigmas) append_array(out, encode_g1(p));
  append_u32_le(out, 2);
  append_array(out, encode_g2(g2_gen));
  append_array(out, encode_g2(g2_tau));
  return out;
}

VerifyingKey VerifyingKey::deserialize(std::span<const std::uint8_t> bytes) {
  Reader r(bytes);
  VerifyingKey vk;
  vk.n = r.u64();
  if (vk.n < 8 || !std::has_single_bit(vk.n) || vk.n > (std::uint64_t{1} << 28)) {
    throw DecodeError("verifying key domain size invalid");
  }
  vk.num_public = r.u32();
  if (vk.num_public != kNumPublicInputs) throw DecodeError("verifying key public input count invalid");
  if (r.u32() != vk.selectors.size() + vk.sigmas.size()) throw DecodeError("verifying key commitment count invalid");
  for (auto& p : vk.selectors) p = decode_g1(r.take(64));
  for (auto& p : vk.sigmas) p = decode_g1(r.take(64));
  if (r.u32() != 2) throw DecodeError("verifying key G2 count invalid");
  vk.g2_gen = decode_g2(r.take(128));
  vk.g2_tau = decode_g2(r.take(128));
  if (!r.done()) throw DecodeError("trailing bytes after verifying key");
  return vk;
}

std::array<std::uint8_t, 64> VerifyingKey::digest() const { return sha512(serialize()); }

std::array<std::uint8_t, kProofBytes> Proof::serialize() const {
  std::array<std::uint8_t, kProofBytes> out{};
  std::size_t pos = 0;
  for (const G1Affine* p : {&a, &b, &c, &z, &t_lo, &t_mid, &t_hi, &w_zeta, &w_zeta_omega}) {
    const auto e = encode_g1(*p);
    std::copy(e.begin(), e.end(), out.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += e.size();
  }
  for (const Fr* f : {&a_eval, &b_eval, &c_eval, &s1_eval, &s2_eval, &z_omega_eval}) {
    const auto e = f->to_bytes();
    std::copy(e.begin(), e.end(), out.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += e.size();
  }
  return out;
}

Proof Proof::deserialize(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kProofBytes) throw DecodeError("proof must be 768 bytes");
  Reader r(bytes);
  Proof p;
  for (G1Affine* g : {&p.a, &p.b, &p.c, &p.z, &p.t_lo, &p.t_mid, &p.t_hi, &p.w_zeta, &p.w_zeta_omega}) {
    *g = decode_g1(r.take(64));
  }
  for (Fr* f : {&p.a_eval, &p.b_eval, &p.c_eval, &p.s1_eval, &p.s2_eval, &p.z_omega_eval}) *f = Fr::from_bytes(r.take(32));
  return p;
}

}  // namespace zkpark
