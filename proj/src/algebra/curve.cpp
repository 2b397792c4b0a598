#include "zkpark/algebra/curve.hpp"

#include <algorithm>

namespace zkpark {

G1Affine g1_generator() { return {Fq::from_u64(1), Fq::from_u64(2), false}; }

G2Affine g2_generator() {
  static const G2Affine kGen{
      Fq2{Fq::from_canonical(U256::from_hex("1800deef121f1e76426a00665e5c4479674322d4f75edadd46debd5cd992f6ed")),
          Fq::from_canonical(U256::from_hex("198e9393920d483a7260bfb731fb5d25f1aa493335a9e71297e485b7aef312c2"))},
      Fq2{Fq::from_canonical(U256::from_hex("12c85ea5db8c6deb4aab71808dcb408fe3d1e7690c43d37b4ce6cc0166fa7daa")),
          Fq::from_canonical(U256::from_hex("090689d0585ff075ec9e99ad690c3395bc4b313370b38ef355acdadcd122975b"))},
      false};
  return kGen;
}

bool in_g2_subgroup(const G2Affine& p) {
  if (p.infinity) return true;
  return G2Jacobian(p).mul(Fr::kModulus).is_identity();
}

namespace {

void put(std::uint8_t* dst, const Fq& f) {
  const auto b = f.to_bytes();
  std::copy(b.begin(), b.end(), dst);
}

Fq get(std::span<const std::uint8_t> src) { return Fq::from_bytes(src.first(32)); }

bool all_zero(std::span<const std::uint8_t> bytes) {
  return std::all_of(bytes.begin(), bytes.end(), [](std::uint8_t b) { return b == 0; });
}

}  // namespace

std::array<std::uint8_t, 64> encode_g1(const G1Affine& p) {
  std::array<std::uint8_t, 64> out{};
  if (p.infinity) return out;
  put(out.data(), p.x);
  put(out.data() + 32, p.y);
  return out;
}

std::array<std::uint8_t, 128> encode_g2(const G2Affine& p) {
  std::array<std::uint8_t, 128> out{};
  if (p.infinity) return out;
  put(out.data(), p.x.c0);
  put(out.data() + 32, p.x.c1);
  put(out.data() + 64, p.y.c0);
  put(out.data() + 96, p.y.c1);
  return out;
}

G1Affine decode_g1(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 64) throw DecodeError("G1 point must be 64 bytes");
  if (all_zero(bytes)) return G1Affine::identity();
  G1Affine p{get(bytes), get(bytes.subspan(32)), false};
  if (!p.is_on_curve()) throw DecodeError("G1 point not on curve");
  return p;
}

G2Affine decode_g2(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != 128) throw DecodeError("G2 point must be 128 bytes");
  if (all_zero(bytes)) return G2Affine::identity();
  G2Affine p{Fq2{get(bytes), get(bytes.subspan(32))}, Fq2{get(bytes.subspan(64)), get(bytes.subspan(96))}, false};
  if (!p.is_on_curve()) throw DecodeError("G2 point not on curve");
  if (!in_g2_subgroup(p)) throw DecodeError("G2 point outside the prime-order subgroup");
  return p;
}

}  // namespace zkpark
