#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <ostream>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

#include "zkpark/algebra/u256.hpp"
#include "zkpark/error.hpp"

namespace zkpark {

namespace detail {

// -m^{-1} mod 2^64 by Newton iteration.
constexpr std::uint64_t mont_inv(std::uint64_t m0) {
  std::uint64_t x = 1;
  for (int i = 0; i < 7; ++i) x *= 2 - m0 * x;
  return ~x + 1;
}

// 2^k mod m for k in {256, 512}, by repeated doubling.
constexpr U256 pow2_mod(const U256& m, unsigned k) {
  U256 r = U256::from_u64(1);
  for (unsigned i = 0; i < k; ++i) {
    const std::uint64_t carry = add_in_place(r, U256(r));
    if (carry != 0 || compare(r, m) >= 0) sub_in_place(r, m);
  }
  return r;
}

#if defined(__x86_64__) && defined(__BMI2__) && defined(__ADX__)

// The no-carry CIOS loop with MULX and the two ADCX/ADOX carry chains. Result
// is below 2m; the caller does the final subtraction.
inline U256 mont_mul_adx(const U256& a, const U256& b, const U256& m, std::uint64_t inv) {
  std::uint64_t t0, t1, t2, t3, s0, s1, s2;
#define ZKPARK_DIV_SHIFT                 \
  "movq %[inv], %%rdx\n\t"               \
  "imulq %[t0], %%rdx\n\t"               \
  "xorq %[s0], %[s0]\n\t"                \
  "mulxq 0(%[m]), %[s0], %[s1]\n\t"      \
  "adcxq %[t0], %[s0]\n\t"               \
  "movq %[s1], %[t0]\n\t"                \
  "adcxq %[t1], %[t0]\n\t"               \
  "mulxq 8(%[m]), %[s0], %[t1]\n\t"      \
  "adoxq %[s0], %[t0]\n\t"               \
  "adcxq %[t2], %[t1]\n\t"               \
  "mulxq 16(%[m]), %[s0], %[t2]\n\t"     \
  "adoxq %[s0], %[t1]\n\t"               \
  "adcxq %[t3], %[t2]\n\t"               \
  "mulxq 24(%[m]), %[s0], %[t3]\n\t"     \
  "adoxq %[s0], %[t2]\n\t"               \
  "movq $0, %[s0]\n\t"                   \
  "adcxq %[s0], %[t3]\n\t"               \
  "adoxq %[s2], %[t3]\n\t"
#define ZKPARK_MUL_WORD(off)             \
  "movq " #off "(%[b]), %%rdx\n\t"       \
  "xorq %[s0], %[s0]\n\t"                \
  "mulxq 0(%[a]), %[s0], %[s2]\n\t"      \
  "adoxq %[s0], %[t0]\n\t"               \
  "mulxq 8(%[a]), %[s0], %[s1]\n\t"      \
  "adcxq %[s2], %[t1]\n\t"               \
  "adoxq %[s0], %[t1]\n\t"               \
  "mulxq 16(%[a]), %[s0], %[s2]\n\t"     \
  "adcxq %[s1], %[t2]\n\t"               \
  "adoxq %[s0], %[t2]\n\t"               \
  "mulxq 24(%[a]), %[s0], %[s1]\n\t"     \
  "adcxq %[s2], %[t3]\n\t"               \
  "adoxq %[s0], %[t3]\n\t"               \
  "movq $0, %[s0]\n\t"                   \
  "adcxq %[s0], %[s1]\n\t"               \
  "adoxq %[s0], %[s1]\n\t"               \
  "movq %[s1], %[s2]\n\t"
  asm("movq 0(%[b]), %%rdx\n\t"
      "xorq %[s0], %[s0]\n\t"
      "mulxq 0(%[a]), %[t0], %[t1]\n\t"
      "mulxq 8(%[a]), %[s0], %[t2]\n\t"
      "adoxq %[s0], %[t1]\n\t"
      "mulxq 16(%[a]), %[s0], %[t3]\n\t"
      "adoxq %[s0], %[t2]\n\t"
      "mulxq 24(%[a]), %[s0], %[s2]\n\t"
      "adoxq %[s0], %[t3]\n\t"
      "movq $0, %[s0]\n\t"
      "adoxq %[s0], %[s2]\n\t"
      ZKPARK_DIV_SHIFT
      ZKPARK_MUL_WORD(8)
      ZKPARK_DIV_SHIFT
      ZKPARK_MUL_WORD(16)
      ZKPARK_DIV_SHIFT
      ZKPARK_MUL_WORD(24)
      ZKPARK_DIV_SHIFT
      : [t0] "=&r"(t0), [t1] "=&r"(t1), [t2] "=&r"(t2), [t3] "=&r"(t3), [s0] "=&r"(s0), [s1] "=&r"(s1),
        [s2] "=&r"(s2)
      : [a] "r"(a.limb.data()), [b] "r"(b.limb.data()), [m] "r"(m.limb.data()), [inv] "m"(inv)
      : "rdx", "cc", "memory");
#undef ZKPARK_MUL_WORD
#undef ZKPARK_DIV_SHIFT
  return U256{{t0, t1, t2, t3}};
}

#endif

}  // namespace detail

// Prime field element held in Montgomery form. Params supplies the modulus
// (odd, < 2^255). The public contract is canonical residues; Montgomery form
// never leaves this class except through raw_montgomery().
template <class Params>
class MontgomeryField {
 public:
  static constexpr U256 kModulus = Params::kModulus;
  static constexpr unsigned kBits = kModulus.bit_length();
  static constexpr std::size_t kByteSize = 32;
  static constexpr std::uint64_t kInv = detail::mont_inv(kModulus.limb[0]);
  static constexpr U256 kR = detail::pow2_mod(kModulus, 256);
  static constexpr U256 kR2 = detail::pow2_mod(kModulus, 512);

  constexpr MontgomeryField() = default;

  static constexpr MontgomeryField zero() { return MontgomeryField(); }
  static constexpr MontgomeryField one() { return from_montgomery(kR); }

  static MontgomeryField from_u64(std::uint64_t v) { return from_canonical(U256::from_u64(v)); }

  static MontgomeryField from_i64(std::int64_t v) {
    if (v >= 0) return from_u64(static_cast<std::uint64_t>(v));
    return -from_u64(static_cast<std::uint64_t>(-(v + 1)) + 1);
  }

  // Reduces any 256-bit value.
  static MontgomeryField from_canonical(U256 v) {
    while (compare(v, kModulus) >= 0) sub_in_place(v, kModulus);
    MontgomeryField out;
    out.v_ = mul_raw(v, kR2);
    return out;
  }

  static constexpr MontgomeryField from_montgomery(const U256& raw) {
    MontgomeryField out;
    out.v_ = raw;
    return out;
  }

  // 32-byte little-endian canonical encoding; rejects values >= modulus.
  static MontgomeryField from_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != kByteSize) throw DecodeError("field element must be 32 bytes");
    U256 v;
    for (std::size_t i = 0; i < kByteSize; ++i) {
      v.limb[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
    }
    if (compare(v, kModulus) >= 0) throw DecodeError("non-canonical field element");
    return from_canonical(v);
  }

  // Reduces a 64-byte little-endian integer modulo the field order.
  static MontgomeryField from_wide_bytes(std::span<const std::uint8_t> bytes) {
    if (bytes.size() != 2 * kByteSize) throw ArgumentError("wide reduction needs 64 bytes");
    U256 lo;
    U256 hi;
    for (std::size_t i = 0; i < kByteSize; ++i) {
      lo.limb[i / 8] |= static_cast<std::uint64_t>(bytes[i]) << (8 * (i % 8));
      hi.limb[i / 8] |= static_cast<std::uint64_t>(bytes[kByteSize + i]) << (8 * (i % 8));
    }
    // lo + hi * 2^256; 2^256 mod m is kR in canonical form.
    return from_canonical(lo) + from_canonical(hi) * from_canonical(kR);
  }

  template <class Rng>
  static MontgomeryField random(Rng& rng) {
    std::uniform_int_distribution<std::uint64_t> dist(0, std::numeric_limits<std::uint64_t>::max());
    const unsigned top_bits = kBits - 192;
    const std::uint64_t top_mask = top_bits >= 64 ? ~0ULL : ((1ULL << top_bits) - 1);
    for (;;) {
      U256 v;
      for (auto& l : v.limb) l = dist(rng);
      v.limb[3] &= top_mask;
      if (compare(v, kModulus) < 0) return from_canonical(v);
    }
  }

  U256 to_canonical() const { return mul_raw(v_, U256::from_u64(1)); }

  std::array<std::uint8_t, 32> to_bytes() const {
    const U256 c = to_canonical();
    std::array<std::uint8_t, 32> out{};
    for (std::size_t i = 0; i < kByteSize; ++i) {
      out[i] = static_cast<std::uint8_t>(c.limb[i / 8] >> (8 * (i % 8)));
    }
    return out;
  }

  const U256& raw_montgomery() const { return v_; }

  // Portable multiply, kept as a cross-check for the assembly path.
  static constexpr MontgomeryField mul_portable(const MontgomeryField& a, const MontgomeryField& b) {
    return from_montgomery(mul_cios(a.v_, b.v_));
  }

  bool is_zero() const { return v_.is_zero(); }
  bool is_one() const { return v_ == kR; }

  bool operator==(const MontgomeryField& o) const { return v_ == o.v_; }
  bool operator!=(const MontgomeryField& o) const { return !(v_ == o.v_); }

  MontgomeryField& operator+=(const MontgomeryField& o) {
    // Both operands are < m < 2^254, so the sum cannot carry out.
    add_in_place(v_, o.v_);
    U256 d = v_;
    if (sub_in_place(d, kModulus) == 0) v_ = d;
    return *this;
  }

  MontgomeryField& operator-=(const MontgomeryField& o) {
    if (sub_in_place(v_, o.v_) != 0) add_in_place(v_, kModulus);
    return *this;
  }

  MontgomeryField& operator*=(const MontgomeryField& o) {
    v_ = mul_raw(v_, o.v_);
    return *this;
  }

  friend MontgomeryField operator+(MontgomeryField a, const MontgomeryField& b) { return a += b; }
  friend MontgomeryField operator-(MontgomeryField a, const MontgomeryField& b) { return a -= b; }
  friend MontgomeryField operator*(MontgomeryField a, const MontgomeryField& b) { return a *= b; }

  MontgomeryField operator-() const {
    if (is_zero()) return *this;
    U256 r = kModulus;
    sub_in_place(r, v_);
    return from_montgomery(r);
  }

  MontgomeryField square() const { return from_montgomery(mul_raw(v_, v_)); }
  MontgomeryField dbl() const { return *this + *this; }

  MontgomeryField pow(const U256& e) const {
    MontgomeryField acc = one();
    for (int i = static_cast<int>(e.bit_length()) - 1; i >= 0; --i) {
      acc = acc.square();
      if (e.bit(static_cast<unsigned>(i))) acc *= *this;
    }
    return acc;
  }

  MontgomeryField pow(std::uint64_t e) const { return pow(U256::from_u64(e)); }

  MontgomeryField inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero");
    U256 e = kModulus;
    sub_in_place(e, U256::from_u64(2));
    return pow(e);
  }

  friend std::ostream& operator<<(std::ostream& os, const MontgomeryField& f) {
    return os << "0x" << f.to_canonical().to_hex();
  }

 private:
  static constexpr U256 mul_raw(const U256& a, const U256& b) {
#if defined(__x86_64__) && defined(__BMI2__) && defined(__ADX__)
    if (!std::is_constant_evaluated()) return reduce_once(detail::mont_mul_adx(a, b, kModulus, kInv));
#endif
    return mul_cios(a, b);
  }

  // Branch-free final subtraction.
  static constexpr U256 reduce_once(const U256& r) {
    U256 d = r;
    const std::uint64_t borrow = sub_in_place(d, kModulus);
    return borrow != 0 ? r : d;
  }

  // CIOS Montgomery multiplication, a * b * 2^-256 mod m. Uses the
  // "no-carry" variant, valid because the top modulus limb is < 2^62.
  static constexpr U256 mul_cios(const U256& a, const U256& b) {
    static_assert(kModulus.limb[3] < (1ULL << 62));
    constexpr std::uint64_t q0 = kModulus.limb[0];
    constexpr std::uint64_t q1 = kModulus.limb[1];
    constexpr std::uint64_t q2 = kModulus.limb[2];
    constexpr std::uint64_t q3 = kModulus.limb[3];
    std::uint64_t t0 = 0;
    std::uint64_t t1 = 0;
    std::uint64_t t2 = 0;
    std::uint64_t t3 = 0;
#pragma GCC unroll 4
    for (int i = 0; i < 4; ++i) {
      const std::uint64_t bi = b.limb[i];
      u128 s = static_cast<u128>(a.limb[0]) * bi + t0;
      t0 = static_cast<std::uint64_t>(s);
      std::uint64_t hi_a = static_cast<std::uint64_t>(s >> 64);
      const std::uint64_t m = t0 * kInv;
      s = static_cast<u128>(m) * q0 + t0;
      std::uint64_t hi_c = static_cast<std::uint64_t>(s >> 64);

      s = static_cast<u128>(a.limb[1]) * bi + t1 + hi_a;
      t1 = static_cast<std::uint64_t>(s);
      hi_a = static_cast<std::uint64_t>(s >> 64);
      s = static_cast<u128>(m) * q1 + t1 + hi_c;
      t0 = static_cast<std::uint64_t>(s);
      hi_c = static_cast<std::uint64_t>(s >> 64);

      s = static_cast<u128>(a.limb[2]) * bi + t2 + hi_a;
      t2 = static_cast<std::uint64_t>(s);
      hi_a = static_cast<std::uint64_t>(s >> 64);
      s = static_cast<u128>(m) * q2 + t2 + hi_c;
      t1 = static_cast<std::uint64_t>(s);
      hi_c = static_cast<std::uint64_t>(s >> 64);

      s = static_cast<u128>(a.limb[3]) * bi + t3 + hi_a;
      t3 = static_cast<std::uint64_t>(s);
      hi_a = static_cast<std::uint64_t>(s >> 64);
      s = static_cast<u128>(m) * q3 + t3 + hi_c;
      t2 = static_cast<std::uint64_t>(s);
      hi_c = static_cast<std::uint64_t>(s >> 64);

      t3 = hi_c + hi_a;
    }
    return reduce_once(U256{{t0, t1, t2, t3}});
  }

  U256 v_{};
};

// Montgomery's trick: replaces every element with its inverse using one
// field inversion. Throws DivisionByZero if any element is zero.
template <class F>
void batch_inverse(std::span<F> values) {
  if (values.empty()) return;
  std::vector<F> prefix(values.size());
  F acc = F::one();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i].is_zero()) throw DivisionByZero("batch inverse of zero");
    prefix[i] = acc;
    acc *= values[i];
  }
  F inv = acc.inverse();
  for (std::size_t i = values.size(); i-- > 0;) {
    const F next = inv * values[i];
    values[i] = inv * prefix[i];
    inv = next;
  }
}

}  // namespace zkpark
