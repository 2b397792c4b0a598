#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <span>

#include "zkpark/algebra/fields.hpp"
#include "zkpark/util/random.hpp"

namespace zkpark {

inline constexpr std::size_t kMaxUidBytes = 64;
inline constexpr std::size_t kUidChunkBytes = 31;

// Holder of the user's private key. Printing never reveals the value.
class IdentitySecret {
 public:
  // ArgumentError if sk is zero.
  explicit IdentitySecret(const Fr& sk);

  template <class Rng>
  static IdentitySecret generate(Rng& rng) {
    for (;;) {
      const Fr sk = Fr::random(rng);
      if (!sk.is_zero()) return IdentitySecret(sk);
    }
  }
  static IdentitySecret generate();

  const Fr& sk() const { return sk_; }

  friend std::ostream& operator<<(std::ostream& os, const IdentitySecret&) { return os << "IdentitySecret(<redacted>)"; }

 private:
  Fr sk_;
};

struct EpochNullifier {
  Fr nu;
  std::uint64_t epoch_id = 0;
};

// Packs 31-byte chunks as LE(chunk) + len(chunk) * 2^248; more than one
// chunk is folded left with hash2. ArgumentError for empty or > 64 bytes.
Fr encode_uid(std::span<const std::uint8_t> uid);
Fr uid_lane(std::span<const std::uint8_t> chunk);

Fr public_key(const IdentitySecret& secret);
Fr commitment(const IdentitySecret& secret, std::span<const std::uint8_t> uid);
Fr commitment_from_parts(const Fr& pk, const Fr& uid_field);
Fr nullifier_hash(const IdentitySecret& secret, const Fr& nu);

// Keyfile: the raw 32-byte encoding of sk, created with mode 0600.
void write_keyfile(const std::filesystem::path& file, const IdentitySecret& secret);
IdentitySecret read_keyfile(const std::filesystem::path& file);

}  // namespace zkpark
