#include "zkpark/identity/identity.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <array>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <iterator>
#include <vector>

#include "zkpark/poseidon/poseidon.hpp"

namespace zkpark {

IdentitySecret::IdentitySecret(const Fr& sk) : sk_(sk) {
  if (sk.is_zero()) throw ArgumentError("identity secret must be nonzero");
}

IdentitySecret IdentitySecret::generate() {
  SystemRandom rng;
  return generate(rng);
}

Fr uid_lane(std::span<const std::uint8_t> chunk) {
  if (chunk.empty() || chunk.size() > kUidChunkBytes) throw ArgumentError("uid chunk must be 1..31 bytes");
  U256 v;
  for (std::size_t i = 0; i < chunk.size(); ++i) v.limb[i / 8] |= static_cast<std::uint64_t>(chunk[i]) << (8 * (i % 8));
  v.limb[3] |= static_cast<std::uint64_t>(chunk.size()) << 56;
  return Fr::from_canonical(v);
}

Fr encode_uid(std::span<const std::uint8_t> uid) {
  if (uid.empty()) throw ArgumentError("uid must not be empty");
  if (uid.size() > kMaxUidBytes) throw ArgumentError("uid longer than 64 bytes");
  Fr acc = uid_lane(uid.first(std::min(uid.size(), kUidChunkBytes)));
  for (std::size_t off = kUidChunkBytes; off < uid.size(); off += kUidChunkBytes) {
    acc = hash2(acc, uid_lane(uid.subspan(off, std::min(kUidChunkBytes, uid.size() - off))));
  }
  return acc;
}

Fr public_key(const IdentitySecret& secret) { return hash1(secret.sk()); }

Fr commitment_from_parts(const Fr& pk, const Fr& uid_field) { return hash2(pk, hash1(uid_field)); }

Fr commitment(const IdentitySecret& secret, std::span<const std::uint8_t> uid) {
  return commitment_from_parts(public_key(secret), encode_uid(uid));
}

Fr nullifier_hash(const IdentitySecret& secret, const Fr& nu) { return hash2(secret.sk(), nu); }

void write_keyfile(const std::filesystem::path& file, const IdentitySecret& secret) {
  const int fd = ::open(file.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0600);
  if (fd < 0) throw IoError("cannot create keyfile " + file.string() + ": " + std::strerror(errno));
  ::fchmod(fd, 0600);
  const auto bytes = secret.sk().to_bytes();
  const ssize_t n = ::write(fd, bytes.data(), bytes.size());
  ::close(fd);
  if (n != static_cast<ssize_t>(bytes.size())) throw IoError("short write to keyfile " + file.string());
}

IdentitySecret read_keyfile(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw IoError("cannot read keyfile " + file.string());
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() != 32) throw DecodeError("keyfile must hold exactly 32 bytes");
  return IdentitySecret(Fr::from_bytes(bytes));
}

}  // namespace zkpark
