#pragma once

#include <cstdint>
#include <limits>

namespace zkpark {

/// Cryptographically strong UniformRandomBitGenerator backed by the OS
/// entropy source (libsodium randombytes).
class SystemRandom {
 public:
  using result_type = std::uint64_t;

  SystemRandom();

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();
};

}  // namespace zkpark
