#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <random>
#include <string>

#include "zkpark/net/transport.hpp"
#include "zkpark/relay/frame.hpp"

namespace zkpark::relay {

enum class Direction : std::uint8_t { kUp = 0, kDown = 1 };

// Seeded frame loss: the n-th sighting of (direction, msg_id, seq) is
// dropped or kept as a pure function of the seed, so runs replay exactly.
class LossModel {
 public:
  LossModel(double loss_rate, std::uint64_t seed);
  bool drop(Direction dir, std::uint32_t msg_id, std::uint16_t seq, std::uint32_t sighting) const;
  double rate() const { return rate_; }

 private:
  double rate_;
  std::uint64_t seed_;
};

struct RelayConfig {
  net::Endpoint listen{"127.0.0.1", 0};  // UDP
  net::Endpoint server;                  // TCP
  double loss_rate = 0.0;
  std::chrono::milliseconds latency{0};  // added in each direction
  std::uint64_t seed = 1;
  std::chrono::milliseconds reassembly_timeout{10000};
  std::chrono::milliseconds upstream_timeout{30000};
};

struct RelayStats {
  std::uint64_t frames_in = 0, frames_dropped_up = 0, frames_out = 0, frames_dropped_down = 0;
  std::uint64_t messages_forwarded = 0, cached_replies = 0, upstream_failures = 0;
};

// Store-and-forward roadside unit: reassembles client frames received over
// UDP, forwards each message to the server over TCP and fragments the reply
// back. Payloads are never inspected. Replies are cached per msg_id so a
// client retransmission after a lost reply does not reach the server twice.
class Relay {
 public:
  // ConfigError unless 0 <= loss_rate < 1. Binds immediately.
  explicit Relay(RelayConfig config);
  ~Relay();
  Relay(const Relay&) = delete;
  Relay& operator=(const Relay&) = delete;

  std::uint16_t port() const;
  void start();
  void stop();
  RelayStats stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Whole-message retransmission over UDP frames through a relay. A fresh
// msg_id per exchange is reused across its retransmissions.
class RelayTransport final : public net::Transport {
 public:
  struct Options {
    unsigned attempts = 5;
    std::chrono::milliseconds attempt_timeout{3000};
    std::uint64_t seed = std::random_device{}();
  };

  RelayTransport(net::Endpoint relay, Options options);
  explicit RelayTransport(net::Endpoint relay) : RelayTransport(std::move(relay), Options{}) {}
  ~RelayTransport() override;

  // ReassemblyTimeout if the last attempt got part of the reply,
  // ConnectError if it got nothing.
  Bytes exchange(std::span<const std::uint8_t> request) override;
  unsigned last_attempts() const { return last_attempts_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  unsigned last_attempts_ = 0;
};

}  // namespace zkpark::relay
