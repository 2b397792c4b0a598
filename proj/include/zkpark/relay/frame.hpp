#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "zkpark/util/bytes.hpp"

// BLE-sized framing used between vehicles and the roadside relay. Header is
// u32 msg_id, u16 seq, u16 total, all little-endian, then the payload.
namespace zkpark::relay {

inline constexpr std::size_t kFrameHeaderBytes = 8;
inline constexpr std::size_t kFramePayloadBytes = 236;
inline constexpr std::size_t kMaxRelayMessageBytes = 64 * 1024;

struct Frame {
  std::uint32_t msg_id = 0;
  std::uint16_t seq = 0;
  std::uint16_t total = 0;
  Bytes payload;

  Bytes encode() const;
  // DecodeError on short input, oversized payload, total == 0 or seq >= total.
  static Frame decode(std::span<const std::uint8_t> datagram);
  bool operator==(const Frame&) const = default;
};

// An empty message still yields one frame. ArgumentError above 64 KiB.
std::vector<Frame> fragment(std::uint32_t msg_id, std::span<const std::uint8_t> message);
std::size_t frame_count(std::size_t message_bytes);

// Collects frames per msg_id. Duplicates are ignored; a frame whose total
// disagrees with earlier frames of the same message is dropped.
class Reassembler {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Reassembler(std::chrono::milliseconds timeout = std::chrono::seconds(10)) : timeout_(timeout) {}

  // Returns the message once its last missing frame arrives.
  std::optional<Bytes> add(const Frame& frame, Clock::time_point now = Clock::now());
  // Drops partial messages idle for longer than the timeout; returns their ids.
  std::vector<std::uint32_t> expire(Clock::time_point now = Clock::now());
  // ReassemblyTimeout if msg_id is still partial past the timeout.
  void check_deadline(std::uint32_t msg_id, Clock::time_point now = Clock::now()) const;
  std::size_t pending() const { return partial_.size(); }
  void forget(std::uint32_t msg_id) { partial_.erase(msg_id); }

 private:
  struct Partial {
    std::vector<std::optional<Bytes>> parts;
    std::size_t have = 0;
    Clock::time_point last_frame;
  };
  std::chrono::milliseconds timeout_;
  std::map<std::uint32_t, Partial> partial_;
};

}  // namespace zkpark::relay
