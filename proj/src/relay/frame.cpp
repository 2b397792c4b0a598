#include "zkpark/relay/frame.hpp"

#include <algorithm>

#include "zkpark/error.hpp"

namespace zkpark::relay {

Bytes Frame::encode() const {
  Bytes out;
  out.reserve(kFrameHeaderBytes + payload.size());
  append_u32_le(out, msg_id);
  out.push_back(static_cast<std::uint8_t>(seq));
  out.push_back(static_cast<std::uint8_t>(seq >> 8));
  out.push_back(static_cast<std::uint8_t>(total));
  out.push_back(static_cast<std::uint8_t>(total >> 8));
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Frame Frame::decode(std::span<const std::uint8_t> datagram) {
  if (datagram.size() < kFrameHeaderBytes) throw DecodeError("frame shorter than its header");
  if (datagram.size() > kFrameHeaderBytes + kFramePayloadBytes) throw DecodeError("frame payload over 236 bytes");
  Frame f;
  f.msg_id = read_u32_le(datagram.first(4));
  f.seq = static_cast<std::uint16_t>(datagram[4] | (datagram[5] << 8));
  f.total = static_cast<std::uint16_t>(datagram[6] | (datagram[7] << 8));
  if (f.total == 0 || f.seq >= f.total) throw DecodeError("frame seq/total out of range");
  f.payload.assign(datagram.begin() + kFrameHeaderBytes, datagram.end());
  return f;
}

std::size_t frame_count(std::size_t message_bytes) {
  return std::max<std::size_t>(1, (message_bytes + kFramePayloadBytes - 1) / kFramePayloadBytes);
}

std::vector<Frame> fragment(std::uint32_t msg_id, std::span<const std::uint8_t> message) {
  if (message.size() > kMaxRelayMessageBytes) throw ArgumentError("relay message over 64 KiB");
  const std::size_t total = frame_count(message.size());
  std::vector<Frame> frames;
  frames.reserve(total);
  for (std::size_t i = 0; i < total; ++i) {
    const std::size_t begin = i * kFramePayloadBytes;
    const std::size_t end = std::min(message.size(), begin + kFramePayloadBytes);
    frames.push_back({msg_id, static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(total),
                      Bytes(message.begin() + static_cast<std::ptrdiff_t>(begin),
                            message.begin() + static_cast<std::ptrdiff_t>(end))});
  }
  return frames;
}

std::optional<Bytes> Reassembler::add(const Frame& frame, Clock::time_point now) {
  auto [it, fresh] = partial_.try_emplace(frame.msg_id);
  Partial& p = it->second;
  if (fresh) p.parts.resize(frame.total);
  if (p.parts.size() != frame.total) return std::nullopt;
  p.last_frame = now;
  auto& slot = p.parts[frame.seq];
  if (slot) return std::nullopt;
  slot = frame.payload;
  if (++p.have < p.parts.size()) return std::nullopt;
  Bytes out;
  for (const auto& part : p.parts) out.insert(out.end(), part->begin(), part->end());
  partial_.erase(it);
  return out;
}

std::vector<std::uint32_t> Reassembler::expire(Clock::time_point now) {
  std::vector<std::uint32_t> gone;
  for (auto it = partial_.begin(); it != partial_.end();) {
    if (now - it->second.last_frame > timeout_) {
      gone.push_back(it->first);
      it = partial_.erase(it);
    } else {
      ++it;
    }
  }
  return gone;
}

void Reassembler::check_deadline(std::uint32_t msg_id, Clock::time_point now) const {
  const auto it = partial_.find(msg_id);
  if (it != partial_.end() && now - it->second.last_frame > timeout_) {
    throw ReassemblyTimeout("message " + std::to_string(msg_id) + " has " + std::to_string(it->second.have) + " of " +
                            std::to_string(it->second.parts.size()) + " frames");
  }
}

}  // namespace zkpark::relay
