#include "zkpark/net/transport.hpp"

#include <thread>

#include "zkpark/error.hpp"

namespace zkpark::net {

TcpTransport::TcpTransport(Endpoint server, RetryPolicy policy) : server_(std::move(server)), policy_(policy) {
  if (policy_.attempts == 0) throw ArgumentError("retry policy needs at least one attempt");
}

Bytes TcpTransport::exchange(std::span<const std::uint8_t> request) {
  auto backoff = policy_.first_backoff;
  for (unsigned attempt = 1;; ++attempt) {
    try {
      return net::exchange(server_, request, policy_.timeout);
    } catch (const ConnectError&) {
      if (attempt == policy_.attempts) throw;
    }
    std::this_thread::sleep_for(backoff);
    backoff *= 2;
  }
}

Bytes RecordingTransport::exchange(std::span<const std::uint8_t> request) {
  std::size_t slot = 0;
  {
    // Logged before sending so failed exchanges still show up.
    std::lock_guard lock(mu_);
    slot = log_.size();
    log_.push_back({Bytes(request.begin(), request.end()), {}});
  }
  Bytes response = inner_.exchange(request);
  std::lock_guard lock(mu_);
  log_[slot].response = response;
  return response;
}

std::vector<RecordingTransport::Exchange> RecordingTransport::log() const {
  std::lock_guard lock(mu_);
  return log_;
}

void RecordingTransport::clear() {
  std::lock_guard lock(mu_);
  log_.clear();
}

}  // namespace zkpark::net
