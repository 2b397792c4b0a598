#pragma once

#include <chrono>
#include <functional>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "zkpark/net/tcp.hpp"

namespace zkpark::net {

// One request, one response. Implementations throw ConnectError when the
// exchange cannot complete.
class Transport {
 public:
  virtual ~Transport() = default;
  virtual Bytes exchange(std::span<const std::uint8_t> request) = 0;
};

struct RetryPolicy {
  unsigned attempts = 4;
  std::chrono::milliseconds first_backoff{100};  // doubled after each failure
  std::chrono::milliseconds timeout{30000};
};

class TcpTransport final : public Transport {
 public:
  explicit TcpTransport(Endpoint server, RetryPolicy policy = {});
  // Retries connect and I/O failures with exponential backoff; ConnectError
  // once the attempts are used up.
  Bytes exchange(std::span<const std::uint8_t> request) override;

 private:
  Endpoint server_;
  RetryPolicy policy_;
};

// Forwards to another transport and keeps a copy of all traffic, for wire
// scans and call tracing in tests.
class RecordingTransport final : public Transport {
 public:
  struct Exchange {
    Bytes request;
    Bytes response;
  };

  explicit RecordingTransport(Transport& inner) : inner_(inner) {}
  Bytes exchange(std::span<const std::uint8_t> request) override;

  std::vector<Exchange> log() const;
  void clear();

 private:
  Transport& inner_;
  mutable std::mutex mu_;
  std::vector<Exchange> log_;
};

}  // namespace zkpark::net
