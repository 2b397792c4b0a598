#pragma once

#include <boost/asio/ip/tcp.hpp>
#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "zkpark/util/bytes.hpp"

// Length-prefixed messages over TCP: u32 little-endian length, then the body.
namespace zkpark::net {

struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  // "host:port"; ConfigError otherwise.
  static Endpoint parse(std::string_view text);
  std::string str() const { return host + ":" + std::to_string(port); }
};

void write_message(boost::asio::ip::tcp::socket& socket, std::span<const std::uint8_t> body);
// DecodeError if the announced length exceeds the protocol limit; Asio
// system_error on I/O failure or EOF.
Bytes read_message(boost::asio::ip::tcp::socket& socket);

// One request/response exchange on a fresh connection. ConnectError on any
// transport failure.
Bytes exchange(const Endpoint& server, std::span<const std::uint8_t> request,
               std::chrono::milliseconds timeout = std::chrono::seconds(30));

}  // namespace zkpark::net
