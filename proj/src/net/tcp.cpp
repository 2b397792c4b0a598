#include "zkpark/net/tcp.hpp"

#include <sys/socket.h>
#include <sys/time.h>

#include <array>
#include <cerrno>
#include <boost/asio/connect.hpp>
#include <boost/asio/io_context.hpp>
#include <boost/asio/read.hpp>
#include <boost/asio/write.hpp>
#include <charconv>

#include "zkpark/error.hpp"
#include "zkpark/protocol/messages.hpp"

namespace zkpark::net {

namespace asio = boost::asio;
using asio::ip::tcp;

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon == 0 || colon + 1 == text.size()) {
    throw ConfigError("expected host:port, got '" + std::string(text) + "'");
  }
  unsigned port = 0;
  const auto digits = text.substr(colon + 1);
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || ptr != digits.data() + digits.size() || port > 65535) {
    throw ConfigError("bad port in '" + std::string(text) + "'");
  }
  return {std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

void write_message(tcp::socket& socket, std::span<const std::uint8_t> body) {
  if (body.size() > protocol::kMaxMessageBytes) throw ArgumentError("message too large");
  Bytes header;
  append_u32_le(header, static_cast<std::uint32_t>(body.size()));
  const std::array<asio::const_buffer, 2> bufs = {asio::buffer(header), asio::buffer(body.data(), body.size())};
  asio::write(socket, bufs);
}

Bytes read_message(tcp::socket& socket) {
  std::array<std::uint8_t, 4> header{};
  asio::read(socket, asio::buffer(header));
  const std::uint32_t len = read_u32_le(header);
  if (len > protocol::kMaxMessageBytes) throw DecodeError("message length " + std::to_string(len) + " over limit");
  Bytes body(len);
  asio::read(socket, asio::buffer(body));
  return body;
}

namespace {

// Blocking reads that honour SO_RCVTIMEO; Asio's own sync read would wait
// forever after the timeout fires.
void recv_exact(tcp::socket& socket, std::uint8_t* out, std::size_t n) {
  while (n > 0) {
    const ssize_t got = ::recv(socket.native_handle(), out, n, 0);
    if (got == 0) throw boost::system::system_error(asio::error::eof);
    if (got < 0) {
      if (errno == EINTR) continue;
      throw boost::system::system_error(errno == EAGAIN || errno == EWOULDBLOCK ? asio::error::timed_out
                                                                                : boost::system::error_code(
                                                                                      errno, boost::system::system_category()));
    }
    out += got;
    n -= static_cast<std::size_t>(got);
  }
}

Bytes read_message_timed(tcp::socket& socket) {
  std::array<std::uint8_t, 4> header{};
  recv_exact(socket, header.data(), header.size());
  const std::uint32_t len = read_u32_le(header);
  if (len > protocol::kMaxMessageBytes) throw DecodeError("message length " + std::to_string(len) + " over limit");
  Bytes body(len);
  recv_exact(socket, body.data(), body.size());
  return body;
}

}  // namespace

Bytes exchange(const Endpoint& server, std::span<const std::uint8_t> request, std::chrono::milliseconds timeout) {
  try {
    asio::io_context io;
    tcp::resolver resolver(io);
    tcp::socket socket(io);
    asio::connect(socket, resolver.resolve(server.host, std::to_string(server.port)));
    timeval tv{};
    tv.tv_sec = static_cast<time_t>(timeout.count() / 1000);
    tv.tv_usec = static_cast<suseconds_t>((timeout.count() % 1000) * 1000);
    ::setsockopt(socket.native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
    ::setsockopt(socket.native_handle(), SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof tv);
    write_message(socket, request);
    return read_message_timed(socket);
  } catch (const boost::system::system_error& e) {
    throw ConnectError(server.str() + ": " + e.what());
  }
}

}  // namespace zkpark::net
