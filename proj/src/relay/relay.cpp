#include "zkpark/relay/relay.hpp"

#include <sys/socket.h>
#include <sys/time.h>

#include <atomic>
#include <cstring>
#include <optional>
#include <boost/asio/io_context.hpp>
#include <boost/asio/ip/udp.hpp>
#include <boost/asio/post.hpp>
#include <boost/asio/thread_pool.hpp>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "zkpark/error.hpp"
#include "zkpark/protocol/messages.hpp"

namespace zkpark::relay {

namespace asio = boost::asio;
using asio::ip::udp;
using Clock = std::chrono::steady_clock;

namespace {

constexpr auto kPollInterval = std::chrono::milliseconds(50);
constexpr auto kResendGap = std::chrono::milliseconds(250);
constexpr auto kReplyCacheTtl = std::chrono::seconds(120);

void set_receive_timeout(udp::socket& s, std::chrono::milliseconds t) {
  timeval tv{};
  tv.tv_sec = static_cast<time_t>(t.count() / 1000);
  tv.tv_usec = static_cast<suseconds_t>((t.count() % 1000) * 1000);
  ::setsockopt(s.native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof tv);
}

// Asio's blocking receive retries on EAGAIN, which would defeat SO_RCVTIMEO,
// so timed reads go through recvfrom directly. Returns 0 bytes on timeout.
std::optional<std::size_t> receive_timed(udp::socket& s, std::span<std::uint8_t> buf, udp::endpoint* from) {
  sockaddr_storage addr{};
  socklen_t len = sizeof addr;
  const ssize_t n = ::recvfrom(s.native_handle(), buf.data(), buf.size(), 0, reinterpret_cast<sockaddr*>(&addr), &len);
  if (n < 0) return std::nullopt;
  if (from) {
    from->resize(len);
    std::memcpy(from->data(), &addr, len);
  }
  return static_cast<std::size_t>(n);
}

udp::endpoint resolve_udp(asio::io_context& io, const net::Endpoint& e) {
  udp::resolver r(io);
  return *r.resolve(udp::v4(), e.host, std::to_string(e.port)).begin();
}

}  // namespace

LossModel::LossModel(double loss_rate, std::uint64_t seed) : rate_(loss_rate), seed_(seed) {
  if (!(loss_rate >= 0.0 && loss_rate < 1.0)) throw ConfigError("loss rate must be in [0, 1)");
}

bool LossModel::drop(Direction dir, std::uint32_t msg_id, std::uint16_t seq, std::uint32_t sighting) const {
  if (rate_ == 0.0) return false;
  std::seed_seq s{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32),
                  static_cast<std::uint32_t>(dir), msg_id, static_cast<std::uint32_t>(seq), sighting};
  std::mt19937_64 gen(s);
  return std::uniform_real_distribution<double>(0.0, 1.0)(gen) < rate_;
}

struct Relay::Impl {
  using Key = std::pair<udp::endpoint, std::uint32_t>;
  struct Reply {
    Bytes bytes;
    Clock::time_point created, last_sent;
  };

  RelayConfig cfg;
  LossModel loss;
  asio::io_context io;
  udp::socket socket{io};
  asio::thread_pool pool{4};
  std::thread receiver;
  std::atomic<bool> stopping{false};
  bool started = false;

  std::mutex send_mu;
  mutable std::mutex mu;
  std::map<udp::endpoint, Reassembler> reassembly;
  std::map<std::tuple<Direction, std::uint32_t, std::uint16_t>, std::uint32_t> sightings;
  std::set<Key> in_flight;
  std::map<Key, Reply> replies;
  RelayStats stats;

  explicit Impl(RelayConfig c) : cfg(std::move(c)), loss(cfg.loss_rate, cfg.seed) {
    const udp::endpoint ep = resolve_udp(io, cfg.listen);
    socket.open(ep.protocol());
    socket.bind(ep);
    set_receive_timeout(socket, kPollInterval);
  }

  // Caller holds mu.
  bool lose(Direction dir, const Frame& f) {
    const std::uint32_t n = sightings[{dir, f.msg_id, f.seq}]++;
    return loss.drop(dir, f.msg_id, f.seq, n);
  }

  void send_reply(const udp::endpoint& peer, std::uint32_t msg_id, const Bytes& reply) {
    for (const Frame& f : fragment(msg_id, reply)) {
      {
        std::lock_guard lock(mu);
        if (lose(Direction::kDown, f)) {
          ++stats.frames_dropped_down;
          continue;
        }
        ++stats.frames_out;
      }
      std::lock_guard lock(send_mu);
      boost::system::error_code ignored;
      socket.send_to(asio::buffer(f.encode()), peer, 0, ignored);
    }
  }

  void forward(const udp::endpoint& peer, std::uint32_t msg_id, Bytes message) {
    std::this_thread::sleep_for(cfg.latency);
    Bytes reply;
    try {
      reply = net::exchange(cfg.server, message, cfg.upstream_timeout);
      std::lock_guard lock(mu);
      ++stats.messages_forwarded;
    } catch (const Error& e) {
      reply = protocol::dump(protocol::error_response("TransportError", e.what()));
      std::lock_guard lock(mu);
      ++stats.upstream_failures;
    }
    std::this_thread::sleep_for(cfg.latency);
    {
      std::lock_guard lock(mu);
      in_flight.erase({peer, msg_id});
      replies[{peer, msg_id}] = {reply, Clock::now(), Clock::now()};
    }
    send_reply(peer, msg_id, reply);
  }

  void resend(const udp::endpoint& peer, std::uint32_t msg_id, Bytes reply) {
    std::this_thread::sleep_for(2 * cfg.latency);
    send_reply(peer, msg_id, reply);
  }

  void sweep(Clock::time_point now) {
    std::lock_guard lock(mu);
    for (auto& [peer, r] : reassembly) r.expire(now);
    std::erase_if(reassembly, [](const auto& kv) { return kv.second.pending() == 0; });
    std::erase_if(replies, [&](const auto& kv) { return now - kv.second.created > kReplyCacheTtl; });
  }

  void on_datagram(const udp::endpoint& peer, std::span<const std::uint8_t> datagram) {
    Frame f;
    try {
      f = Frame::decode(datagram);
    } catch (const DecodeError&) {
      return;
    }
    const Key key{peer, f.msg_id};
    const auto now = Clock::now();
    std::lock_guard lock(mu);
    ++stats.frames_in;
    if (lose(Direction::kUp, f)) {
      ++stats.frames_dropped_up;
      return;
    }
    if (auto it = replies.find(key); it != replies.end()) {
      // A retransmission: the client missed part of the reply.
      if (now - it->second.last_sent >= kResendGap) {
        it->second.last_sent = now;
        ++stats.cached_replies;
        asio::post(pool, [this, peer, id = f.msg_id, reply = it->second.bytes] { resend(peer, id, reply); });
      }
      return;
    }
    if (in_flight.contains(key)) return;
    auto [r, fresh] = reassembly.try_emplace(peer, cfg.reassembly_timeout);
    if (auto message = r->second.add(f, now)) {
      in_flight.insert(key);
      asio::post(pool, [this, peer, id = f.msg_id, m = std::move(*message)]() mutable { forward(peer, id, std::move(m)); });
    }
  }

  void run() {
    std::array<std::uint8_t, 2048> buf{};
    auto last_sweep = Clock::now();
    while (!stopping) {
      udp::endpoint peer;
      if (const auto n = receive_timed(socket, buf, &peer)) on_datagram(peer, std::span(buf.data(), *n));
      const auto now = Clock::now();
      if (now - last_sweep > std::chrono::seconds(1)) {
        sweep(now);
        last_sweep = now;
      }
    }
  }
};

Relay::Relay(RelayConfig config) : impl_(std::make_unique<Impl>(std::move(config))) {}

Relay::~Relay() { stop(); }

std::uint16_t Relay::port() const { return impl_->socket.local_endpoint().port(); }

void Relay::start() {
  impl_->started = true;
  impl_->receiver = std::thread([this] { impl_->run(); });
}

void Relay::stop() {
  if (impl_->stopping.exchange(true)) return;
  if (impl_->receiver.joinable()) impl_->receiver.join();
  impl_->pool.join();
}

RelayStats Relay::stats() const {
  std::lock_guard lock(impl_->mu);
  return impl_->stats;
}

struct RelayTransport::Impl {
  Options options;
  asio::io_context io;
  udp::socket socket{io};
  std::mt19937_64 rng;

  Impl(const net::Endpoint& relay, Options o) : options(o), rng(o.seed) {
    const udp::endpoint ep = resolve_udp(io, relay);
    socket.open(ep.protocol());
    socket.connect(ep);
    set_receive_timeout(socket, kPollInterval);
  }
};

RelayTransport::RelayTransport(net::Endpoint relay, Options options)
    : impl_(std::make_unique<Impl>(relay, options)) {
  if (options.attempts == 0) throw ArgumentError("relay transport needs at least one attempt");
}

RelayTransport::~RelayTransport() = default;

Bytes RelayTransport::exchange(std::span<const std::uint8_t> request) {
  Impl& im = *impl_;
  const auto msg_id = static_cast<std::uint32_t>(im.rng());
  const std::vector<Frame> frames = fragment(msg_id, request);
  // Kept across attempts: reply frames from an earlier attempt still count.
  Reassembler reply(im.options.attempt_timeout);
  std::array<std::uint8_t, 2048> buf{};
  for (unsigned attempt = 1; attempt <= im.options.attempts; ++attempt) {
    last_attempts_ = attempt;
    for (const Frame& f : frames) {
      boost::system::error_code ignored;
      im.socket.send(asio::buffer(f.encode()), 0, ignored);
    }
    const auto deadline = Clock::now() + im.options.attempt_timeout;
    while (Clock::now() < deadline) {
      const auto n = receive_timed(im.socket, buf, nullptr);
      if (!n) continue;
      try {
        const Frame f = Frame::decode(std::span(buf.data(), *n));
        if (f.msg_id != msg_id) continue;
        if (auto done = reply.add(f)) return *done;
      } catch (const DecodeError&) {
      }
    }
  }
  if (reply.pending() > 0) {
    throw ReassemblyTimeout("reply incomplete after " + std::to_string(im.options.attempts) + " attempts");
  }
  throw ConnectError("no reply from relay after " + std::to_string(im.options.attempts) + " attempts");
}

}  // namespace zkpark::relay
