#pragma once

#include <condition_variable>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "zkpark/net/tcp.hpp"
#include "zkpark/server/authority.hpp"

namespace zkpark {

struct ServerConfig {
  net::Endpoint listen{"127.0.0.1", 7700};
  unsigned depth = IncrementalMerkleTree::kDefaultDepth;
  std::chrono::seconds epoch_duration{600};
  std::filesystem::path data_dir = "zkpark-data";
  // Public seed of the demo SRS; see Srs::kUnsafeMarker.
  std::string srs_seed = "zkpark-demo-srs";
  std::size_t root_history = 64;
  std::uint64_t nullifier_retention = 2;
  // Enables the "rotate" op, meant for demos and tests.
  bool allow_rotate_op = false;

  // Defaults, then the JSON file if given, then ZKPARK_LISTEN, ZKPARK_DEPTH,
  // ZKPARK_EPOCH_SECONDS, ZKPARK_DATA_DIR and ZKPARK_SRS_SEED from env.
  // ConfigError on unreadable files or bad values.
  static ServerConfig load(const std::optional<std::filesystem::path>& file,
                           const std::function<const char*(const char*)>& env = nullptr);

  AuthorityConfig authority() const;
};

// Maps one request message to one response message. Never throws; failures
// become {"ok": false, "reason": ...}.
class RequestHandler {
 public:
  struct Options {
    std::string srs_seed;
    bool allow_rotate_op = false;
  };

  RequestHandler(Authority& authority, Options options);
  Bytes handle(std::span<const std::uint8_t> request);

 private:
  protocol::Json dispatch(const protocol::Json& req);
  protocol::Json auth(const protocol::AuthRequest& req);

  Authority& authority_;
  Options options_;
};

// Accepts connections and serves length-prefixed requests on each until the
// peer closes. One thread per connection.
class TcpServer {
 public:
  // Binds immediately; port 0 picks a free port.
  TcpServer(RequestHandler& handler, const net::Endpoint& listen);
  ~TcpServer();
  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }
  void start();
  void stop();

 private:
  struct Impl;
  RequestHandler& handler_;
  std::unique_ptr<Impl> impl_;
  std::uint16_t port_ = 0;
};

// Calls rotate_if_due on a fixed cadence until destroyed.
class EpochTicker {
 public:
  EpochTicker(Authority& authority, std::chrono::milliseconds period);
  ~EpochTicker();

 private:
  Authority& authority_;
  std::mutex mu_;
  std::condition_variable cv_;
  bool stop_ = false;
  std::thread thread_;
};

}  // namespace zkpark
