#include "zkpark/server/server.hpp"

#include <sys/socket.h>

#include <atomic>
#include <boost/asio/io_context.hpp>
#include <charconv>
#include <cstdlib>
#include <fstream>

#include "zkpark/error.hpp"
#include "zkpark/prover/srs.hpp"

namespace zkpark {

namespace asio = boost::asio;
using asio::ip::tcp;
using protocol::Json;

namespace {

constexpr std::size_t kMaxLeavesPerReply = 512;

unsigned parse_unsigned(std::string_view what, std::string_view text) {
  unsigned v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(std::string(what) + ": not an unsigned integer: '" + std::string(text) + "'");
  }
  return v;
}

Json epoch_json(const EpochState& e) {
  return Json{{"ok", true},
              {"epoch_id", e.epoch_id},
              {"nu", protocol::fr_to_hex(e.nu)},
              {"started_at_ms", e.started_at_ms},
              {"duration_s", e.duration.count()}};
}

}  // namespace

ServerConfig ServerConfig::load(const std::optional<std::filesystem::path>& file,
                                const std::function<const char*(const char*)>& env) {
  ServerConfig c;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw ConfigError("cannot read config " + file->string());
    const Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("config " + file->string() + " is not a JSON object");
    try {
      if (j.contains("listen")) c.listen = net::Endpoint::parse(j.at("listen").get<std::string>());
      if (j.contains("depth")) c.depth = j.at("depth").get<unsigned>();
      if (j.contains("epoch_seconds")) c.epoch_duration = std::chrono::seconds(j.at("epoch_seconds").get<unsigned>());
      if (j.contains("data_dir")) c.data_dir = j.at("data_dir").get<std::string>();
      if (j.contains("srs_seed")) c.srs_seed = j.at("srs_seed").get<std::string>();
      if (j.contains("root_history")) c.root_history = j.at("root_history").get<std::size_t>();
      if (j.contains("nullifier_retention")) c.nullifier_retention = j.at("nullifier_retention").get<std::uint64_t>();
      if (j.contains("allow_rotate_op")) c.allow_rotate_op = j.at("allow_rotate_op").get<bool>();
    } catch (const Json::exception& e) {
      throw ConfigError("config " + file->string() + ": " + e.what());
    }
  }
  const auto lookup = env ? env : [](const char* name) -> const char* { return std::getenv(name); };
  if (const char* v = lookup("ZKPARK_LISTEN")) c.listen = net::Endpoint::parse(v);
  if (const char* v = lookup("ZKPARK_DEPTH")) c.depth = parse_unsigned("ZKPARK_DEPTH", v);
  if (const char* v = lookup("ZKPARK_EPOCH_SECONDS")) {
    c.epoch_duration = std::chrono::seconds(parse_unsigned("ZKPARK_EPOCH_SECONDS", v));
  }
  if (const char* v = lookup("ZKPARK_DATA_DIR")) c.data_dir = v;
  if (const char* v = lookup("ZKPARK_SRS_SEED")) c.srs_seed = v;
  if (c.depth < IncrementalMerkleTree::kMinDepth || c.depth > IncrementalMerkleTree::kMaxDepth) {
    throw ConfigError("depth must be in [2, 32]");
  }
  if (c.epoch_duration.count() <= 0) throw ConfigError("epoch_seconds must be positive");
  return c;
}

AuthorityConfig ServerConfig::authority() const {
  AuthorityConfig a;
  a.depth = depth;
  a.epoch_duration = epoch_duration;
  a.data_dir = data_dir;
  a.root_history = root_history;
  a.nullifier_retention = nullifier_retention;
  return a;
}

RequestHandler::RequestHandler(Authority& authority, Options options)
    : authority_(authority), options_(std::move(options)) {}

Json RequestHandler::auth(const protocol::AuthRequest& req) {
  const AuthOutcome o = authority_.authenticate(req.publics, req.proof);
  if (o == AuthOutcome::kAccept) return Json{{"ok", true}, {"result", "Accept"}};
  return Json{{"ok", false}, {"reason", protocol::outcome_name(o)}};
}

Json RequestHandler::dispatch(const Json& req) {
  const std::string op = protocol::get_string(req, "op");
  if (op == "register") {
    const Bytes uid = from_base64(protocol::get_string(req, "uid"));
    const Fr commitment = protocol::fr_from_hex(protocol::get_string(req, "commitment"));
    const RegistrationReceipt r = authority_.register_identity(uid, commitment);
    return Json{{"ok", true},
                {"leaf_index", r.leaf_index},
                {"path", protocol::path_to_json(r.path)},
                {"root", protocol::fr_to_hex(r.root)}};
  }
  if (op == "state") {
    const StateSnapshot s = authority_.query_state(protocol::get_u64(req, "leaf_index"));
    return Json{{"ok", true},
                {"path", protocol::path_to_json(s.path)},
                {"root", protocol::fr_to_hex(s.root)},
                {"nu", protocol::fr_to_hex(s.nu)},
                {"epoch_id", s.epoch_id}};
  }
  if (op == "auth") {
    protocol::AuthRequest a;
    try {
      a = protocol::auth_from_json(req);
    } catch (const DecodeError& e) {
      return protocol::error_response("Malformed", e.what());
    }
    return auth(a);
  }
  if (op == "epoch") return epoch_json(authority_.current_epoch());
  if (op == "leaves") {
    const std::uint64_t from = req.contains("from") ? protocol::get_u64(req, "from") : 0;
    const LeafRange r = authority_.leaves(from, kMaxLeavesPerReply);
    Json leaves = Json::array();
    for (const Fr& l : r.leaves) leaves.push_back(protocol::fr_to_hex(l));
    return Json{{"ok", true},
                {"from", from},
                {"leaves", leaves},
                {"next_index", r.next_index},
                {"root", protocol::fr_to_hex(r.root)}};
  }
  if (op == "params") {
    return Json{{"ok", true},
                {"depth", authority_.depth()},
                {"srs_seed", to_hex(as_bytes(options_.srs_seed))},
                {"srs_marker", Srs::kUnsafeMarker},
                {"vk_digest", to_hex(authority_.vk().digest())},
                {"num_public", authority_.vk().num_public},
                {"proof_bytes", kProofBytes}};
  }
  if (op == "info") {
    const AuthoritySummary s = authority_.summary();
    Json nfs = Json::array();
    for (const Fr& nf : s.current_nullifiers) nfs.push_back(protocol::fr_to_hex(nf));
    Json counts = Json::object();
    for (std::uint8_t i = 0; i < 6; ++i) {
      const auto o = static_cast<AuthOutcome>(i);
      counts[std::string(protocol::outcome_name(o))] = authority_.outcome_count(o);
    }
    return Json{{"ok", true},
                {"root", protocol::fr_to_hex(s.root)},
                {"next_index", s.next_index},
                {"epoch_id", s.epoch.epoch_id},
                {"nu", protocol::fr_to_hex(s.epoch.nu)},
                {"nullifiers", nfs},
                {"counts", counts}};
  }
  if (op == "rotate") {
    if (!options_.allow_rotate_op) return protocol::error_response("Forbidden", "rotate op is disabled");
    return epoch_json(authority_.rotate_epoch());
  }
  return protocol::error_response("UnknownOp", op);
}

Bytes RequestHandler::handle(std::span<const std::uint8_t> request) {
  Json resp;
  try {
    if (protocol::is_compact_auth(request)) {
      protocol::AuthRequest a;
      try {
        a = protocol::decode_compact_auth(request);
      } catch (const DecodeError& e) {
        return protocol::dump(protocol::error_response("Malformed", e.what()));
      }
      resp = auth(a);
    } else {
      resp = dispatch(protocol::parse(request));
    }
  } catch (const DecodeError& e) {
    resp = protocol::error_response("Malformed", e.what());
  } catch (const NotFoundError& e) {
    resp = protocol::error_response("NotFound", e.what());
  } catch (const CapacityError& e) {
    resp = protocol::error_response("Capacity", e.what());
  } catch (const ArgumentError& e) {
    resp = protocol::error_response("BadRequest", e.what());
  } catch (const std::exception& e) {
    resp = protocol::error_response("Internal", e.what());
  }
  return protocol::dump(resp);
}

struct TcpServer::Impl {
  asio::io_context io;
  tcp::acceptor acceptor{io};
  std::thread accept_thread;
  std::mutex mu;
  std::map<std::uint64_t, std::shared_ptr<tcp::socket>> live;
  std::map<std::uint64_t, std::thread> workers;
  std::vector<std::uint64_t> finished;
  std::uint64_t next_id = 0;
  std::atomic<bool> stopping{false};

  void reap() {
    std::vector<std::thread> done;
    {
      std::lock_guard lock(mu);
      for (std::uint64_t id : finished) {
        done.push_back(std::move(workers.at(id)));
        workers.erase(id);
      }
      finished.clear();
    }
    for (auto& t : done) t.join();
  }
};

TcpServer::TcpServer(RequestHandler& handler, const net::Endpoint& listen)
    : handler_(handler), impl_(std::make_unique<Impl>()) {
  tcp::resolver resolver(impl_->io);
  const tcp::endpoint ep = *resolver.resolve(listen.host, std::to_string(listen.port)).begin();
  impl_->acceptor.open(ep.protocol());
  impl_->acceptor.set_option(tcp::acceptor::reuse_address(true));
  impl_->acceptor.bind(ep);
  impl_->acceptor.listen();
  port_ = impl_->acceptor.local_endpoint().port();
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::start() {
  Impl& im = *impl_;
  im.accept_thread = std::thread([this, &im] {
    while (!im.stopping) {
      auto socket = std::make_shared<tcp::socket>(im.io);
      boost::system::error_code ec;
      im.acceptor.accept(*socket, ec);
      if (ec) {
        if (im.stopping) break;
        continue;
      }
      im.reap();
      std::lock_guard lock(im.mu);
      const std::uint64_t id = im.next_id++;
      im.live[id] = socket;
      im.workers[id] = std::thread([this, &im, socket, id] {
        try {
          for (;;) {
            const Bytes req = net::read_message(*socket);
            net::write_message(*socket, handler_.handle(req));
          }
        } catch (const std::exception&) {
          // Peer closed, I/O error or oversized frame: drop the connection.
        }
        boost::system::error_code ignored;
        socket->close(ignored);
        std::lock_guard inner(im.mu);
        im.live.erase(id);
        im.finished.push_back(id);
      });
    }
  });
}

void TcpServer::stop() {
  Impl& im = *impl_;
  if (im.stopping.exchange(true)) return;
  ::shutdown(im.acceptor.native_handle(), SHUT_RDWR);
  if (im.accept_thread.joinable()) im.accept_thread.join();
  boost::system::error_code ignored;
  im.acceptor.close(ignored);
  {
    std::lock_guard lock(im.mu);
    for (auto& [id, s] : im.live) ::shutdown(s->native_handle(), SHUT_RDWR);
  }
  std::map<std::uint64_t, std::thread> workers;
  {
    std::lock_guard lock(im.mu);
    workers.swap(im.workers);
  }
  for (auto& [id, t] : workers) t.join();
}

EpochTicker::EpochTicker(Authority& authority, std::chrono::milliseconds period) : authority_(authority) {
  thread_ = std::thread([this, period] {
    std::unique_lock lock(mu_);
    while (!cv_.wait_for(lock, period, [this] { return stop_; })) authority_.rotate_if_due(unix_millis());
  });
}

EpochTicker::~EpochTicker() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  thread_.join();
}

}  // namespace zkpark
