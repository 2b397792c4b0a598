#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <fstream>

#include "zkpark/client/client.hpp"
#include "zkpark/error.hpp"
#include "zkpark/identity/identity.hpp"
#include "zkpark/relay/relay.hpp"
#include "zkpark/server/server.hpp"

namespace zkpark::client {
namespace {

constexpr unsigned kDepth = 2;
constexpr std::string_view kSeed = "client-test";

const CircuitKeys& server_keys() {
  static const CircuitKeys k = membership_keys(kDepth, as_bytes(kSeed));
  return k;
}

struct TestServer {
  explicit TestServer(unsigned depth = kDepth)
      : authority(config(depth), depth == kDepth ? server_keys().vk : VerifyingKey{}),
        handler(authority, {std::string(kSeed), true}),
        tcp(handler, {"127.0.0.1", 0}),
        transport(net::Endpoint{"127.0.0.1", tcp.port()}) {
    tcp.start();
  }
  static AuthorityConfig config(unsigned depth) {
    AuthorityConfig c;
    c.depth = depth;
    return c;
  }
  net::Endpoint endpoint() const { return {"127.0.0.1", tcp.port()}; }

  Authority authority;
  RequestHandler handler;
  TcpServer tcp;
  net::TcpTransport transport;
};

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> n{0};
    path_ = std::filesystem::temp_directory_path() /
            ("zkpark-client-test-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Replies with fixed bytes; counts calls.
class CannedTransport final : public net::Transport {
 public:
  explicit CannedTransport(Bytes reply) : reply_(std::move(reply)) {}
  Bytes exchange(std::span<const std::uint8_t>) override {
    ++calls;
    return reply_;
  }
  int calls = 0;

 private:
  Bytes reply_;
};

class DeadTransport final : public net::Transport {
 public:
  Bytes exchange(std::span<const std::uint8_t>) override { throw ConnectError("down"); }
};

Bytes as_bytes_copy(std::string_view s) {
  const auto b = as_bytes(s);
  return Bytes(b.begin(), b.end());
}

const Bytes kUid = {'C', 'A', 'R', '-', '1'};

std::vector<std::string> ops(const std::vector<net::RecordingTransport::Exchange>& log) {
  std::vector<std::string> out;
  for (const auto& e : log) {
    if (protocol::is_compact_auth(e.request)) {
      out.push_back("auth");
    } else {
      out.push_back(protocol::parse(e.request).at("op").get<std::string>());
    }
  }
  return out;
}

TEST(Register, FreshRegistrationCachesVerifyingPath) {
  TestServer srv;
  TempDir dir;
  Client c(dir / "key", srv.transport, {});
  EXPECT_EQ(c.register_identity(kUid, true), 0U);
  const ClientState& s = c.state();
  ASSERT_TRUE(s.path && s.root);
  EXPECT_TRUE(verify_path(commitment(read_keyfile(dir / "key"), kUid), *s.path, *s.root));
  EXPECT_EQ(c.register_identity(kUid), 1U);  // same uid, new leaf
  EXPECT_TRUE(std::filesystem::exists(Client::state_file(dir / "key")));
}

TEST(Register, NeedsKeyfileOrGenerate) {
  TestServer srv;
  TempDir dir;
  Client c(dir / "key", srv.transport, {});
  EXPECT_THROW(c.register_identity(kUid), ArgumentError);
  Client::keygen(dir / "key");
  EXPECT_THROW(Client::keygen(dir / "key"), ArgumentError);
  EXPECT_EQ(c.register_identity(kUid), 0U);
}

TEST(Register, MalformedReplyLeavesStateUnchanged) {
  TestServer srv;
  TempDir dir;
  {
    Client c(dir / "key", srv.transport, {});
    c.register_identity(kUid, true);
  }
  const auto before = Client::state_file(dir / "key");
  std::ifstream in(before);
  const std::string saved((std::istreambuf_iterator<char>(in)), {});

  const Json bogus = {{"ok", true},
                      {"leaf_index", 3},
                      {"path", protocol::path_to_json(MerklePath{{Fr::one(), Fr::one()}, 3})},
                      {"root", protocol::fr_to_hex(Fr::from_u64(9))}};
  for (const Bytes& reply : {protocol::dump(bogus), as_bytes_copy("{not json"), protocol::dump(Json{{"ok", true}})}) {
    CannedTransport canned(reply);
    Client c(dir / "key", canned, {});
    EXPECT_THROW(c.register_identity(Bytes{'X'}), DecodeError);
    EXPECT_EQ(c.state().leaf_index, 0U);
  }
  std::ifstream again(before);
  EXPECT_EQ(std::string((std::istreambuf_iterator<char>(again)), {}), saved);
}

TEST(Sync, LightSyncVerifiesAndFailureKeepsCache) {
  TestServer srv;
  TempDir dir;
  Client c(dir / "key", srv.transport, {});
  c.register_identity(kUid, true);
  srv.authority.register_identity(Bytes{'o'}, Fr::from_u64(5));
  const ClientState& s = c.sync();
  EXPECT_TRUE(verify_path(commitment(read_keyfile(dir / "key"), kUid), *s.path, *s.root));
  EXPECT_EQ(*s.root, srv.authority.summary().root);
  EXPECT_EQ(*s.nu, srv.authority.current_epoch().nu);

  DeadTransport dead;
  Client offline(dir / "key", dead, {});
  const Json cached = offline.state().to_json();
  EXPECT_THROW(offline.sync(), ConnectError);
  EXPECT_EQ(offline.state().to_json(), cached);
}

TEST(Sync, FullSyncRootMatchesServerQuery) {
  TestServer srv(6);
  TempDir dir;
  for (int i = 0; i < 5; ++i) srv.authority.register_identity(Bytes{'o'}, Fr::from_u64(i + 1));
  Client c(dir / "key", srv.transport, {true, false});
  const std::uint64_t index = c.register_identity(kUid, true);
  for (int i = 0; i < 7; ++i) srv.authority.register_identity(Bytes{'o'}, Fr::from_u64(i + 100));
  const ClientState& s = c.sync();
  const StateSnapshot server_view = srv.authority.query_state(index);
  EXPECT_EQ(*s.root, server_view.root);
  EXPECT_EQ(*s.path, server_view.path);
  EXPECT_EQ(LeafLog::read_all(Client::mirror_file(dir / "key")).size(), 13U);

  // Incremental: a second client instance resumes from the mirror.
  srv.authority.register_identity(Bytes{'o'}, Fr::from_u64(999));
  net::RecordingTransport rec(srv.transport);
  Client again(dir / "key", rec, {true, false});
  again.sync();
  EXPECT_EQ(*again.state().root, srv.authority.summary().root);
  const auto log = rec.log();
  const auto leaves_req = std::find_if(log.begin(), log.end(), [](const auto& e) {
    return protocol::parse(e.request).at("op") == "leaves";
  });
  ASSERT_NE(leaves_req, log.end());
  EXPECT_EQ(protocol::parse(leaves_req->request).at("from"), 13);
}

TEST(Sync, LostLeafIsNotFound) {
  TempDir dir;
  {
    TestServer srv;
    Client c(dir / "key", srv.transport, {});
    c.register_identity(kUid, true);
  }
  TestServer fresh;  // no memory of the earlier registration
  Client light(dir / "key", fresh.transport, {});
  EXPECT_THROW(light.sync(), NotFoundError);
  Client full(dir / "key", fresh.transport, {true, false});
  EXPECT_THROW(full.sync(), NotFoundError);
}

TEST(Park, HappyReplayAndRotation) {
  TestServer srv;
  TempDir dir;
  Client c(dir / "key", srv.transport, {});
  c.register_identity(kUid, true);
  c.sync();
  const ParkResult first = c.park();
  EXPECT_EQ(first.outcome, AuthOutcome::kAccept);
  EXPECT_EQ(first.attempts, 1U);
  const ParkResult second = c.park();
  EXPECT_EQ(second.outcome, AuthOutcome::kNullifierSeen);
  EXPECT_EQ(second.nf, first.nf);

  srv.authority.rotate_epoch();
  net::RecordingTransport rec(srv.transport);
  Client stale(dir / "key", rec, {});
  const ParkResult third = stale.park();
  EXPECT_EQ(third.outcome, AuthOutcome::kAccept);
  EXPECT_EQ(third.attempts, 2U);
  EXPECT_NE(third.nf, first.nf);
  EXPECT_EQ(ops(rec.log()), (std::vector<std::string>{"params", "auth", "state", "auth"}));
}

TEST(Park, SecretKeyNeverOnTheWire) {
  TestServer srv;
  TempDir dir;
  net::RecordingTransport rec(srv.transport);
  for (const bool full : {false, true}) {
    const auto key = dir / (full ? "full" : "light");
    Client c(key, rec, {full, full});
    c.register_identity(kUid, true);
    c.sync();
    EXPECT_EQ(c.park().outcome, AuthOutcome::kAccept);
  }
  for (const char* name : {"full", "light"}) {
    const Fr sk = read_keyfile(dir / name).sk();
    const auto le = sk.to_bytes();
    const Bytes be(le.rbegin(), le.rend());
    const std::vector<std::string> needles = {to_hex(le), to_hex(be), to_base64(le), std::string(le.begin(), le.end())};
    for (const auto& e : rec.log()) {
      const std::string wire(e.request.begin(), e.request.end());
      for (const auto& n : needles) EXPECT_EQ(wire.find(n), std::string::npos);
    }
  }
}

TEST(Park, FullSyncSendsNoStateQuery) {
  TestServer srv;
  TempDir dir;
  net::RecordingTransport rec(srv.transport);
  Client c(dir / "key", rec, {true, false});
  c.register_identity(kUid, true);
  c.sync();
  rec.clear();
  EXPECT_EQ(c.park().outcome, AuthOutcome::kAccept);
  const auto calls = ops(rec.log());
  EXPECT_EQ(std::count(calls.begin(), calls.end(), "state"), 0);
  EXPECT_EQ(calls.back(), "auth");
}

TEST(Park, ThroughLossyRelay) {
  TestServer srv;
  TempDir dir;
  relay::RelayConfig rc{{"127.0.0.1", 0}, srv.endpoint()};
  rc.loss_rate = 0.3;
  rc.seed = 7;
  relay::Relay rsu(rc);
  rsu.start();
  relay::RelayTransport::Options ro;
  ro.seed = 3;
  ro.attempt_timeout = std::chrono::milliseconds(1000);
  relay::RelayTransport via({"127.0.0.1", rsu.port()}, ro);
  net::RecordingTransport rec(via);
  Client c(dir / "key", srv.transport, {false, true}, &rec);
  c.register_identity(kUid, true);
  c.sync();
  EXPECT_EQ(c.park().outcome, AuthOutcome::kAccept);
  EXPECT_LE(via.last_attempts(), 5U);
  ASSERT_EQ(rec.log().size(), 1U);
  EXPECT_EQ(relay::frame_count(rec.log()[0].request.size()), 4U);
}

TEST(Transport, RetriesThenConnectError) {
  std::uint16_t port = 0;
  {
    TestServer srv;
    port = srv.tcp.port();
  }
  net::TcpTransport t({"127.0.0.1", port}, {3, std::chrono::milliseconds(20), std::chrono::milliseconds(500)});
  const auto t0 = std::chrono::steady_clock::now();
  EXPECT_THROW(t.exchange(Bytes{1}), ConnectError);
  EXPECT_GE(std::chrono::steady_clock::now() - t0, std::chrono::milliseconds(60));
}

TEST(State, JsonRoundTripAndTamperDetection) {
  TestServer srv;
  TempDir dir;
  {
    Client c(dir / "key", srv.transport, {});
    c.register_identity(kUid, true);
    c.sync();
    EXPECT_EQ(ClientState::from_json(c.state().to_json()).to_json(), c.state().to_json());
  }
  Json j = Json::parse(std::ifstream(Client::state_file(dir / "key")));
  j["root"] = protocol::fr_to_hex(Fr::from_u64(1));
  std::ofstream(Client::state_file(dir / "key")) << j.dump();
  EXPECT_THROW(Client(dir / "key", srv.transport, {}), DecodeError);
}

}  // namespace
}  // namespace zkpark::client
