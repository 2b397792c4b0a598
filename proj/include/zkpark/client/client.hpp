#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>

#include "zkpark/net/transport.hpp"
#include "zkpark/protocol/messages.hpp"
#include "zkpark/prover/setup.hpp"

namespace zkpark::client {

using protocol::AuthOutcome;
using protocol::Json;

// Cached per keyfile in <keyfile>.state.json. Whenever path and root are both
// set, the path verifies the identity's commitment against the root.
struct ClientState {
  Bytes uid;
  std::optional<std::uint64_t> leaf_index;
  std::optional<MerklePath> path;
  std::optional<Fr> root;
  std::optional<Fr> nu;
  std::uint64_t epoch_id = 0;
  bool full_sync = false;

  Json to_json() const;
  // DecodeError on missing or badly encoded fields.
  static ClientState from_json(const Json& j);
};

struct ServerParams {
  unsigned depth = 0;
  Bytes srs_seed;
  std::string vk_digest;  // hex
};

struct ParkResult {
  AuthOutcome outcome = AuthOutcome::kMalformed;
  unsigned attempts = 0;  // 2 when a stale nu forced one re-sync
  std::uint64_t epoch_id = 0;
  Fr nf;
};

// Keys are rebuilt from the server's public params and cached per process;
// ConfigError if the result does not match the server's vk digest.
std::shared_ptr<const CircuitKeys> keys_for(const ServerParams& params);

class Client {
 public:
  struct Options {
    // Tail the server's leaf log and compute paths locally, so parking is
    // never preceded by a query naming the leaf.
    bool full_sync = false;
    // Send auth in the compact binary form (fits four relay frames).
    bool compact_auth = false;
  };

  // auth_channel, when given, carries only the auth message (e.g. a relay);
  // everything else goes to server. Loads cached state if present.
  Client(std::filesystem::path keyfile, net::Transport& server, Options options,
         net::Transport* auth_channel = nullptr);

  static std::filesystem::path state_file(const std::filesystem::path& keyfile);
  static std::filesystem::path mirror_file(const std::filesystem::path& keyfile);
  // ArgumentError if the keyfile exists.
  static void keygen(const std::filesystem::path& keyfile);

  // Creates the keyfile first when generate is set and none exists. Only the
  // commitment leaves the device. DecodeError on a reply that does not
  // check out; cached state is then untouched.
  std::uint64_t register_identity(std::span<const std::uint8_t> uid, bool generate = false);
  // Light mode: state query. Full-sync mode: tail leaves, rebuild the path
  // locally, pull nu from the epoch op. NotFoundError if the server no
  // longer has our leaf. State is saved only after every check passes.
  const ClientState& sync();
  // Proves with the cached state and sends auth. A StaleNullifier reply
  // triggers one re-sync and retry; other rejections come back as is.
  ParkResult park();

  const ClientState& state() const { return state_; }
  const ServerParams& params();

 private:
  Json call(const Json& request);
  void save() const;
  Fr own_commitment() const;
  ClientState sync_light();
  ClientState sync_full();
  AuthOutcome send_auth(const protocol::AuthRequest& req);

  std::filesystem::path keyfile_;
  net::Transport& server_;
  net::Transport* auth_channel_;
  Options options_;
  ClientState state_;
  std::optional<ServerParams> params_;
  std::unique_ptr<IncrementalMerkleTree> mirror_;
};

}  // namespace zkpark::client
