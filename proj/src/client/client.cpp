#include "zkpark/client/client.hpp"

#include <fstream>
#include <map>
#include <mutex>

#include "zkpark/circuit/membership.hpp"
#include "zkpark/error.hpp"

namespace zkpark::client {

namespace {

using protocol::fr_from_hex;
using protocol::fr_to_hex;

[[noreturn]] void raise_reason(const std::string& reason, const std::string& detail) {
  const std::string what = reason + (detail.empty() ? "" : ": " + detail);
  if (reason == "TransportError") throw ConnectError(what);
  if (reason == "NotFound") throw NotFoundError(what);
  if (reason == "Capacity") throw CapacityError(what);
  if (reason == "BadRequest") throw ArgumentError(what);
  throw DecodeError("server refused request: " + what);
}

}  // namespace

Json ClientState::to_json() const {
  Json j{{"uid", to_base64(uid)}, {"epoch_id", epoch_id}, {"full_sync", full_sync}};
  if (leaf_index) j["leaf_index"] = *leaf_index;
  if (path) j["path"] = protocol::path_to_json(*path);
  if (root) j["root"] = fr_to_hex(*root);
  if (nu) j["nu"] = fr_to_hex(*nu);
  return j;
}

ClientState ClientState::from_json(const Json& j) {
  ClientState s;
  s.uid = from_base64(protocol::get_string(j, "uid"));
  s.epoch_id = protocol::get_u64(j, "epoch_id");
  if (!j.contains("full_sync") || !j.at("full_sync").is_boolean()) throw DecodeError("full_sync must be a boolean");
  s.full_sync = j.at("full_sync").get<bool>();
  if (j.contains("leaf_index")) s.leaf_index = protocol::get_u64(j, "leaf_index");
  if (j.contains("path")) s.path = protocol::path_from_json(j.at("path"));
  if (j.contains("root")) s.root = fr_from_hex(protocol::get_string(j, "root"));
  if (j.contains("nu")) s.nu = fr_from_hex(protocol::get_string(j, "nu"));
  return s;
}

std::shared_ptr<const CircuitKeys> keys_for(const ServerParams& params) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, Bytes>, std::shared_ptr<const CircuitKeys>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{params.depth, params.srs_seed}];
  if (!slot) slot = std::make_shared<const CircuitKeys>(membership_keys(params.depth, params.srs_seed));
  if (to_hex(slot->vk.digest()) != params.vk_digest) {
    throw ConfigError("keys rebuilt from the server's params do not match its verifying key");
  }
  return slot;
}

Client::Client(std::filesystem::path keyfile, net::Transport& server, Options options, net::Transport* auth_channel)
    : keyfile_(std::move(keyfile)), server_(server), auth_channel_(auth_channel), options_(options) {
  const auto file = state_file(keyfile_);
  if (std::filesystem::exists(file)) {
    std::ifstream in(file);
    const Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DecodeError("state file " + file.string() + " is not JSON");
    state_ = ClientState::from_json(j);
    if (state_.path && state_.root && !verify_path(own_commitment(), *state_.path, *state_.root)) {
      throw DecodeError("cached path does not verify against cached root");
    }
  }
  if (state_.full_sync != options_.full_sync) mirror_.reset();
  state_.full_sync = options_.full_sync;
}

std::filesystem::path Client::state_file(const std::filesystem::path& keyfile) {
  return keyfile.string() + ".state.json";
}

std::filesystem::path Client::mirror_file(const std::filesystem::path& keyfile) {
  return keyfile.string() + ".leaves";
}

void Client::keygen(const std::filesystem::path& keyfile) {
  if (std::filesystem::exists(keyfile)) throw ArgumentError("keyfile " + keyfile.string() + " already exists");
  write_keyfile(keyfile, IdentitySecret::generate());
}

Json Client::call(const Json& request) {
  const Json resp = protocol::parse(server_.exchange(protocol::dump(request)));
  if (!resp.contains("ok") || !resp.at("ok").is_boolean()) throw DecodeError("reply lacks ok");
  if (!resp.at("ok").get<bool>()) {
    raise_reason(resp.value("reason", std::string("unknown")), resp.value("detail", std::string()));
  }
  return resp;
}

void Client::save() const {
  const auto file = state_file(keyfile_);
  const auto tmp = file.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << state_.to_json().dump(2) << '\n';
    if (!out) throw IoError("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, file);
}

Fr Client::own_commitment() const { return commitment(read_keyfile(keyfile_), state_.uid); }

const ServerParams& Client::params() {
  if (!params_) {
    const Json j = call({{"op", "params"}});
    ServerParams p;
    p.depth = static_cast<unsigned>(protocol::get_u64(j, "depth"));
    p.srs_seed = from_hex(protocol::get_string(j, "srs_seed"));
    p.vk_digest = protocol::get_string(j, "vk_digest");
    params_ = std::move(p);
  }
  return *params_;
}

std::uint64_t Client::register_identity(std::span<const std::uint8_t> uid, bool generate) {
  if (!std::filesystem::exists(keyfile_)) {
    if (!generate) throw ArgumentError("keyfile " + keyfile_.string() + " missing; pass --generate to create it");
    keygen(keyfile_);
  }
  const Fr c = commitment(read_keyfile(keyfile_), uid);
  const Json j = call({{"op", "register"}, {"uid", to_base64(uid)}, {"commitment", fr_to_hex(c)}});
  const std::uint64_t index = protocol::get_u64(j, "leaf_index");
  const MerklePath path = protocol::path_from_json(j.at("path"));
  const Fr root = fr_from_hex(protocol::get_string(j, "root"));
  if (path.index != index || !verify_path(c, path, root)) throw DecodeError("registration receipt does not verify");

  ClientState next;
  next.uid.assign(uid.begin(), uid.end());
  next.leaf_index = index;
  next.path = path;
  next.root = root;
  next.full_sync = options_.full_sync;
  state_ = std::move(next);
  save();
  return index;
}

ClientState Client::sync_light() {
  ClientState next = state_;
  const Json j = call({{"op", "state"}, {"leaf_index", *state_.leaf_index}});
  next.path = protocol::path_from_json(j.at("path"));
  next.root = fr_from_hex(protocol::get_string(j, "root"));
  next.nu = fr_from_hex(protocol::get_string(j, "nu"));
  next.epoch_id = protocol::get_u64(j, "epoch_id");
  if (next.path->index != *state_.leaf_index || !verify_path(own_commitment(), *next.path, *next.root)) {
    throw DecodeError("state reply does not verify");
  }
  return next;
}

ClientState Client::sync_full() {
  const unsigned depth = params().depth;
  const auto mirror = mirror_file(keyfile_);
  if (!mirror_) mirror_ = std::make_unique<IncrementalMerkleTree>(LeafLog::replay(mirror, depth));
  IncrementalMerkleTree tree = *mirror_;
  std::vector<Fr> fresh;
  Fr server_root;
  for (;;) {
    const Json j = call({{"op", "leaves"}, {"from", tree.next_index()}});
    const Json& leaves = j.at("leaves");
    if (!leaves.is_array()) throw DecodeError("leaves must be an array");
    for (const Json& l : leaves) {
      if (!l.is_string()) throw DecodeError("leaf must be a hex string");
      fresh.push_back(fr_from_hex(l.get<std::string>()));
      tree.insert(fresh.back());
    }
    const std::uint64_t next_index = protocol::get_u64(j, "next_index");
    if (tree.next_index() > next_index) throw DecodeError("server leaf count went backwards");
    if (tree.next_index() == next_index) {
      server_root = fr_from_hex(protocol::get_string(j, "root"));
      break;
    }
    if (leaves.empty()) throw DecodeError("server returned no leaves before next_index");
  }
  if (tree.root() != server_root) {
    // Our copy no longer matches; start over from scratch next time.
    mirror_.reset();
    std::filesystem::remove(mirror);
    throw DecodeError("leaf mirror diverged from the server");
  }
  const std::uint64_t index = *state_.leaf_index;
  if (index >= tree.next_index() || tree.leaves()[index] != own_commitment()) {
    throw NotFoundError("leaf " + std::to_string(index) + " is not ours on the server");
  }
  const Json e = call({{"op", "epoch"}});

  LeafLog log(mirror);
  for (const Fr& l : fresh) log.append(l);
  *mirror_ = tree;

  ClientState next = state_;
  next.path = tree.path(index);
  next.root = tree.root();
  next.nu = fr_from_hex(protocol::get_string(e, "nu"));
  next.epoch_id = protocol::get_u64(e, "epoch_id");
  return next;
}

const ClientState& Client::sync() {
  if (!state_.leaf_index) throw NotFoundError("not registered yet");
  ClientState next = options_.full_sync ? sync_full() : sync_light();
  next.full_sync = options_.full_sync;
  state_ = std::move(next);
  save();
  return state_;
}

AuthOutcome Client::send_auth(const protocol::AuthRequest& req) {
  net::Transport& channel = auth_channel_ ? *auth_channel_ : server_;
  const Bytes message = options_.compact_auth ? protocol::encode_compact_auth(req) : protocol::dump(protocol::auth_to_json(req));
  const Json resp = protocol::parse(channel.exchange(message));
  if (!resp.contains("ok") || !resp.at("ok").is_boolean()) throw DecodeError("auth reply lacks ok");
  if (resp.at("ok").get<bool>()) return AuthOutcome::kAccept;
  const std::string reason = resp.value("reason", std::string());
  if (const auto o = protocol::outcome_from_name(reason)) return *o;
  raise_reason(reason, resp.value("detail", std::string()));
}

ParkResult Client::park() {
  if (!state_.leaf_index) throw NotFoundError("not registered yet");
  const auto keys = keys_for(params());
  const IdentitySecret secret = read_keyfile(keyfile_);
  ParkResult result;
  for (unsigned attempt = 1; attempt <= 2; ++attempt) {
    // Full-sync mode refreshes from the leaf log and epoch op on every park;
    // light mode proves from the cache and only re-queries on a stale nu.
    if (options_.full_sync || !state_.nu || !state_.path) sync();
    auto [w, x] = assign_witness(keys->cs, secret, state_.uid, *state_.path, *state_.nu);
    const auto proof = prove(keys->pk, x, w).serialize();
    result.attempts = attempt;
    result.epoch_id = state_.epoch_id;
    result.nf = x.nf;
    result.outcome = send_auth({x, Bytes(proof.begin(), proof.end())});
    if (result.outcome != AuthOutcome::kStaleNullifier || attempt == 2) break;
    if (!options_.full_sync) sync();
  }
  return result;
}

}  // namespace zkpark::client
