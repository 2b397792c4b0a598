// zkpark: vehicle-side CLI. Exit codes: 0 success or Accept, 2 Reject,
// 3 transport error, 1 anything else.

#include <CLI11.hpp>
#include <iostream>

#include "zkpark/bench/report.hpp"
#include "zkpark/client/client.hpp"
#include "zkpark/error.hpp"
#include "zkpark/identity/identity.hpp"
#include "zkpark/relay/relay.hpp"

namespace {

using namespace zkpark;
using client::Client;
using protocol::Json;

constexpr int kExitReject = 2;
constexpr int kExitTransport = 3;

struct Cli {
  std::string server = "127.0.0.1:7700";
  std::string keyfile = "zkpark.key";
  bool json = false;
  bool full_sync = false;
  std::string via_relay;
  unsigned relay_attempts = 5;
  std::string uid;
  bool generate = false;
  bench::BenchOptions bench;
  std::string bench_out = "bench.csv";
};

void emit(const Cli& cli, const Json& j, const std::string& text) {
  if (cli.json) {
    std::cout << j.dump() << '\n';
  } else {
    std::cout << text << '\n';
  }
}

int run(const std::string& command, const Cli& cli) {
  if (command == "keygen") {
    Client::keygen(cli.keyfile);
    emit(cli, {{"ok", true}, {"keyfile", cli.keyfile}}, "wrote " + cli.keyfile);
    return 0;
  }
  if (command == "bench") {
    const auto rows = bench::run_bench(cli.bench);
    bench::write_csv(cli.bench_out, rows);
    Json out = Json::array();
    for (const auto& r : rows) {
      out.push_back({{"phase", r.phase}, {"depth", r.depth}, {"median_ms", r.median_ms},
                     {"proof_bytes", r.proof_bytes}, {"n_gates", r.n_gates}});
    }
    if (cli.json) {
      std::cout << Json{{"ok", true}, {"rows", out}, {"csv", cli.bench_out}}.dump() << '\n';
    } else {
      bench::write_csv(std::cout, rows);
    }
    return 0;
  }

  net::TcpTransport server(net::Endpoint::parse(cli.server));
  std::unique_ptr<relay::RelayTransport> relay;
  if (!cli.via_relay.empty()) {
    relay::RelayTransport::Options o;
    o.attempts = cli.relay_attempts;
    relay = std::make_unique<relay::RelayTransport>(net::Endpoint::parse(cli.via_relay), o);
  }
  Client client(cli.keyfile, server, {cli.full_sync, relay != nullptr}, relay.get());

  if (command == "params-dump") {
    const auto& p = client.params();
    emit(cli, {{"ok", true}, {"depth", p.depth}, {"srs_seed", to_hex(p.srs_seed)}, {"vk_digest", p.vk_digest}},
         "depth " + std::to_string(p.depth) + ", vk digest " + p.vk_digest);
    return 0;
  }
  if (command == "register") {
    if (cli.uid.empty()) throw ArgumentError("--uid is required");
    const std::uint64_t index = client.register_identity(as_bytes(cli.uid), cli.generate);
    emit(cli, {{"ok", true}, {"leaf_index", index}, {"root", protocol::fr_to_hex(*client.state().root)}},
         "registered as leaf " + std::to_string(index));
    return 0;
  }
  if (command == "sync") {
    const auto& s = client.sync();
    emit(cli,
         {{"ok", true}, {"leaf_index", *s.leaf_index}, {"root", protocol::fr_to_hex(*s.root)},
          {"epoch_id", s.epoch_id}, {"full_sync", s.full_sync}},
         "synced leaf " + std::to_string(*s.leaf_index) + " in epoch " + std::to_string(s.epoch_id));
    return 0;
  }
  if (command == "park") {
    const client::ParkResult r = client.park();
    const bool accepted = r.outcome == protocol::AuthOutcome::kAccept;
    Json j{{"ok", accepted}, {"attempts", r.attempts}, {"epoch_id", r.epoch_id}};
    if (accepted) {
      j["result"] = "Accept";
    } else {
      j["reason"] = protocol::outcome_name(r.outcome);
    }
    emit(cli, j, accepted ? "Accept" : "Reject(" + std::string(protocol::outcome_name(r.outcome)) + ")");
    return accepted ? 0 : kExitReject;
  }
  throw ArgumentError("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
  Cli cli;
  CLI::App app{"zkpark vehicle client"};
  app.require_subcommand(1);
  app.add_option("--server", cli.server, "Server host:port")->capture_default_str();
  app.add_option("--keyfile", cli.keyfile, "Secret key file; state lives next to it")->capture_default_str();
  app.add_flag("--json", cli.json, "Machine-readable output");

  app.add_subcommand("keygen", "Create a new secret key file");
  auto* reg = app.add_subcommand("register", "Register a commitment for --uid");
  reg->add_option("--uid", cli.uid, "Identity string (1 to 64 bytes)")->required();
  reg->add_flag("--generate", cli.generate, "Create the keyfile if it does not exist");
  reg->add_flag("--full-sync", cli.full_sync, "Keep a local mirror of the leaf log");
  auto* sync = app.add_subcommand("sync", "Refresh path, root and nu");
  sync->add_flag("--full-sync", cli.full_sync, "Tail the leaf log and compute the path locally");
  auto* park = app.add_subcommand("park", "Prove membership and request parking");
  park->add_flag("--full-sync", cli.full_sync, "Refresh from the leaf log instead of a state query");
  park->add_option("--via-relay", cli.via_relay, "Send the auth message through a relay at host:port");
  park->add_option("--relay-attempts", cli.relay_attempts, "Whole-message retransmissions via the relay")
      ->capture_default_str();
  auto* bench = app.add_subcommand("bench", "Time setup, preprocess, prove and verify; write CSV");
  bench->add_option("--depth", cli.bench.depth, "Merkle tree depth")->capture_default_str();
  bench->add_option("--iters", cli.bench.iters, "Timed iterations (at least 3)")->capture_default_str();
  bench->add_option("--out", cli.bench_out, "CSV output path")->capture_default_str();
  app.add_subcommand("params-dump", "Show the server's public parameters");
  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  const auto fail = [&](int code, const std::string& kind, const std::string& what) {
    if (cli.json) {
      std::cout << Json{{"ok", false}, {"error", kind}, {"detail", what}}.dump() << '\n';
    } else {
      std::cerr << "zkpark " << command << ": " << what << '\n';
    }
    return code;
  };
  try {
    return run(command, cli);
  } catch (const ConnectError& e) {
    return fail(kExitTransport, "ConnectError", e.what());
  } catch (const ReassemblyTimeout& e) {
    return fail(kExitTransport, "ReassemblyTimeout", e.what());
  } catch (const std::exception& e) {
    return fail(1, "Error", e.what());
  }
}
