// zkpark-server: registration, epoch rotation and parking authentication
// over length-prefixed JSON on TCP.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <csignal>
#include <optional>

#include "zkpark/error.hpp"
#include "zkpark/prover/setup.hpp"
#include "zkpark/server/server.hpp"

int main(int argc, char** argv) {
  using namespace zkpark;
  CLI::App app{"zkpark authority server"};
  std::optional<std::string> config_file, listen, data_dir, srs_seed;
  std::optional<unsigned> depth, epoch_seconds;
  bool allow_rotate = false;
  app.add_option("--config", config_file, "JSON config file");
  app.add_option("--listen", listen, "host:port to listen on");
  app.add_option("--depth", depth, "Merkle tree depth");
  app.add_option("--epoch-seconds", epoch_seconds, "Epoch duration");
  app.add_option("--data-dir", data_dir, "Directory holding state.log");
  app.add_option("--srs-seed", srs_seed, "Public seed of the demo SRS");
  app.add_flag("--allow-rotate", allow_rotate, "Accept the rotate op (demos and tests)");
  CLI11_PARSE(app, argc, argv);

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  try {
    ServerConfig config =
        ServerConfig::load(config_file ? std::optional<std::filesystem::path>(*config_file) : std::nullopt);
    if (listen) config.listen = net::Endpoint::parse(*listen);
    if (depth) config.depth = *depth;
    if (epoch_seconds) config.epoch_duration = std::chrono::seconds(*epoch_seconds);
    if (data_dir) config.data_dir = *data_dir;
    if (srs_seed) config.srs_seed = *srs_seed;
    config.allow_rotate_op = config.allow_rotate_op || allow_rotate;

    spdlog::info("building keys for depth {}", config.depth);
    spdlog::warn("SRS: {}", Srs::kUnsafeMarker);
    CircuitKeys keys = membership_keys(config.depth, as_bytes(config.srs_seed));
    spdlog::info("circuit has {} gates, vk digest {}", keys.cs.used_gates(), to_hex(keys.vk.digest()).substr(0, 16));

    Authority authority(config.authority(), std::move(keys.vk));
    const AuthoritySummary s = authority.summary();
    spdlog::info("state: {} leaves, epoch {}, {} nullifiers in current epoch", s.next_index, s.epoch.epoch_id,
                 s.current_nullifiers.size());

    RequestHandler handler(authority, {config.srs_seed, config.allow_rotate_op});
    TcpServer server(handler, config.listen);
    EpochTicker ticker(authority, std::chrono::seconds(1));
    server.start();
    // The READY line is what scripts wait for; with port 0 it carries the real port.
    spdlog::info("READY listening on {}:{}", config.listen.host, server.port());

    int sig = 0;
    sigwait(&stop_signals, &sig);
    spdlog::info("signal {}, shutting down", sig);
    server.stop();
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const std::exception& e) {
    spdlog::error("fatal: {}", e.what());
    return 1;
  }
  return 0;
}
