// zkpark-relay: roadside relay. Takes BLE-sized UDP frames from vehicles
// and forwards whole messages to the server over TCP.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <csignal>

#include "zkpark/error.hpp"
#include "zkpark/relay/relay.hpp"

int main(int argc, char** argv) {
  using namespace zkpark;
  CLI::App app{"zkpark roadside relay"};
  std::string listen = "127.0.0.1:7701", server = "127.0.0.1:7700";
  double loss = 0.0;
  unsigned latency_ms = 0;
  std::uint64_t seed = 1;
  app.add_option("--listen", listen, "UDP host:port for vehicle frames")->capture_default_str();
  app.add_option("--server", server, "TCP host:port of the server")->capture_default_str();
  app.add_option("--loss", loss, "Frame loss rate in [0, 1)")->capture_default_str();
  app.add_option("--latency-ms", latency_ms, "Added delay in each direction")->capture_default_str();
  app.add_option("--seed", seed, "Seed of the loss pattern")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  sigset_t stop_signals;
  sigemptyset(&stop_signals);
  sigaddset(&stop_signals, SIGINT);
  sigaddset(&stop_signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop_signals, nullptr);

  try {
    relay::RelayConfig config;
    config.listen = net::Endpoint::parse(listen);
    config.server = net::Endpoint::parse(server);
    config.loss_rate = loss;
    config.latency = std::chrono::milliseconds(latency_ms);
    config.seed = seed;
    relay::Relay r(config);
    r.start();
    spdlog::info("READY relaying udp {}:{} -> tcp {} (loss {}, latency {} ms, seed {})", config.listen.host, r.port(),
                 server, loss, latency_ms, seed);
    int sig = 0;
    sigwait(&stop_signals, &sig);
    r.stop();
    const relay::RelayStats s = r.stats();
    spdlog::info("frames in {} (dropped {}), out {} (dropped {}), forwarded {}, cached replies {}, upstream failures {}",
                 s.frames_in, s.frames_dropped_up, s.frames_out, s.frames_dropped_down, s.messages_forwarded,
                 s.cached_replies, s.upstream_failures);
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
