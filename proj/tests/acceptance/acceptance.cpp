// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Timings are wall clock on the machine running ctest.

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "zkpark/algebra/domain.hpp"
#include "zkpark/algebra/pairing.hpp"
#include "zkpark/circuit/builder.hpp"
#include "zkpark/circuit/membership.hpp"
#include "zkpark/client/client.hpp"
#include "zkpark/error.hpp"
#include "zkpark/identity/identity.hpp"
#include "zkpark/kernels/fft.hpp"
#include "zkpark/poseidon/poseidon.hpp"
#include "zkpark/prover/setup.hpp"
#include "zkpark/server/server.hpp"

extern char** environ;

namespace zkpark {
namespace {

using Clock = std::chrono::steady_clock;
using protocol::Json;

constexpr std::string_view kSeed = "zkpark-acceptance";

struct Result {
  bool pass = false;
  std::string detail;
};

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : (v[m - 1] + v[m]) / 2;
}

std::string fmt(double v, int digits = 1) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(digits);
  os << v;
  return os.str();
}

const CircuitKeys& keys(unsigned depth) {
  static std::map<unsigned, CircuitKeys> cache;
  auto it = cache.find(depth);
  if (it == cache.end()) it = cache.emplace(depth, membership_keys(depth, as_bytes(kSeed))).first;
  return it->second;
}

class TempDir {
 public:
  TempDir() {
    static std::atomic<int> n{0};
    path_ = std::filesystem::temp_directory_path() /
            ("zkpark-acceptance-" + std::to_string(::getpid()) + "-" + std::to_string(n++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// Authority, handler and TCP listener in this process.
struct LocalServer {
  explicit LocalServer(unsigned depth)
      : authority(config(depth), keys(depth).vk),
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
  Json call(const Json& req) { return protocol::parse(transport.exchange(protocol::dump(req))); }

  Authority authority;
  RequestHandler handler;
  TcpServer tcp;
  net::TcpTransport transport;
};

Bytes uid_bytes(const std::string& s) {
  const auto b = as_bytes(s);
  return Bytes(b.begin(), b.end());
}

std::string reason_of(const Json& resp) {
  if (resp.value("ok", false)) return "Accept";
  return resp.value("reason", std::string("?"));
}

struct Instance {
  Witness w;
  PublicInputs x;
};

Instance honest_instance(unsigned depth, std::mt19937_64& rng) {
  IncrementalMerkleTree tree(depth);
  const std::size_t before = rng() % 3;
  for (std::size_t i = 0; i < before; ++i) tree.insert(Fr::random(rng));
  const IdentitySecret secret = IdentitySecret::generate(rng);
  const Bytes uid = uid_bytes("ACC-" + std::to_string(rng() % 100000));
  const std::uint64_t idx = tree.insert(commitment(secret, uid));
  tree.insert(Fr::random(rng));
  auto [w, x] = assign_witness(keys(depth).cs, secret, uid, tree.path(idx), Fr::random(rng));
  return {std::move(w), x};
}

std::vector<std::array<std::uint8_t, 64>> g1_elements(const Proof& p) {
  std::vector<std::array<std::uint8_t, 64>> out;
  for (const G1Affine* g : {&p.a, &p.b, &p.c, &p.z, &p.t_lo, &p.t_mid, &p.t_hi, &p.w_zeta, &p.w_zeta_omega}) {
    out.push_back(encode_g1(*g));
  }
  return out;
}

// 1. End-to-end register, sync, park over TCP at depth 8.
Result end_to_end() {
  constexpr int kFlows = 100;
  LocalServer server(8);
  TempDir dir;
  const auto t0 = Clock::now();
  int accepted = 0;
  for (int i = 0; i < kFlows; ++i) {
    client::Client c(dir / ("car" + std::to_string(i) + ".key"), server.transport, {false, false});
    c.register_identity(uid_bytes("CAR-" + std::to_string(i)), true);
    c.sync();
    if (c.park().outcome == AuthOutcome::kAccept) ++accepted;
  }
  const double secs = ms_since(t0) / 1000;
  return {accepted == kFlows && secs < 300,
          std::to_string(accepted) + "/" + std::to_string(kFlows) + " accepted in " + fmt(secs) + " s (limit 300 s)"};
}

// 2. Constraint checker and prover/verifier agree on honest and perturbed witnesses.
Result checker_agreement() {
  std::mt19937_64 rng(2);
  int honest_ok = 0, perturbed_ok = 0;
  for (int i = 0; i < 50; ++i) {
    const unsigned depth = i % 2 ? 4 : 2;
    const auto& k = keys(depth);
    const Instance inst = honest_instance(depth, rng);
    if (check_satisfied(k.cs, inst.w, inst.x) && verify(k.vk, inst.x, prove(k.pk, inst.x, inst.w, rng))) ++honest_ok;
  }
  for (int i = 0; i < 50; ++i) {
    const unsigned depth = i % 2 ? 4 : 2;
    const auto& k = keys(depth);
    Instance inst = honest_instance(depth, rng);
    const std::size_t v = 1 + rng() % (inst.w.values.size() - 1);
    inst.w.values[v] += Fr::one();
    bool refused = false;
    try {
      prove(k.pk, inst.x, inst.w, rng);
    } catch (const UnsatisfiedWitness&) {
      refused = true;
    }
    if (!check_satisfied(k.cs, inst.w, inst.x) && refused) ++perturbed_ok;
  }
  return {honest_ok == 50 && perturbed_ok == 50,
          "honest " + std::to_string(honest_ok) + "/50 satisfied and verified, perturbed " +
              std::to_string(perturbed_ok) + "/50 unsatisfied and refused"};
}

// 3. No tampered proof or public input verifies at depth 4.
Result tamper_matrix() {
  std::mt19937_64 rng(3);
  const auto& k = keys(4);
  const Instance inst = honest_instance(4, rng);
  const auto bytes = prove(k.pk, inst.x, inst.w, rng).serialize();
  if (!verify(k.vk, inst.x, std::span<const std::uint8_t>(bytes))) return {false, "honest proof rejected"};

  std::atomic<std::size_t> tried = 0, accepted = 0, decode_errors = 0;
  const auto attempt = [&](const PublicInputs& x, std::span<const std::uint8_t> proof) {
    ++tried;
    try {
      if (verify(k.vk, x, proof)) ++accepted;
    } catch (const DecodeError&) {
      ++decode_errors;
    }
  };
  // Every byte position takes every one of its 255 other values.
  const unsigned workers = std::max(1U, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t pos = t; pos < bytes.size(); pos += workers) {
        auto mutated = bytes;
        for (unsigned delta = 1; delta < 256; ++delta) {
          mutated[pos] = static_cast<std::uint8_t>(bytes[pos] ^ delta);
          attempt(inst.x, std::span<const std::uint8_t>(mutated));
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (int field = 0; field < 3; ++field) {
    for (int kind = 0; kind < 4; ++kind) {
      PublicInputs x = inst.x;
      Fr& f = field == 0 ? x.rh : field == 1 ? x.nu : x.nf;
      switch (kind) {
        case 0: f += Fr::one(); break;
        case 1: f = Fr::random(rng); break;
        case 2: f = Fr::zero(); break;
        default: f = -f; break;
      }
      attempt(x, std::span<const std::uint8_t>(bytes));
    }
  }
  return {accepted == 0, std::to_string(tried.load()) + " mutations, " + std::to_string(accepted.load()) +
                             " accepted, " + std::to_string(decode_errors.load()) + " rejected at decode"};
}

// 4. Replay, double signalling and a previous epoch get their exact reasons.
Result rejection_reasons() {
  LocalServer server(4);
  TempDir dir;
  net::RecordingTransport recorder(server.transport);
  client::Client b(dir / "b.key", server.transport, {false, false}, &recorder);
  b.register_identity(uid_bytes("CAR-B"), true);
  b.sync();
  const AuthOutcome first = b.park().outcome;
  const Bytes accepted_request = recorder.log().back().request;
  const std::string replay = reason_of(protocol::parse(server.transport.exchange(accepted_request)));
  const AuthOutcome second = b.park().outcome;

  client::Client a(dir / "a.key", server.transport, {false, false});
  a.register_identity(uid_bytes("CAR-A"), true);
  const client::ClientState old_state = a.sync();
  const Json rotated = server.call({{"op", "rotate"}});
  const auto& k = keys(4);
  auto [w, x] = assign_witness(k.cs, read_keyfile(dir / "a.key"), old_state.uid, *old_state.path, *old_state.nu);
  const auto proof = prove(k.pk, x, w).serialize();
  const std::string stale =
      reason_of(server.call(protocol::auth_to_json({x, Bytes(proof.begin(), proof.end())})));

  const bool ok = first == AuthOutcome::kAccept && replay == "NullifierSeen" &&
                  second == AuthOutcome::kNullifierSeen && rotated.value("ok", false) && stale == "StaleNullifier";
  return {ok, "first " + std::string(protocol::outcome_name(first)) + ", replay " + replay + ", double " +
                  std::string(protocol::outcome_name(second)) + ", previous epoch " + stale};
}

// 5. Constraint count at depth 20.
Result constraint_count() {
  const ConstraintSystem cs = build_membership_circuit(20);
  const std::size_t used = cs.used_gates();
  return {used >= 2000 && used <= 25000,
          std::to_string(used) + " gates (padded " + std::to_string(cs.n_gates()) + "), bounds [2000, 25000]"};
}

// 6. Serialized proof size.
Result proof_size() {
  std::mt19937_64 rng(6);
  const auto& k = keys(2);
  const Instance inst = honest_instance(2, rng);
  const auto bytes = prove(k.pk, inst.x, inst.w, rng).serialize();
  return {bytes.size() <= 2416, std::to_string(bytes.size()) + " bytes (limit 2416)"};
}

// 7. Prove and verify latency.
Result latency() {
  std::mt19937_64 rng(7);
  const auto verify_median = [&](unsigned depth, const Instance& inst, const Proof& proof) {
    const auto& k = keys(depth);
    verify(k.vk, inst.x, proof);
    std::vector<double> t;
    for (int i = 0; i < 15; ++i) {
      const auto t0 = Clock::now();
      if (!verify(k.vk, inst.x, proof)) return -1.0;
      t.push_back(ms_since(t0));
    }
    return median(t);
  };

  const auto& k20 = keys(20);
  const Instance i20 = honest_instance(20, rng);
  Proof p20 = prove(k20.pk, i20.x, i20.w, rng);  // warm-up
  std::vector<double> prove_ms;
  for (int i = 0; i < 3; ++i) {
    const auto t0 = Clock::now();
    p20 = prove(k20.pk, i20.x, i20.w, rng);
    prove_ms.push_back(ms_since(t0));
  }
  const double prove20 = median(prove_ms);
  const double verify20 = verify_median(20, i20, p20);

  const Instance i4 = honest_instance(4, rng);
  const double verify4 = verify_median(4, i4, prove(keys(4).pk, i4.x, i4.w, rng));
  const Instance i16 = honest_instance(16, rng);
  const double verify16 = verify_median(16, i16, prove(keys(16).pk, i16.x, i16.w, rng));
  const double ratio = std::max(verify4, verify16) / std::min(verify4, verify16);

  const bool ok = verify20 > 0 && verify4 > 0 && verify16 > 0 && prove20 <= 10000 && verify20 <= 50 && ratio < 1.5;
  return {ok, "depth 20 prove " + fmt(prove20) + " ms (limit 10000), verify " + fmt(verify20, 2) +
                  " ms (limit 50); verify depth 4 " + fmt(verify4, 2) + " ms vs depth 16 " + fmt(verify16, 2) +
                  " ms, ratio " + fmt(ratio, 2) + " (limit 1.5)"};
}

// 8. Proofs of one witness share no group element; auth messages from two
// epochs share only rh and the op field.
Result unlinkability() {
  std::mt19937_64 rng(8);
  const auto& k = keys(4);
  const Instance inst = honest_instance(4, rng);
  std::set<std::array<std::uint8_t, 64>> seen;
  std::size_t total = 0;
  for (int i = 0; i < 20; ++i) {
    for (const auto& g : g1_elements(prove(k.pk, inst.x, inst.w, rng))) {
      seen.insert(g);
      ++total;
    }
  }
  const bool distinct = seen.size() == total;

  LocalServer server(4);
  TempDir dir;
  net::RecordingTransport recorder(server.transport);
  client::Client c(dir / "c.key", server.transport, {false, false}, &recorder);
  c.register_identity(uid_bytes("CAR-U"), true);
  c.sync();
  const auto r1 = c.park();
  server.call({{"op", "rotate"}});
  c.sync();
  const auto r2 = c.park();
  const auto log = recorder.log();
  if (log.size() != 2 || r1.outcome != AuthOutcome::kAccept || r2.outcome != AuthOutcome::kAccept) {
    return {false, "two-epoch flow did not produce two accepted auth messages"};
  }
  const Json m1 = protocol::parse(log[0].request), m2 = protocol::parse(log[1].request);
  std::vector<std::string> shared;
  for (const auto& [key, value] : m1.items()) {
    if (m2.contains(key) && m2.at(key) == value) shared.push_back(key);
  }
  std::sort(shared.begin(), shared.end());
  const auto p1 = protocol::auth_from_json(m1), p2 = protocol::auth_from_json(m2);
  const auto g1 = g1_elements(Proof::deserialize(p1.proof)), g2 = g1_elements(Proof::deserialize(p2.proof));
  const bool cross = std::none_of(g1.begin(), g1.end(),
                                  [&](const auto& g) { return std::find(g2.begin(), g2.end(), g) != g2.end(); });
  const bool fields_ok = shared == std::vector<std::string>{"op", "rh"};
  std::string joined;
  for (const auto& s : shared) joined += (joined.empty() ? "" : ",") + s;
  return {distinct && fields_ok && cross && !(r1.nf == r2.nf),
          std::to_string(seen.size()) + "/" + std::to_string(total) + " distinct G1 elements in 20 proofs; " +
              "two epochs share fields {" + joined + "}, nf " + (r1.nf == r2.nf ? "equal" : "differ")};
}

// A zkpark-server child process with stdout in a log file.
class ServerProcess {
 public:
  ServerProcess(const std::filesystem::path& data_dir, const std::filesystem::path& log) {
    posix_spawn_file_actions_t fa;
    posix_spawn_file_actions_init(&fa);
    posix_spawn_file_actions_addopen(&fa, STDOUT_FILENO, log.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
    posix_spawn_file_actions_adddup2(&fa, STDOUT_FILENO, STDERR_FILENO);
    std::vector<std::string> args = {ZKPARK_SERVER_BIN, "--listen",     "127.0.0.1:0",     "--depth",
                                     "4",               "--data-dir",   data_dir.string(), "--epoch-seconds",
                                     "3600",            "--srs-seed",   std::string(kSeed)};
    std::vector<char*> argv;
    for (auto& a : args) argv.push_back(a.data());
    argv.push_back(nullptr);
    const int rc = posix_spawn(&pid_, ZKPARK_SERVER_BIN, &fa, nullptr, argv.data(), environ);
    posix_spawn_file_actions_destroy(&fa);
    if (rc != 0) throw Error("cannot spawn " + std::string(ZKPARK_SERVER_BIN));

    const auto deadline = Clock::now() + std::chrono::seconds(120);
    while (Clock::now() < deadline) {
      std::ifstream in(log);
      std::string line;
      while (std::getline(in, line)) {
        const auto at = line.find("READY listening on ");
        if (at == std::string::npos) continue;
        port_ = static_cast<std::uint16_t>(std::stoul(line.substr(line.rfind(':') + 1)));
        return;
      }
      int status = 0;
      if (waitpid(pid_, &status, WNOHANG) == pid_) {
        pid_ = -1;
        throw Error("server exited before READY");
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
    kill9();
    throw Error("server not ready within 120 s");
  }
  ~ServerProcess() { kill9(); }
  void kill9() {
    if (pid_ <= 0) return;
    ::kill(pid_, SIGKILL);
    int status = 0;
    waitpid(pid_, &status, 0);
    pid_ = -1;
  }
  net::Endpoint endpoint() const { return {"127.0.0.1", port_}; }

 private:
  pid_t pid_ = -1;
  std::uint16_t port_ = 0;
};

Json info_of(net::Transport& t) { return protocol::parse(t.exchange(protocol::dump(Json{{"op", "info"}}))); }

// Root, next_index, epoch and the nullifier set, order-insensitive.
Json durable_part(const Json& info) {
  auto nfs = info.at("nullifiers").get<std::vector<std::string>>();
  std::sort(nfs.begin(), nfs.end());
  return Json{{"root", info.at("root")},
              {"next_index", info.at("next_index")},
              {"epoch_id", info.at("epoch_id")},
              {"nu", info.at("nu")},
              {"nullifiers", nfs}};
}

// 9. kill -9 and restart of the server binary replays its log exactly.
Result crash_recovery() {
  TempDir dir;
  std::filesystem::create_directories(dir / "data");
  Json before;
  Bytes accepted_request;
  int registered = 0, accepted = 0;
  {
    ServerProcess proc(dir / "data", dir / "server1.log");
    net::TcpTransport t(proc.endpoint());
    net::RecordingTransport recorder(t);
    for (int i = 0; i < 10; ++i) {
      client::Client c(dir / ("v" + std::to_string(i) + ".key"), t, {false, false}, &recorder);
      c.register_identity(uid_bytes("CRASH-" + std::to_string(i)), true);
      ++registered;
      if (i < 3) {
        c.sync();
        if (c.park().outcome == AuthOutcome::kAccept) ++accepted;
      }
    }
    accepted_request = recorder.log().front().request;
    before = durable_part(info_of(t));
    proc.kill9();
  }
  ServerProcess proc(dir / "data", dir / "server2.log");
  net::TcpTransport t(proc.endpoint());
  const Json after = durable_part(info_of(t));
  const std::string replay = reason_of(protocol::parse(t.exchange(accepted_request)));

  client::Client late(dir / "late.key", t, {false, false});
  late.register_identity(uid_bytes("CRASH-LATE"), true);
  late.sync();
  const AuthOutcome fresh = late.park().outcome;

  const bool ok = registered >= 10 && accepted >= 3 && before == after && replay == "NullifierSeen" &&
                  fresh == AuthOutcome::kAccept;
  return {ok, std::to_string(registered) + " registrations, " + std::to_string(accepted) +
                  " accepts; state after restart " + (before == after ? "identical" : "DIFFERS") +
                  " (next_index " + after.at("next_index").dump() + ", " +
                  std::to_string(after.at("nullifiers").size()) + " nullifiers); replayed auth " + replay +
                  ", new auth " + std::string(protocol::outcome_name(fresh))};
}

// 10. FFT round trips, pairing bilinearity and the in-circuit hash.
Result numerics() {
  std::mt19937_64 rng(10);
  int fft_bad = 0;
  for (unsigned log_n = 1; log_n <= 12; ++log_n) {
    const std::size_t n = std::size_t{1} << log_n;
    const EvaluationDomain d(n);
    std::vector<Fr> coeffs(n);
    for (auto& c : coeffs) c = Fr::random(rng);
    const std::vector<Fr> evals = d.fft(coeffs);
    if (d.ifft(evals) != coeffs) ++fft_bad;
    std::vector<Fr> serial = coeffs, parallel = coeffs;
    kernels::fft_serial(serial, d.omega());
    kernels::fft_parallel(parallel, d.omega());
    if (serial != evals || parallel != evals) ++fft_bad;
    // Direct evaluation at a few points as an independent reference.
    for (std::size_t i : {std::size_t{0}, std::size_t{1}, n - 1}) {
      Fr x = Fr::one();
      for (std::size_t j = 0; j < i; ++j) x *= d.omega();
      Fr acc = Fr::zero();
      for (std::size_t j = n; j-- > 0;) acc = acc * x + coeffs[j];
      if (acc != evals[i]) ++fft_bad;
    }
  }

  int pairing_bad = 0;
  const G1Affine p = g1_generator();
  const G2Affine q = g2_generator();
  const Fq12 base = pairing(p, q);
  if (base.is_one()) ++pairing_bad;
  for (int i = 0; i < 3; ++i) {
    const Fr a = Fr::random(rng), b = Fr::random(rng);
    const Fq12 lhs = pairing((G1Jacobian(p) * a).to_affine(), (G2Jacobian(q) * b).to_affine());
    const U256 ab = (a * b).to_canonical();
    if (lhs != base.pow(ab.limb)) ++pairing_bad;
    if (lhs != pairing((G1Jacobian(p) * (a * b)).to_affine(), q)) ++pairing_bad;
    const G1Affine p2 = (G1Jacobian(p) * b).to_affine();
    const G1Affine sum = (G1Jacobian(p) * a + G1Jacobian(p2)).to_affine();
    if (pairing(sum, q) != pairing((G1Jacobian(p) * a).to_affine(), q) * pairing(p2, q)) ++pairing_bad;
  }

  int hash_bad = 0;
  for (int i = 0; i < 100; ++i) {
    const Fr a = Fr::random(rng), b = Fr::random(rng);
    CircuitBuilder cb;
    const Var out2 = cb.materialize(hash2_gadget(cb, Lin::of(cb.input(a)), Lin::of(cb.input(b))));
    const Var out1 = cb.materialize(hash1_gadget(cb, Lin::of(cb.input(a))));
    if (cb.value(out2) != hash2(a, b) || cb.value(out1) != hash1(a)) ++hash_bad;
    if (!check_satisfied(cb.finish(2), cb.witness(), PublicInputs{})) ++hash_bad;
  }
  return {fft_bad == 0 && pairing_bad == 0 && hash_bad == 0,
          "fft sizes 2..4096 mismatches " + std::to_string(fft_bad) + ", pairing mismatches " +
              std::to_string(pairing_bad) + ", hash gadget mismatches " + std::to_string(hash_bad) + "/100"};
}

}  // namespace
}  // namespace zkpark

// With arguments, runs only the listed criterion numbers.
int main(int argc, char** argv) {
  using namespace zkpark;
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"end-to-end flows at depth 8", end_to_end},
      {"constraint checker agrees with prover", checker_agreement},
      {"tampered proofs and publics rejected", tamper_matrix},
      {"replay, double signal, previous epoch", rejection_reasons},
      {"constraint count at depth 20", constraint_count},
      {"proof size", proof_size},
      {"prove and verify latency", latency},
      {"unlinkability of proofs and epochs", unlinkability},
      {"crash recovery of the server binary", crash_recovery},
      {"fft, pairing and hash gadget numerics", numerics},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  int failed = 0, run = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.contains(i + 1)) continue;
    ++run;
    Result r;
    const auto t0 = Clock::now();
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) ++failed;
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << (i + 1) << " " << criteria[i].first << ": " << r.detail
              << " [" << fmt(ms_since(t0) / 1000) << " s]" << std::endl;
  }
  std::cout << (run - failed) << "/" << run << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
