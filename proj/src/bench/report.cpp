#include "zkpark/bench/report.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <random>

#include "zkpark/circuit/membership.hpp"
#include "zkpark/error.hpp"
#include "zkpark/prover/setup.hpp"

namespace zkpark::bench {

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& f) {
  const auto t0 = Clock::now();
  f();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// First run is the warm-up and is not reported.
double median_of(unsigned iters, const std::function<void()>& f) {
  f();
  std::vector<double> samples;
  for (unsigned i = 0; i < iters; ++i) samples.push_back(time_ms(f));
  return median(samples);
}

}  // namespace

double median(std::vector<double> samples) {
  if (samples.empty()) throw ArgumentError("median of no samples");
  std::sort(samples.begin(), samples.end());
  const std::size_t m = samples.size() / 2;
  return samples.size() % 2 ? samples[m] : (samples[m - 1] + samples[m]) / 2;
}

std::vector<BenchRow> run_bench(const BenchOptions& options) {
  if (options.iters < 3) throw ArgumentError("bench needs at least 3 iterations");
  const auto seed = as_bytes(options.srs_seed);
  const ConstraintSystem cs = build_membership_circuit(options.depth);
  const std::size_t degree = srs_degree_for(cs.n_gates());

  std::shared_ptr<const Srs> srs;
  const double setup_ms = median_of(options.iters, [&] {
    srs = std::make_shared<const Srs>(trusted_setup(degree, seed));
  });
  std::optional<std::pair<ProvingKey, VerifyingKey>> keys;
  const double preprocess_ms = median_of(options.iters, [&] { keys.emplace(preprocess(cs, srs)); });
  const auto& [pk, vk] = *keys;

  // A tree holding one member plus a neighbour, so the path is not all zeros.
  std::mt19937_64 rng(2024);
  IncrementalMerkleTree tree(options.depth);
  const IdentitySecret secret = IdentitySecret::generate(rng);
  const Bytes uid = {'B', 'E', 'N', 'C', 'H'};
  const std::uint64_t index = tree.insert(commitment(secret, uid));
  tree.insert(Fr::random(rng));
  const auto [w, x] = assign_witness(cs, secret, uid, tree.path(index), Fr::random(rng));

  Proof proof;
  const double prove_ms = median_of(options.iters, [&] { proof = prove(pk, x, w); });
  const auto bytes = proof.serialize();
  bool ok = true;
  const double verify_ms = median_of(options.iters, [&] { ok = ok && verify(vk, x, bytes); });
  if (!ok) throw Error("bench proof failed to verify");

  std::vector<BenchRow> rows;
  for (const auto& [phase, ms] : {std::pair<const char*, double>{"setup", setup_ms},
                                  {"preprocess", preprocess_ms},
                                  {"prove", prove_ms},
                                  {"verify", verify_ms}}) {
    rows.push_back({phase, options.depth, ms, bytes.size(), cs.used_gates()});
  }
  return rows;
}

void write_csv(std::ostream& out, std::span<const BenchRow> rows) {
  out << "phase,depth,median_ms,proof_bytes,n_gates\n";
  for (const BenchRow& r : rows) {
    out << r.phase << ',' << r.depth << ',' << std::fixed << std::setprecision(3) << r.median_ms << ','
        << r.proof_bytes << ',' << r.n_gates << '\n';
  }
}

void write_csv(const std::filesystem::path& file, std::span<const BenchRow> rows) {
  std::ofstream out(file);
  if (!out) throw IoError("cannot write " + file.string());
  write_csv(out, rows);
}

}  // namespace zkpark::bench
