#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace zkpark::bench {

struct BenchRow {
  std::string phase;  // setup | preprocess | prove | verify
  unsigned depth = 0;
  double median_ms = 0;
  std::size_t proof_bytes = 0;
  std::size_t n_gates = 0;  // constraints before padding to the FFT domain
};

struct BenchOptions {
  unsigned depth = 20;
  unsigned iters = 5;  // timed iterations per phase, after one warm-up
  std::string srs_seed = "zkpark-bench";
};

// Times each phase of the membership proof at one depth. ArgumentError if
// iters < 3. Everything but median_ms is deterministic.
std::vector<BenchRow> run_bench(const BenchOptions& options);

double median(std::vector<double> samples);

void write_csv(std::ostream& out, std::span<const BenchRow> rows);
void write_csv(const std::filesystem::path& file, std::span<const BenchRow> rows);

}  // namespace zkpark::bench
