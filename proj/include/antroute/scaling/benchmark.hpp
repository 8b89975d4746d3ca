#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace antroute::scaling {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double r_squared = 0;
};

// Ordinary least squares y = slope * x + intercept.
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

struct BenchmarkConfig {
  std::vector<std::size_t> sizes = {100, 300, 1000, 3000, 10000, 30000, 100000};
  std::size_t trials = 1000;
  std::uint64_t rng_seed = 1;
  int replicas = 3;                          // median of this many timed passes
  std::size_t deletion_node_budget = 1000000;  // caps deletion trials at large N
  std::size_t lookup_passes = 64;            // timed passes over the warmed probe set
  std::size_t insert_batches = 8;            // insertion samples per trial
  bool pin_cpu = true;
};

struct SizeSample {
  std::size_t size = 0;
  double lookup_seconds = 0;  // per operation
  double insert_seconds = 0;
  double delete_seconds = 0;  // per whole tree
  std::size_t deletion_trials = 0;
};

struct BenchmarkResult {
  std::vector<SizeSample> samples;
  LinearFit lookup;    // against log2 N; slope = alpha
  LinearFit insert;    // against log2 N; slope = beta
  LinearFit deletion;  // against N; slope = gamma
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  bool pinned = false;
  std::vector<std::string> diagnostics;
};

// Times the seed store's own AVL tree. Single-threaded; pins the calling
// thread to its current CPU when the platform allows.
BenchmarkResult benchmark_constants(const BenchmarkConfig& config);

}  // namespace antroute::scaling
