#pragma once

#include <cstdint>

namespace antroute::scaling {

struct BirthdayExperiment {
  std::uint64_t key_space = 1 << 16;
  int draws = 300;
  std::uint64_t trials = 100000;
  std::uint64_t rng_seed = 1;
};

struct BirthdayEstimate {
  std::uint64_t trials = 0;
  std::uint64_t collisions = 0;  // trials with at least one repeated key
  double probability = 0;
  double standard_error = 0;
};

// 1 - prod_{i<draws} (1 - i/key_space).
double birthday_exact(std::uint64_t key_space, int draws);

// Trial i draws from its own stream derive_seed(rng_seed, i), so the serial
// and OpenMP versions return identical counts.
BirthdayEstimate birthday_monte_carlo_serial(const BirthdayExperiment& e);
BirthdayEstimate birthday_monte_carlo_parallel(const BirthdayExperiment& e);

}  // namespace antroute::scaling
