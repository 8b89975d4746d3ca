#include "antroute/scaling/birthday.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "antroute/random.hpp"

namespace antroute::scaling {

namespace {

void check(const BirthdayExperiment& e) {
  if (e.key_space == 0 || e.key_space > (1ULL << 32)) {
    throw std::domain_error("key_space must lie in [1, 2^32]");
  }
  if (e.draws < 0 || e.trials == 0) throw std::domain_error("draws >= 0 and trials > 0 required");
}

// Scratch bitmap reused across trials; only the touched words are cleared.
class Trial {
 public:
  explicit Trial(std::uint64_t key_space) : bits_((key_space + 63) / 64, 0) {}

  bool collides(const BirthdayExperiment& e, std::uint64_t index) {
    std::mt19937_64 rng(derive_seed(e.rng_seed, index));
    std::uniform_int_distribution<std::uint64_t> key(0, e.key_space - 1);
    bool hit = false;
    for (int i = 0; i < e.draws && !hit; ++i) {
      const auto k = key(rng);
      auto& word = bits_[k >> 6];
      const std::uint64_t mask = 1ULL << (k & 63);
      hit = (word & mask) != 0;
      word |= mask;
      touched_.push_back(k >> 6);
    }
    for (auto w : touched_) bits_[w] = 0;
    touched_.clear();
    return hit;
  }

 private:
  std::vector<std::uint64_t> bits_;
  std::vector<std::uint64_t> touched_;
};

BirthdayEstimate finish(std::uint64_t trials, std::uint64_t collisions) {
  BirthdayEstimate r;
  r.trials = trials;
  r.collisions = collisions;
  r.probability = static_cast<double>(collisions) / static_cast<double>(trials);
  r.standard_error = std::sqrt(r.probability * (1 - r.probability) / static_cast<double>(trials));
  return r;
}

}  // namespace

double birthday_exact(std::uint64_t key_space, int draws) {
  double log_none = 0;
  for (int i = 1; i < draws; ++i) {
    log_none += std::log1p(-static_cast<double>(i) / static_cast<double>(key_space));
  }
  return -std::expm1(log_none);
}

BirthdayEstimate birthday_monte_carlo_serial(const BirthdayExperiment& e) {
  check(e);
  Trial t(e.key_space);
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < e.trials; ++i) hits += t.collides(e, i);
  return finish(e.trials, hits);
}

BirthdayEstimate birthday_monte_carlo_parallel(const BirthdayExperiment& e) {
  check(e);
  const auto n = static_cast<long long>(e.trials);
  std::uint64_t hits = 0;
#pragma omp parallel reduction(+ : hits)
  {
    Trial t(e.key_space);
#pragma omp for schedule(static)
    for (long long i = 0; i < n; ++i) hits += t.collides(e, static_cast<std::uint64_t>(i));
  }
  return finish(e.trials, hits);
}

}  // namespace antroute::scaling
