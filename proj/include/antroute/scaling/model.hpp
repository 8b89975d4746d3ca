#pragma once

#include <optional>
#include <string>

namespace antroute::scaling {

// Per-node workload model. alpha/beta are seconds per log2-unit for tree
// lookup/insert, gamma seconds per node for deleting a tree.
struct ScalingParams {
  double alpha = 0;
  double beta = 0;
  double gamma = 0;
  double lookups_per_task = 0;     // p
  double matches_per_task = 1;     // m
  double confirm_probability = 0;  // c
  double rate = 0;                 // lambda, tx/s
};

// Reference measurement-machine constants at lambda = 12500. p = 7 makes the
// general formula equal the worst case (8a + 2b) log2(l/10), usually quoted
// as "p = 8"; p = 8 in the general formula gives 9a + 2b instead.
inline constexpr ScalingParams kReferenceConstants{0.7e-6, 1.1e-6, 8.2e-8, 7, 1, 0, 12500};

// T(lambda) = (p a + b) log2(l/10) + (a + m b) log2(m l/10) + c (a + b) log2(c l/10),
// with the last term taken as 0 when c = 0. Throws std::domain_error when
// rate <= 10, any constant is negative, m <= 0 or c > 1.
double task_time(const ScalingParams& p);

// T^(lambda) = lambda (T(lambda) + gamma (1 + m + c)): seconds of work per second.
double total_time(const ScalingParams& p);

struct LambdaMaxResult {
  bool bounded = true;  // false: no root below kLambdaCeiling
  double lambda = 0;
  int iterations = 0;
};

inline constexpr double kLambdaCeiling = 1e9;

// Largest rate with total_time < 1, by bracketed bisection to relative
// tolerance 1e-6. `p.rate` is ignored.
LambdaMaxResult lambda_max(ScalingParams p, double rel_tolerance = 1e-6);

struct MemoryParams {
  double rate = 0;
  double lifetime = 2;
  double matches_received = 0;  // r
};

// rate * lifetime * (34 + 25 r + 33) bytes.
double memory_estimate(const MemoryParams& p);

// The commonly quoted bound is 2..4 MB for r <= 8; returns a warning
// when direct evaluation at r = 0 and r = 8 falls outside that range.
std::optional<std::string> memory_range_warning(double rate, double lifetime);

struct CollisionParams {
  double rate = 0;
  double lifetime = 2;
  int seed_bits = 64;
  double horizon_seconds = 0;
};

inline constexpr double kCenturySeconds = 3600.0 * 24 * 31 * 12 * 100;

struct CollisionResult {
  double seeds_alive = 0;           // n = rate * lifetime
  double instant_probability = 0;   // n^2 / 2^(bits+1)
  double horizon_probability = 0;   // 1 - (1 - instant)^horizon
  double exact_instant = 0;         // 1 - exp(-n (n-1) / 2^(bits+1))
  double exact_horizon = 0;         // same horizon formula on exact_instant
  bool precondition_warning = false;  // n not << 2^(bits/2)
  std::string warning;
};

CollisionResult collision_probability(const CollisionParams& p);

// rate * message_size, bytes per second.
double bandwidth_estimate(double rate, double message_size);

}  // namespace antroute::scaling
