#include "antroute/scaling/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "antroute/seedstore/records.hpp"

namespace antroute::scaling {

namespace {

void check(const ScalingParams& p) {
  if (p.alpha < 0 || p.beta < 0 || p.gamma < 0 || p.lookups_per_task < 0) {
    throw std::domain_error("scaling constants must be non-negative");
  }
  if (!(p.matches_per_task > 0)) throw std::domain_error("matches_per_task must be positive");
  if (p.confirm_probability < 0 || p.confirm_probability > 1) {
    throw std::domain_error("confirm_probability must lie in [0, 1]");
  }
  if (!(p.rate > 10)) throw std::domain_error("rate must exceed 10 tx/s");
}

// 1 - (1 - q)^h, stable for tiny q and huge h.
double over_horizon(double q, double h) {
  if (h <= 0 || q <= 0) return 0.0;
  if (q >= 1) return 1.0;
  return -std::expm1(h * std::log1p(-q));
}

}  // namespace

double task_time(const ScalingParams& p) {
  check(p);
  const double a = p.alpha, b = p.beta, m = p.matches_per_task, c = p.confirm_probability;
  const double base = p.rate / 10.0;
  double t = (p.lookups_per_task * a + b) * std::log2(base) + (a + m * b) * std::log2(m * base);
  if (c > 0) t += c * (a + b) * std::log2(c * base);
  return t;
}

double total_time(const ScalingParams& p) {
  return p.rate *
         (task_time(p) + p.gamma * (1 + p.matches_per_task + p.confirm_probability));
}

LambdaMaxResult lambda_max(ScalingParams p, double rel_tolerance) {
  auto load = [&](double rate) {
    p.rate = rate;
    return total_time(p);
  };
  LambdaMaxResult result;
  double lo = 10.0 * (1 + 1e-12);
  if (load(lo) >= 1.0) throw std::domain_error("workload exceeds capacity at the minimum rate");
  double hi = 20.0;
  while (load(hi) < 1.0) {
    lo = hi;
    hi *= 2;
    if (hi > kLambdaCeiling) {
      if (load(kLambdaCeiling) < 1.0) {
        result.bounded = false;
        result.lambda = kLambdaCeiling;
        return result;
      }
      hi = kLambdaCeiling;
      break;
    }
  }
  while ((hi - lo) > rel_tolerance * hi) {
    const double mid = 0.5 * (lo + hi);
    (load(mid) < 1.0 ? lo : hi) = mid;
    ++result.iterations;
  }
  result.lambda = lo;
  return result;
}

double memory_estimate(const MemoryParams& p) {
  if (p.rate < 0 || p.lifetime < 0 || p.matches_received < 0) {
    throw std::domain_error("memory parameters must be non-negative");
  }
  using namespace seedstore;
  return p.rate * p.lifetime *
         (kPheromoneRecordBytes + kMatchRecordBytes * p.matches_received + kConfirmationRecordBytes);
}

std::optional<std::string> memory_range_warning(double rate, double lifetime) {
  const double low = memory_estimate({rate, lifetime, 0});
  const double high = memory_estimate({rate, lifetime, 8});
  if (low >= 2e6 && high <= 4e6) return std::nullopt;
  char buf[200];
  std::snprintf(buf, sizeof buf,
                "stated range 2-4 MB for r <= 8 disagrees with the formula: %.2f MB at r=0, "
                "%.2f MB at r=8",
                low / 1e6, high / 1e6);
  return std::string(buf);
}

CollisionResult collision_probability(const CollisionParams& p) {
  if (p.rate < 0 || p.lifetime < 0 || p.horizon_seconds < 0) {
    throw std::domain_error("collision parameters must be non-negative");
  }
  if (p.seed_bits <= 0) throw std::domain_error("seed_bits must be positive");
  CollisionResult r;
  const double n = p.rate * p.lifetime;
  r.seeds_alive = n;
  const double two_n_space = std::ldexp(1.0, p.seed_bits + 1);
  r.instant_probability = std::min(1.0, n * n / two_n_space);
  r.exact_instant = n > 1 ? -std::expm1(-n * (n - 1) / two_n_space) : 0.0;
  r.horizon_probability = over_horizon(r.instant_probability, p.horizon_seconds);
  r.exact_horizon = over_horizon(r.exact_instant, p.horizon_seconds);
  // n << sqrt(N), taken as n below 1% of 2^(bits/2)
  if (n > 0.01 * std::ldexp(1.0, p.seed_bits / 2)) {
    r.precondition_warning = true;
    r.warning = "n is not small against 2^(bits/2); n^2/2N overstates the instantaneous probability";
  }
  return r;
}

double bandwidth_estimate(double rate, double message_size) {
  if (rate < 0 || message_size < 0) throw std::domain_error("bandwidth inputs must be non-negative");
  return rate * message_size;
}

}  // namespace antroute::scaling
