#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace antroute::capacity {

// Bytes or gas units; `unit` is a label carried into reports.
struct ChainCapacityParams {
  double block_max = 0;
  double tx_size = 0;
  double interblock_time = 0;  // seconds
  std::string unit = "B";
};

struct AntRoutingCapacityParams {
  double mempool_max = 0;   // bytes
  double data_per_tx = 0;   // bytes propagated per transaction
  double seed_lifetime = 0; // seconds
};

// block_max / (tx_size * interblock_time). Throws std::domain_error on
// non-positive input.
double chain_capacity(const ChainCapacityParams& p);

// mempool_max / (data_per_tx * seed_lifetime).
double ant_routing_capacity(const AntRoutingCapacityParams& p);

// 1 - (1 - reach^2)^n: chance that some node saw both pheromone directions.
double match_probability(double reach_fraction, std::uint64_t n_nodes);

inline constexpr double kMegabyte = 1e6;

struct CapacityRow {
  std::string preset;
  std::string label;
  std::string formula;  // inputs as printed
  double value = 0;     // tx/s
  double expected = 0;  // reference figure
  double tolerance = 0.005;
  std::string note;

  double relative_error() const;
  bool pass() const { return relative_error() <= tolerance; }
};

// bitcoin-typical, bitcoin-min, monero, ethereum-min-gas, ethereum-max-gas,
// ethereum-observed, ant-routing.
const std::vector<std::string>& preset_names();

// One row per preset; ant-routing yields two (formula reading and the
// reference figure). Throws std::invalid_argument for unknown names.
std::vector<CapacityRow> evaluate_preset(const std::string& name);
std::vector<CapacityRow> evaluate_all_presets();

// Fixed-point formatting at the reference 2 decimal places.
std::string format_fixed(double value, int decimals = 2);

}  // namespace antroute::capacity
