#include "antroute/capacity/capacity.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace antroute::capacity {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw std::domain_error(std::string(name) + " must be strictly positive");
  }
}

std::string quantity(double v, const std::string& unit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g %s", v, unit.c_str());
  return buf;
}

CapacityRow chain_row(const std::string& preset, const std::string& label,
                      const ChainCapacityParams& p, double expected) {
  CapacityRow row;
  row.preset = preset;
  row.label = label;
  row.formula = quantity(p.block_max, p.unit) + " / (" + quantity(p.tx_size, p.unit) + " * " +
                quantity(p.interblock_time, "s") + ")";
  row.value = chain_capacity(p);
  row.expected = expected;
  return row;
}

CapacityRow ant_row(const std::string& label, const AntRoutingCapacityParams& p, double expected,
                    std::string note) {
  CapacityRow row;
  row.preset = "ant-routing";
  row.label = label;
  row.formula = quantity(p.mempool_max, "B") + " / (" + quantity(p.data_per_tx, "B") + " * " +
                quantity(p.seed_lifetime, "s") + ")";
  row.value = ant_routing_capacity(p);
  row.expected = expected;
  row.note = std::move(note);
  return row;
}

}  // namespace

double chain_capacity(const ChainCapacityParams& p) {
  require_positive(p.block_max, "block_max");
  require_positive(p.tx_size, "tx_size");
  require_positive(p.interblock_time, "interblock_time");
  return p.block_max / (p.tx_size * p.interblock_time);
}

double ant_routing_capacity(const AntRoutingCapacityParams& p) {
  require_positive(p.mempool_max, "mempool_max");
  require_positive(p.data_per_tx, "data_per_tx");
  require_positive(p.seed_lifetime, "seed_lifetime");
  return p.mempool_max / (p.data_per_tx * p.seed_lifetime);
}

double match_probability(double reach_fraction, std::uint64_t n_nodes) {
  if (!(reach_fraction >= 0.0 && reach_fraction <= 1.0)) {
    throw std::domain_error("reach_fraction must lie in [0, 1]");
  }
  if (n_nodes == 0) throw std::domain_error("n_nodes must be positive");
  const double miss = 1.0 - reach_fraction * reach_fraction;
  // 1 - miss^n, accurate when miss^n is close to 1
  if (miss <= 0.0) return 1.0;
  return -std::expm1(static_cast<double>(n_nodes) * std::log(miss));
}

double CapacityRow::relative_error() const {
  return expected == 0 ? std::abs(value) : std::abs(value - expected) / std::abs(expected);
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {
      "bitcoin-typical", "bitcoin-min",       "monero",      "ethereum-min-gas",
      "ethereum-max-gas", "ethereum-observed", "ant-routing"};
  return names;
}

std::vector<CapacityRow> evaluate_preset(const std::string& name) {
  if (name == "bitcoin-typical") {
    return {chain_row(name, "Bitcoin, typical transaction", {kMegabyte, 250, 600, "B"}, 6.67)};
  }
  if (name == "bitcoin-min") {
    return {chain_row(name, "Bitcoin, minimal transaction", {kMegabyte, 61, 600, "B"}, 27.3)};
  }
  if (name == "monero") {
    return {chain_row(name, "Monero", {kMegabyte, 550, 120, "B"}, 15.15)};
  }
  if (name == "ethereum-min-gas") {
    return {chain_row(name, "Ethereum, minimal gas", {1e7, 21000, 15, "gas"}, 31.75)};
  }
  if (name == "ethereum-max-gas") {
    return {chain_row(name, "Ethereum, maximal gas", {1e7, 200000, 15, "gas"}, 3.33)};
  }
  if (name == "ethereum-observed") {
    return {chain_row(name, "Ethereum, observed block size", {36630, 500, 15, "B"}, 4.88)};
  }
  if (name == "ant-routing") {
    return {
        ant_row("Ant Routing, 20 MB mempool", {20 * kMegabyte, 100, 2}, 100000,
                "direct evaluation; the reference figure for these inputs is 10000"),
        ant_row("Ant Routing, reference 10000 tx/s", {2 * kMegabyte, 100, 2}, 10000,
                "reproduces the reference figure only with a 2 MB mempool"),
    };
  }
  throw std::invalid_argument("unknown preset \"" + name + "\"");
}

std::vector<CapacityRow> evaluate_all_presets() {
  std::vector<CapacityRow> rows;
  for (const auto& name : preset_names()) {
    auto part = evaluate_preset(name);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  return buf;
}

}  // namespace antroute::capacity
