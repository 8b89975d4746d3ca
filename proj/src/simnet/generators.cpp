#include "antroute/simnet/generators.hpp"

#include <random>
#include <set>

#include "antroute/random.hpp"

namespace antroute::simnet {

NetworkConfig random_connected_network(const RandomGraphSpec& spec) {
  if (spec.node_count < 2) throw ConfigError("generator needs at least 2 nodes");
  if (spec.fee_min > spec.fee_max || spec.balance_min > spec.balance_max) {
    throw ConfigError("generator ranges must satisfy min <= max");
  }
  std::mt19937_64 rng(derive_seed(spec.rng_seed, 0x9a7bULL));
  std::uniform_int_distribution<std::uint32_t> fee(spec.fee_min, spec.fee_max);
  std::uniform_int_distribution<std::uint64_t> balance(spec.balance_min, spec.balance_max);
  std::bernoulli_distribution extra(spec.extra_edge_probability);

  NetworkConfig config;
  config.latency = spec.latency;
  config.rng_seed = spec.rng_seed;
  const auto n = static_cast<NodeId>(spec.node_count);
  for (NodeId id = 1; id <= n; ++id) config.nodes.push_back({id, fee(rng)});

  std::set<std::pair<NodeId, NodeId>> edges;
  for (NodeId id = 2; id <= n; ++id) {
    const NodeId parent = std::uniform_int_distribution<NodeId>(1, id - 1)(rng);
    edges.insert({parent, id});
  }
  for (NodeId a = 1; a <= n; ++a) {
    for (NodeId b = a + 1; b <= n; ++b) {
      if (!edges.contains({a, b}) && extra(rng)) edges.insert({a, b});
    }
  }
  for (const auto& [a, b] : edges) {
    const auto ab = balance(rng);
    const auto ba = balance(rng);
    config.channels.push_back({a, b, ab, ba});
  }
  return config;
}

std::vector<PaymentSpec> poisson_workload(const PoissonWorkloadSpec& spec,
                                          const std::vector<NodeId>& nodes, std::uint64_t rng_seed) {
  if (spec.rate <= 0.0) throw ConfigError("workload rate must be positive");
  if (nodes.size() < 2) throw ConfigError("workload needs at least 2 nodes");
  if (spec.amount_min == 0 || spec.amount_min > spec.amount_max) {
    throw ConfigError("workload amount range must satisfy 0 < min <= max");
  }
  std::mt19937_64 rng(derive_seed(rng_seed, 0x9015ULL));
  std::exponential_distribution<double> gap(spec.rate);
  std::uniform_int_distribution<std::size_t> pick(0, nodes.size() - 1);
  std::uniform_int_distribution<std::uint32_t> amount(spec.amount_min, spec.amount_max);

  std::vector<PaymentSpec> out;
  double t = gap(rng);
  while (from_seconds(t) < spec.duration) {
    PaymentSpec p;
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    p.payer = nodes[i];
    p.payee = nodes[j];
    p.amount = amount(rng);
    p.max_fees = spec.max_fees;
    p.start_time = from_seconds(t);
    out.push_back(p);
    t += gap(rng);
  }
  return out;
}

}  // namespace antroute::simnet
