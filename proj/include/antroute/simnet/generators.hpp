#pragma once

#include <cstdint>
#include <vector>

#include "antroute/simnet/network.hpp"
#include "antroute/simnet/simulator.hpp"

namespace antroute::simnet {

struct RandomGraphSpec {
  int node_count = 20;
  double extra_edge_probability = 0.1;  // per non-tree pair
  std::uint32_t fee_min = 1;
  std::uint32_t fee_max = 10;
  std::uint64_t balance_min = 1000;
  std::uint64_t balance_max = 1000;
  LatencyModel latency;
  std::uint64_t rng_seed = 1;
};

// Random spanning tree plus independent extra edges, so the graph is always
// connected. Node ids run 1..node_count.
NetworkConfig random_connected_network(const RandomGraphSpec& spec);

struct PoissonWorkloadSpec {
  double rate = 1.0;  // arrivals per second
  SimTime duration = 1s;
  std::uint32_t amount_min = 1;
  std::uint32_t amount_max = 1;
  std::uint32_t max_fees = 100;
};

// Exponential inter-arrival times over [0, duration); payer and payee drawn
// uniformly without replacement from `nodes`.
std::vector<PaymentSpec> poisson_workload(const PoissonWorkloadSpec& spec,
                                          const std::vector<NodeId>& nodes, std::uint64_t rng_seed);

}  // namespace antroute::simnet
