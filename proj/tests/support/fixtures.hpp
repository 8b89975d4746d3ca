#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "antroute/simnet/simulator.hpp"

namespace antroute::testing {

using simnet::Channel;
using simnet::NetworkConfig;
using simnet::NodeId;
using simnet::PaymentSpec;

inline NetworkConfig graph(const std::vector<std::pair<NodeId, std::uint32_t>>& nodes,
                           const std::vector<std::pair<NodeId, NodeId>>& edges,
                           std::uint64_t balance = 1000) {
  NetworkConfig net;
  for (auto [id, fee] : nodes) net.nodes.push_back({id, fee});
  for (auto [a, b] : edges) net.channels.push_back({a, b, balance, balance});
  return net;
}

// 1 - 2 - ... - n; endpoints charge nothing.
inline NetworkConfig line(int n, std::uint32_t fee = 1) {
  std::vector<std::pair<NodeId, std::uint32_t>> nodes;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (int i = 1; i <= n; ++i) {
    nodes.emplace_back(i, (i == 1 || i == n) ? 0 : fee);
    if (i > 1) edges.emplace_back(i - 1, i);
  }
  return graph(nodes, edges);
}

inline PaymentSpec pay(NodeId payer, NodeId payee, std::uint32_t amount = 100,
                       std::uint32_t max_fees = 100, SimTime start = 100ms) {
  return {payer, payee, amount, max_fees, start};
}

// A counter cheater sits on the cheapest route from 1 to 2; a dearer honest
// route with two intermediaries runs alongside. Sizes and fees vary with `k`.
struct CheaterScenario {
  NetworkConfig network;
  PaymentSpec payment;
  NodeId cheater = 0;
  std::vector<NodeId> honest_route;
};

inline CheaterScenario cheater_scenario(int k) {
  std::mt19937_64 rng(1000 + k);
  CheaterScenario s;
  // at least 4 so the shortened claim still clears the privacy floor
  const int cheap_len = 4 + static_cast<int>(rng() % 3);
  const std::uint32_t honest_fee = 20 + static_cast<std::uint32_t>(rng() % 10);
  std::vector<std::pair<NodeId, std::uint32_t>> nodes{{1, 0}, {2, 0}};
  std::vector<std::pair<NodeId, NodeId>> edges;
  NodeId prev = 1;
  std::vector<NodeId> cheap;
  for (int i = 0; i < cheap_len; ++i) {
    const NodeId id = 10 + i;
    nodes.emplace_back(id, 1);
    edges.emplace_back(prev, id);
    cheap.push_back(id);
    prev = id;
  }
  edges.emplace_back(prev, 2);
  s.cheater = cheap[1 + rng() % (cheap.size() - 1)];
  nodes.emplace_back(30, honest_fee);
  nodes.emplace_back(31, honest_fee);
  edges.emplace_back(1, 30);
  edges.emplace_back(30, 31);
  edges.emplace_back(31, 2);
  s.network = graph(nodes, edges);
  s.network.rng_seed = 77 + k;
  s.payment = pay(1, 2, 100, 200);
  s.honest_route = {1, 30, 31, 2};
  return s;
}

}  // namespace antroute::testing
