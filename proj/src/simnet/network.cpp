#include "antroute/simnet/network.hpp"

#include <deque>
#include <set>
#include <string>

namespace antroute::simnet {

namespace {

std::string describe(std::size_t i, const Channel& c) {
  return "channel #" + std::to_string(i) + " (a=" + std::to_string(c.a) +
         ", b=" + std::to_string(c.b) + ")";
}

}  // namespace

void validate(const NetworkConfig& config) {
  std::set<NodeId> ids;
  for (const auto& n : config.nodes) {
    if (!ids.insert(n.id).second) {
      throw ConfigError("duplicate node id " + std::to_string(n.id));
    }
  }
  std::set<std::pair<NodeId, NodeId>> pairs;
  std::map<NodeId, int> degree;
  for (std::size_t i = 0; i < config.channels.size(); ++i) {
    const auto& c = config.channels[i];
    if (!ids.contains(c.a)) {
      throw ConfigError(describe(i, c) + ": unknown endpoint " + std::to_string(c.a));
    }
    if (!ids.contains(c.b)) {
      throw ConfigError(describe(i, c) + ": unknown endpoint " + std::to_string(c.b));
    }
    if (c.a == c.b) throw ConfigError(describe(i, c) + ": self-loop");
    if (!pairs.insert(std::minmax(c.a, c.b)).second) {
      throw ConfigError(describe(i, c) + ": duplicate channel between the same nodes");
    }
    if (++degree[c.a] > 255 || ++degree[c.b] > 255) {
      throw ConfigError(describe(i, c) + ": node exceeds 255 neighbors");
    }
  }
  if (config.latency.base < SimTime{0} || config.latency.spread < SimTime{0}) {
    throw ConfigError("latency must be non-negative");
  }
}

SimNetwork::SimNetwork(NetworkConfig config) : config_(std::move(config)) {
  validate(config_);
  for (const auto& n : config_.nodes) {
    fees_[n.id] = n.fee;
    adjacency_[n.id];
  }
  for (std::size_t i = 0; i < config_.channels.size(); ++i) {
    const auto& c = config_.channels[i];
    adjacency_[c.a].push_back(c.b);
    adjacency_[c.b].push_back(c.a);
    channel_index_[std::minmax(c.a, c.b)] = i;
  }
}

std::vector<NodeId> SimNetwork::node_ids() const {
  std::vector<NodeId> ids;
  ids.reserve(fees_.size());
  for (const auto& [id, fee] : fees_) ids.push_back(id);
  return ids;
}

const Channel* SimNetwork::find_channel(NodeId x, NodeId y, bool& x_is_a) const {
  const auto it = channel_index_.find(std::minmax(x, y));
  if (it == channel_index_.end()) return nullptr;
  const Channel& c = config_.channels[it->second];
  x_is_a = c.a == x;
  return &c;
}

Channel* SimNetwork::find_channel(NodeId x, NodeId y, bool& x_is_a) {
  return const_cast<Channel*>(std::as_const(*this).find_channel(x, y, x_is_a));
}

std::uint64_t SimNetwork::balance(NodeId from, NodeId to) const {
  bool from_is_a = false;
  const Channel* c = find_channel(from, to, from_is_a);
  if (c == nullptr) return 0;
  return from_is_a ? c->balance_ab : c->balance_ba;
}

bool SimNetwork::transfer(NodeId from, NodeId to, std::uint64_t amount) {
  bool from_is_a = false;
  Channel* c = find_channel(from, to, from_is_a);
  if (c == nullptr) return false;
  auto& out = from_is_a ? c->balance_ab : c->balance_ba;
  auto& in = from_is_a ? c->balance_ba : c->balance_ab;
  if (out < amount) return false;
  out -= amount;
  in += amount;
  return true;
}

std::optional<int> shortest_path_oracle(const SimNetwork& network, NodeId payer, NodeId payee,
                                        std::uint64_t amount) {
  if (!network.has_node(payer) || !network.has_node(payee)) return std::nullopt;
  std::map<NodeId, int> dist{{payer, 0}};
  std::deque<NodeId> queue{payer};
  while (!queue.empty()) {
    const NodeId u = queue.front();
    queue.pop_front();
    if (u == payee) return dist[u];
    for (NodeId v : network.neighbors(u)) {
      if (dist.contains(v) || network.balance(u, v) < amount) continue;
      dist[v] = dist[u] + 1;
      queue.push_back(v);
    }
  }
  return std::nullopt;
}

SettlementResult settle_payment(SimNetwork& network, const std::vector<NodeId>& path,
                                std::uint64_t amount) {
  SettlementResult result;
  if (path.size() < 2) {
    result.failure = "path too short";
    return result;
  }
  // hop i carries amount + fees of intermediaries path[i+1 .. n-2]
  std::vector<std::uint64_t> carried(path.size() - 1, amount);
  std::uint64_t ahead = 0;
  for (std::size_t i = path.size() - 1; i-- > 0;) {
    carried[i] = amount + ahead;
    if (i > 0) ahead += network.fee(path[i]);
  }
  result.fees_paid = ahead;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (network.balance(path[i], path[i + 1]) < carried[i]) {
      result.failure = "insufficient balance " + std::to_string(path[i]) + "->" +
                       std::to_string(path[i + 1]);
      return result;
    }
  }
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    network.transfer(path[i], path[i + 1], carried[i]);
  }
  result.settled = true;
  return result;
}

}  // namespace antroute::simnet
