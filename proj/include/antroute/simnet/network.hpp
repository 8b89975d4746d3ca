#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "antroute/protocol/messages.hpp"
#include "antroute/protocol/node.hpp"
#include "antroute/sim_time.hpp"

namespace antroute::simnet {

using protocol::NodeId;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NodeSpec {
  NodeId id = 0;
  std::uint32_t fee = 0;
};

struct Channel {
  NodeId a = 0;
  NodeId b = 0;
  std::uint64_t balance_ab = 0;
  std::uint64_t balance_ba = 0;

  std::uint64_t capacity() const noexcept { return balance_ab + balance_ba; }
  friend bool operator==(const Channel&, const Channel&) = default;
};

enum class LatencyMode { constant, uniform };

// constant: every hop takes `base`; uniform: base + U[0, spread].
struct LatencyModel {
  LatencyMode mode = LatencyMode::constant;
  SimTime base = 10ms;
  SimTime spread = SimTime{0};
};

struct NetworkConfig {
  std::vector<NodeSpec> nodes;
  std::vector<Channel> channels;
  LatencyModel latency;
  std::uint64_t rng_seed = 1;
};

// Throws ConfigError naming the offending node or channel.
void validate(const NetworkConfig& config);

// Ground-truth channel graph: adjacency, fees and directed balances.
class SimNetwork final : public protocol::ChannelView {
 public:
  explicit SimNetwork(NetworkConfig config);

  std::uint64_t balance(NodeId from, NodeId to) const override;

  bool has_node(NodeId id) const { return fees_.contains(id); }
  std::uint32_t fee(NodeId id) const { return fees_.at(id); }
  const std::vector<NodeId>& neighbors(NodeId id) const { return adjacency_.at(id); }
  std::vector<NodeId> node_ids() const;
  const std::vector<Channel>& channels() const noexcept { return config_.channels; }
  const NetworkConfig& config() const noexcept { return config_; }

  // Moves `amount` from `from` to `to` on their shared channel. Returns false
  // (and changes nothing) if the directed balance is insufficient.
  bool transfer(NodeId from, NodeId to, std::uint64_t amount);

 private:
  Channel* find_channel(NodeId x, NodeId y, bool& x_is_a);
  const Channel* find_channel(NodeId x, NodeId y, bool& x_is_a) const;

  NetworkConfig config_;
  std::map<NodeId, std::uint32_t> fees_;
  std::map<NodeId, std::vector<NodeId>> adjacency_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> channel_index_;
};

// Hop count of the shortest payer->payee path using only directed edges with
// balance >= amount; nullopt when unreachable.
std::optional<int> shortest_path_oracle(const SimNetwork& network, NodeId payer, NodeId payee,
                                        std::uint64_t amount);

struct SettlementResult {
  bool settled = false;
  std::uint64_t fees_paid = 0;
  std::string failure;
};

// Settles a payment along `path` (payer first, payee last). Each hop carries
// the amount plus the fees of every intermediary still ahead of it, so each
// intermediary nets its own fee and channel capacities are preserved. Either
// every hop is applied or none is.
SettlementResult settle_payment(SimNetwork& network, const std::vector<NodeId>& path,
                                std::uint64_t amount);

}  // namespace antroute::simnet
