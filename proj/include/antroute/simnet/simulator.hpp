#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "antroute/protocol/messages.hpp"
#include "antroute/protocol/node.hpp"
#include "antroute/simnet/network.hpp"
#include "antroute/sim_time.hpp"

namespace antroute::simnet {

struct PaymentSpec {
  NodeId payer = 0;
  NodeId payee = 0;
  std::uint32_t amount = 0;
  std::uint32_t max_fees = 0;
  SimTime start_time{0};
};

struct FaultConfig {
  std::map<NodeId, protocol::Behavior> behaviors;  // nodes not listed are honest
  double drop_rate = 0.0;                          // per message, per link
};

struct SimOptions {
  SimTime horizon = 10s;
  protocol::NodeConfig node;
  SimTime collect_window = 1s;   // payer waits this long for matches before choosing
  SimTime phase_timeout = 250ms; // confirmation / counter-check round trip budget
  protocol::SelectionConfig selection;
};

enum class PaymentOutcome {
  completed,
  no_route,            // no candidate ever reached the payer
  exhausted,           // every candidate failed verification or timed out
  settlement_failed,
  unroutable_locally,  // payer had no eligible channel
  incomplete,          // horizon reached mid-protocol
  not_started,
};

const char* outcome_name(PaymentOutcome outcome);

struct PaymentMetrics {
  std::size_t index = 0;
  NodeId payer = 0;
  NodeId payee = 0;
  std::uint32_t amount = 0;
  std::uint32_t max_fees = 0;
  std::uint64_t seed = 0;
  std::uint8_t counter_start = 0;
  SimTime start_time{0};

  PaymentOutcome outcome = PaymentOutcome::not_started;
  bool route_found = false;  // a candidate survived the counter-check round
  int path_length = 0;       // nodes on the settled path, endpoints included
  std::uint64_t fees_paid = 0;
  std::optional<SimTime> first_match_latency;
  std::size_t candidates = 0;
  std::optional<int> min_candidate_hops;  // min over candidates of C - 2c_0 + 1
  int attempts = 0;
  int cheater_detections = 0;
  int timeouts = 0;
  std::optional<std::uint64_t> selected_match_id;
  std::vector<NodeId> path;
};

struct NodeMetrics {
  NodeId id = 0;
  protocol::NodeStats stats;
};

inline constexpr std::array<const char*, 5> kMessageKinds = {
    "pheromone", "match", "confirmation", "payee_report", "proceed"};

struct RunMetrics {
  std::vector<PaymentMetrics> payments;
  std::vector<NodeMetrics> nodes;
  std::array<std::uint64_t, kMessageKinds.size()> messages_by_kind{};
  std::uint64_t bytes_sent = 0;  // wire frames delivered over channels
  std::uint64_t link_drops = 0;
  std::uint64_t decode_errors = 0;
  std::uint64_t max_pheromone_edge_traversals = 0;
  std::uint64_t events_processed = 0;
  SimTime end_time{0};
};

// Ground-truth path of one match, reconstructed from deliveries.
struct MatchTrace {
  std::uint64_t seed = 0;
  std::uint64_t match_id = 0;
  NodeId match_node = 0;
  std::uint8_t total_counter = 0;
  std::uint32_t total_fees = 0;
  std::vector<NodeId> payer_leg;  // match node first, towards the payer
  std::vector<NodeId> payee_leg;  // match node first, towards the payee
  bool delivered_to_payer = false;

  // payer ... match node ... payee
  std::vector<NodeId> full_path() const;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<Channel> final_channels;
  std::map<std::uint64_t, MatchTrace> traces;
};

// Draws seed S and c_0 for each payment from the network rng seed.
std::vector<protocol::PaymentRequest> make_requests(const NetworkConfig& network,
                                                    const std::vector<PaymentSpec>& workload);

// Runs the workload to `options.horizon`. Deterministic in all inputs.
// Throws ConfigError for malformed networks or workloads.
RunResult run(const NetworkConfig& network, const std::vector<PaymentSpec>& workload,
              const FaultConfig& faults = {}, const SimOptions& options = {});

}  // namespace antroute::simnet
