#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "antroute/protocol/messages.hpp"
#include "antroute/seedstore/avl_tree.hpp"
#include "antroute/seedstore/bucketed_store.hpp"
#include "antroute/seedstore/records.hpp"
#include "antroute/sim_time.hpp"

namespace antroute::protocol {

using seedstore::NeighborSlot;

// Ground truth for directed spendable balances. The node only ever asks about
// its own channels.
class ChannelView {
 public:
  virtual ~ChannelView() = default;
  virtual std::uint64_t balance(NodeId from, NodeId to) const = 0;
};

enum class Behavior {
  honest,
  counter_decrement,  // forwards pheromones with c+1-delta and hides it on the match return path
  refuse_payment,     // confirms honestly, then swallows the counter-check round
};

struct NodeConfig {
  SimTime seed_lifetime = 2s;
  std::size_t l0_length = 4;
  std::size_t l1_length = 4;
  std::uint8_t cheat_delta = 2;
};

enum class DropReason : std::uint8_t {
  stale,
  not_improving,
  fee_exhausted,
  counter_overflow,
  unknown_seed,
  counter_mismatch,
  no_session,
  unknown_match_id,
  check_mismatch,
  refused,
  replaced_after_match,
  count_,
};

inline constexpr std::size_t kDropReasonCount = static_cast<std::size_t>(DropReason::count_);
const char* drop_reason_name(DropReason reason);

struct Outbound {
  NodeId to = 0;
  Message message;
};

// Control-plane messages between payee and payer (outside the channel graph).
struct PayeeReport {
  NodeId payer = 0;
  std::uint64_t seed = 0;
  std::uint64_t match_id = 0;
  std::vector<std::uint64_t> checks;
};

struct ProceedSignal {
  NodeId payer = 0;
  std::uint64_t seed = 0;
  std::uint64_t match_id = 0;
};

struct MatchCreated {
  std::uint64_t seed = 0;
  std::uint64_t match_id = 0;
  std::uint8_t total_counter = 0;
  std::uint32_t total_fees = 0;
};

// A route candidate landed in this node's special match tree.
struct CandidateStored {
  std::uint64_t seed = 0;
  std::uint64_t match_id = 0;
};

struct Effects {
  std::vector<Outbound> sends;
  std::vector<PayeeReport> reports;
  std::vector<ProceedSignal> proceeds;
  std::vector<MatchCreated> matches_created;
  std::vector<CandidateStored> candidates_stored;
  std::optional<DropReason> dropped;
};

enum class OriginateStatus { ok, unroutable_locally };

struct OriginateResult {
  OriginateStatus status = OriginateStatus::ok;
  Effects effects;
};

enum class CounterVerdict { pass, cheater_detected };

struct NodeStats {
  std::uint64_t handler_calls = 0;
  std::uint64_t pheromone_lookups = 0;
  std::uint64_t pheromone_inserts = 0;
  std::uint64_t match_lookups = 0;
  std::uint64_t match_inserts = 0;
  std::uint64_t confirmation_lookups = 0;
  std::uint64_t confirmation_inserts = 0;
  std::uint64_t expired_records = 0;
  std::size_t peak_pheromone_records = 0;
  std::size_t peak_match_records = 0;
  std::size_t peak_confirmation_records = 0;
  std::array<std::uint64_t, kDropReasonCount> drops{};
};

// One participant of the routing protocol. Handlers run to completion and
// return the messages to emit; the caller owns delivery and timing.
class Node {
 public:
  Node(NodeId id, std::uint32_t fee, std::vector<NodeId> neighbors, std::uint64_t rng_seed,
       NodeConfig config = {});

  NodeId id() const noexcept { return id_; }
  std::uint32_t fee() const noexcept { return fee_; }
  const std::vector<NodeId>& neighbors() const noexcept { return neighbors_; }
  const NodeConfig& config() const noexcept { return config_; }

  // 1-based local slot of a neighbor; 0 if not a neighbor.
  NeighborSlot slot_of(NodeId neighbor) const;
  NodeId neighbor_at(NeighborSlot slot) const;

  void set_behavior(Behavior b) noexcept { behavior_ = b; }
  Behavior behavior() const noexcept { return behavior_; }

  // Expire seed buckets up to `now`. Every entry point calls this first.
  void advance(SimTime now);

  // Emit P(0) (payer role) or P(1) (payee role) for the request.
  OriginateResult originate(const PaymentRequest& request, Direction role, SimTime now,
                            const ChannelView& channels);

  Effects receive(NodeId from, const Message& message, SimTime now, const ChannelView& channels);

  Effects handle_pheromone(NodeId from, const PheromoneMessage& msg, SimTime now,
                           const ChannelView& channels);
  Effects handle_match(NodeId from, const MatchMessage& msg, SimTime now);
  Effects handle_confirmation(NodeId from, const ConfirmationMessage& msg, SimTime now);

  // Payer side.
  std::vector<RouteCandidate> candidates(std::uint64_t seed) const;
  std::optional<RouteCandidate> select_route(std::uint64_t seed,
                                             const SelectionConfig& selection = {}) const;
  Effects confirm(std::uint64_t seed, const RouteCandidate& route, SimTime now);
  CounterVerdict verify_counter_report(std::uint64_t seed,
                                       std::span<const std::uint64_t> reported,
                                       const RouteCandidate& route) const;
  Effects counter_check_round(std::uint64_t seed, const RouteCandidate& route,
                              std::span<const std::uint64_t> verified, SimTime now);
  const std::vector<std::uint64_t>& confirmation_prefix(std::uint64_t seed) const;
  const std::vector<std::uint64_t>& counter_check_suffix(std::uint64_t seed) const;
  // Destroys the special match tree once the payment is over.
  void finish_payment(std::uint64_t seed);
  bool has_payer_session(std::uint64_t seed) const { return payer_.contains(seed); }

  const seedstore::BucketedStore<seedstore::PheromoneEntry>& pheromones() const { return pheromones_; }
  const seedstore::BucketedStore<seedstore::MatchEntry>& matches() const { return matches_; }
  const seedstore::BucketedStore<seedstore::ConfirmationEntry>& confirmations() const { return confirmations_; }
  // Mutable access for fault injection.
  seedstore::BucketedStore<seedstore::ConfirmationEntry>& confirmations() { return confirmations_; }
  seedstore::BucketedStore<seedstore::PheromoneEntry>& pheromones() { return pheromones_; }

  const NodeStats& stats() const noexcept { return stats_; }

 private:
  struct PayerSession {
    PaymentRequest request;
    seedstore::AvlTree<seedstore::SpecialMatchEntry> special;
    std::set<std::uint64_t> tried;
    std::vector<std::uint64_t> l0;
    std::vector<std::uint64_t> l1;
  };

  enum class PayeePhase { matched, reported, proceeded };

  struct PayeeSession {
    PaymentRequest request;
    std::map<std::uint64_t, PayeePhase> phases;
  };

  std::uint32_t fee_for(const seedstore::PheromoneEntry& entry) const;
  bool eligible(Direction d, NodeId neighbor, std::uint32_t amount,
                const ChannelView& channels) const;
  void create_match(const seedstore::PheromoneEntry& entry, SimTime bucket_time,
                    std::uint8_t stamp, Effects& out);
  void register_payee_match(std::uint64_t seed, std::uint64_t match_id);
  std::vector<std::uint64_t> random_list(std::size_t n);
  void drop(Effects& out, DropReason reason);
  void note_sizes();
  RouteCandidate to_candidate(const PayerSession& s, const seedstore::SpecialMatchEntry& e) const;

  NodeId id_;
  std::uint32_t fee_;
  std::vector<NodeId> neighbors_;
  NodeConfig config_;
  Behavior behavior_ = Behavior::honest;
  std::mt19937_64 rng_;

  seedstore::BucketedStore<seedstore::PheromoneEntry> pheromones_;
  seedstore::BucketedStore<seedstore::MatchEntry> matches_;
  seedstore::BucketedStore<seedstore::ConfirmationEntry> confirmations_;

  std::map<std::uint64_t, PayerSession> payer_;
  std::map<std::uint64_t, PayeeSession> payee_;
  std::map<std::uint64_t, std::uint64_t> payee_match_seed_;

  NodeStats stats_;
};

}  // namespace antroute::protocol
