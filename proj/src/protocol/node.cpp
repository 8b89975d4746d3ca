#include "antroute/protocol/node.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace antroute::protocol {

using seedstore::ConfirmationEntry;
using seedstore::kSelf;
using seedstore::MatchEntry;
using seedstore::PheromoneEntry;
using seedstore::SpecialMatchEntry;
using seedstore::StoreStatus;

const char* drop_reason_name(DropReason reason) {
  switch (reason) {
    case DropReason::stale: return "stale";
    case DropReason::not_improving: return "not_improving";
    case DropReason::fee_exhausted: return "fee_exhausted";
    case DropReason::counter_overflow: return "counter_overflow";
    case DropReason::unknown_seed: return "unknown_seed";
    case DropReason::counter_mismatch: return "counter_mismatch";
    case DropReason::no_session: return "no_session";
    case DropReason::unknown_match_id: return "unknown_match_id";
    case DropReason::check_mismatch: return "check_mismatch";
    case DropReason::refused: return "refused";
    case DropReason::replaced_after_match: return "replaced_after_match";
    case DropReason::count_: break;
  }
  return "unknown";
}

Node::Node(NodeId id, std::uint32_t fee, std::vector<NodeId> neighbors, std::uint64_t rng_seed,
           NodeConfig config)
    : id_(id),
      fee_(fee),
      neighbors_(std::move(neighbors)),
      config_(config),
      rng_(rng_seed),
      pheromones_(config.seed_lifetime),
      matches_(config.seed_lifetime),
      confirmations_(config.seed_lifetime) {
  if (neighbors_.size() > 255) {
    throw std::invalid_argument("node " + std::to_string(id) + " has more than 255 neighbors");
  }
}

NeighborSlot Node::slot_of(NodeId neighbor) const {
  const auto it = std::find(neighbors_.begin(), neighbors_.end(), neighbor);
  if (it == neighbors_.end()) return kSelf;
  return static_cast<NeighborSlot>(it - neighbors_.begin() + 1);
}

NodeId Node::neighbor_at(NeighborSlot slot) const {
  if (slot == kSelf || slot > neighbors_.size()) {
    throw std::out_of_range("no neighbor in slot " + std::to_string(slot));
  }
  return neighbors_[slot - 1];
}

void Node::advance(SimTime now) {
  stats_.expired_records +=
      pheromones_.rotate(now) + matches_.rotate(now) + confirmations_.rotate(now);
}

void Node::drop(Effects& out, DropReason reason) {
  out.dropped = reason;
  ++stats_.drops[static_cast<std::size_t>(reason)];
}

void Node::note_sizes() {
  stats_.peak_pheromone_records = std::max(stats_.peak_pheromone_records, pheromones_.size());
  stats_.peak_match_records = std::max(stats_.peak_match_records, matches_.size());
  stats_.peak_confirmation_records =
      std::max(stats_.peak_confirmation_records, confirmations_.size());
}

// Endpoints of a payment do not charge themselves a fee.
std::uint32_t Node::fee_for(const PheromoneEntry& entry) const {
  for (const auto& side : entry.sides) {
    if (side.present && side.sender == kSelf) return 0;
  }
  return fee_;
}

// Money moves from the payer side towards the payee side, so P(0) needs
// balance self->neighbor and P(1) needs balance neighbor->self.
bool Node::eligible(Direction d, NodeId neighbor, std::uint32_t amount,
                    const ChannelView& channels) const {
  return d == Direction::payer ? channels.balance(id_, neighbor) >= amount
                               : channels.balance(neighbor, id_) >= amount;
}

std::vector<std::uint64_t> Node::random_list(std::size_t n) {
  std::vector<std::uint64_t> out(n);
  for (auto& v : out) v = rng_();
  return out;
}

OriginateResult Node::originate(const PaymentRequest& request, Direction role, SimTime now,
                                const ChannelView& channels) {
  validate(request);
  advance(now);
  ++stats_.handler_calls;
  OriginateResult result;
  const std::uint8_t stamp = encode_timestamp(request.start_time);
  const SimTime bucket_time = resolve_timestamp(stamp, now);

  // The originator records c_0 - 1: its neighbors store c_0, so every stored
  // counter is one less than the counter carried into the next hop.
  seedstore::PheromoneSide own;
  own.present = true;
  own.counter = static_cast<std::uint8_t>(request.counter_start - 1);
  own.fees = request.max_fees;
  own.sender = kSelf;

  PheromoneEntry entry;
  entry.seed = request.seed;
  entry.amount = request.amount;
  entry.sides[index(role)] = own;
  ++stats_.pheromone_inserts;
  auto status = pheromones_.insert(request.seed, entry, bucket_time);
  if (status == StoreStatus::already_present) {
    pheromones_.update(request.seed, bucket_time, [&](PheromoneEntry& e) {
      e.amount = request.amount;
      e.sides[index(role)] = own;
    });
  } else if (status == StoreStatus::stale) {
    throw std::invalid_argument("payment start time outside the live seed window");
  }

  if (role == Direction::payer) {
    auto& session = payer_[request.seed];
    session.request = request;
  } else {
    payee_[request.seed].request = request;
  }

  PheromoneMessage msg;
  msg.direction = role;
  msg.seed = request.seed;
  msg.counter = request.counter_start;
  msg.remaining_fees = request.max_fees;
  msg.amount = request.amount;
  msg.timestamp = stamp;
  for (NodeId n : neighbors_) {
    if (eligible(role, n, request.amount, channels)) result.effects.sends.push_back({n, msg});
  }
  if (result.effects.sends.empty()) result.status = OriginateStatus::unroutable_locally;
  note_sizes();
  return result;
}

Effects Node::receive(NodeId from, const Message& message, SimTime now,
                      const ChannelView& channels) {
  if (const auto* p = std::get_if<PheromoneMessage>(&message)) {
    return handle_pheromone(from, *p, now, channels);
  }
  if (const auto* m = std::get_if<MatchMessage>(&message)) return handle_match(from, *m, now);
  return handle_confirmation(from, std::get<ConfirmationMessage>(message), now);
}

Effects Node::handle_pheromone(NodeId from, const PheromoneMessage& msg, SimTime now,
                               const ChannelView& channels) {
  advance(now);
  ++stats_.handler_calls;
  Effects out;
  const SimTime t = resolve_timestamp(msg.timestamp, now);
  const auto d = index(msg.direction);
  const NeighborSlot sender = slot_of(from);

  ++stats_.pheromone_lookups;
  const auto found = pheromones_.lookup(msg.seed, t);
  if (found.stale()) {
    drop(out, DropReason::stale);
    return out;
  }

  PheromoneEntry probe;
  if (found) probe = *found.record;
  const std::int64_t fee = fee_for(probe);
  const bool fee_ok = static_cast<std::int64_t>(msg.remaining_fees) - fee >= 0;
  const seedstore::PheromoneSide incoming{true, msg.counter, msg.remaining_fees, sender};

  bool first_contact = false;
  if (!found || !found.record->sides[d].present) {
    if (!fee_ok) {
      drop(out, DropReason::fee_exhausted);
      return out;
    }
    ++stats_.pheromone_inserts;
    if (!found) {
      PheromoneEntry entry;
      entry.seed = msg.seed;
      entry.amount = msg.amount;
      entry.sides[d] = incoming;
      pheromones_.insert(msg.seed, entry, t);
    } else {
      pheromones_.update(msg.seed, t, [&](PheromoneEntry& e) { e.sides[d] = incoming; });
    }
    first_contact = true;
  } else {
    if (found.record->sides[d].counter <= msg.counter) {
      drop(out, DropReason::not_improving);
      return out;
    }
    if (!fee_ok) {
      drop(out, DropReason::fee_exhausted);
      return out;
    }
    pheromones_.update(msg.seed, t, [&](PheromoneEntry& e) { e.sides[d] = incoming; });
  }

  const PheromoneEntry& entry = *pheromones_.lookup(msg.seed, t).record;
  note_sizes();

  if (!entry.sides[1 - d].present) {
    int next = msg.counter + 1;
    if (behavior_ == Behavior::counter_decrement) next -= config_.cheat_delta;
    if (next > 255 || next < 0) {
      drop(out, DropReason::counter_overflow);
      return out;
    }
    PheromoneMessage fwd = msg;
    fwd.counter = static_cast<std::uint8_t>(next);
    fwd.remaining_fees = static_cast<std::uint32_t>(msg.remaining_fees - fee);
    for (NodeId n : neighbors_) {
      if (n == from) continue;
      if (eligible(msg.direction, n, msg.amount, channels)) out.sends.push_back({n, fwd});
    }
    return out;
  }

  if (first_contact) {
    create_match(entry, t, msg.timestamp, out);
  } else {
    // A better copy arrived after the match was made; matches are only
    // created on first contact, so the older match path will now be refused.
    drop(out, DropReason::replaced_after_match);
  }
  return out;
}

void Node::create_match(const PheromoneEntry& entry, SimTime bucket_time, std::uint8_t stamp,
                        Effects& out) {
  const auto& p0 = entry.sides[0];
  const auto& p1 = entry.sides[1];
  const std::int64_t fee = fee_for(entry);
  const std::int64_t total_fees = static_cast<std::int64_t>(p0.fees) + p1.fees - fee;
  if (total_fees < 0) {
    drop(out, DropReason::fee_exhausted);
    return;
  }

  const std::uint64_t match_id = rng_();
  const auto total_counter = static_cast<std::uint8_t>(p0.counter + p1.counter + 1);
  const auto total = static_cast<std::uint32_t>(total_fees);

  ++stats_.match_inserts;
  matches_.insert(match_id, MatchEntry{match_id, p1.sender}, bucket_time);
  out.matches_created.push_back({entry.seed, match_id, total_counter, total});

  MatchMessage m;
  m.seed = entry.seed;
  m.match_id = match_id;
  m.total_counter = total_counter;
  m.total_fees = total;
  m.timestamp = stamp;

  if (p0.sender == kSelf) {
    // Match at the payer itself: the route starts towards the P(1) sender.
    auto it = payer_.find(entry.seed);
    if (it != payer_.end()) {
      it->second.special.insert(match_id,
                                SpecialMatchEntry{match_id, p1.sender, total_counter, total});
      out.candidates_stored.push_back({entry.seed, match_id});
    }
  } else {
    m.direction = Direction::payer;
    m.counter = p0.counter;
    out.sends.push_back({neighbor_at(p0.sender), m});
  }

  if (p1.sender == kSelf) {
    register_payee_match(entry.seed, match_id);
  } else {
    m.direction = Direction::payee;
    m.counter = p1.counter;
    out.sends.push_back({neighbor_at(p1.sender), m});
  }
  note_sizes();
}

void Node::register_payee_match(std::uint64_t seed, std::uint64_t match_id) {
  auto it = payee_.find(seed);
  if (it == payee_.end()) return;
  it->second.phases.emplace(match_id, PayeePhase::matched);
  payee_match_seed_[match_id] = seed;
}

Effects Node::handle_match(NodeId from, const MatchMessage& msg, SimTime now) {
  advance(now);
  ++stats_.handler_calls;
  Effects out;
  const SimTime t = resolve_timestamp(msg.timestamp, now);
  const auto d = index(msg.direction);

  ++stats_.pheromone_lookups;
  const auto found = pheromones_.lookup(msg.seed, t);
  if (found.stale()) {
    drop(out, DropReason::stale);
    return out;
  }
  if (!found || !found.record->sides[d].present) {
    drop(out, DropReason::unknown_seed);
    return out;
  }
  const auto side = found.record->sides[d];

  int carried = msg.counter;
  if (behavior_ == Behavior::counter_decrement) carried += config_.cheat_delta;
  if (side.counter != static_cast<std::uint8_t>(carried - 1)) {
    drop(out, DropReason::counter_mismatch);
    return out;
  }

  MatchMessage fwd = msg;
  fwd.counter = static_cast<std::uint8_t>(carried - 1);

  if (msg.direction == Direction::payer) {
    if (side.sender == kSelf) {
      auto it = payer_.find(msg.seed);
      if (it == payer_.end()) {
        drop(out, DropReason::no_session);
        return out;
      }
      it->second.special.insert(
          msg.match_id,
          SpecialMatchEntry{msg.match_id, slot_of(from), msg.total_counter, msg.total_fees});
      out.candidates_stored.push_back({msg.seed, msg.match_id});
    } else {
      ++stats_.match_inserts;
      matches_.insert(msg.match_id, MatchEntry{msg.match_id, slot_of(from)}, t);
      out.sends.push_back({neighbor_at(side.sender), fwd});
    }
  } else {
    ++stats_.match_inserts;
    matches_.insert(msg.match_id, MatchEntry{msg.match_id, side.sender}, t);
    if (side.sender != kSelf) {
      out.sends.push_back({neighbor_at(side.sender), fwd});
    } else {
      register_payee_match(msg.seed, msg.match_id);
    }
  }
  note_sizes();
  return out;
}

Effects Node::handle_confirmation(NodeId /*from*/, const ConfirmationMessage& msg, SimTime now) {
  advance(now);
  ++stats_.handler_calls;
  Effects out;
  const SimTime t = resolve_timestamp(msg.timestamp, now);

  ++stats_.confirmation_lookups;
  const auto confirmed = confirmations_.lookup(msg.match_id, t);
  if (confirmed.stale()) {
    drop(out, DropReason::stale);
    return out;
  }

  if (confirmed) {
    // Counter-check pass: pop our own check from the head and pass it on.
    const ConfirmationEntry entry = *confirmed.record;
    if (entry.target == kSelf) return out;
    if (behavior_ == Behavior::refuse_payment) {
      drop(out, DropReason::refused);
      return out;
    }
    if (msg.checks.empty() || msg.checks.front() != entry.check) {
      drop(out, DropReason::check_mismatch);
      return out;
    }
    ConfirmationMessage fwd = msg;
    fwd.checks.erase(fwd.checks.begin());
    out.sends.push_back({neighbor_at(entry.target), std::move(fwd)});
    return out;
  }

  ++stats_.match_lookups;
  const auto matched = matches_.lookup(msg.match_id, t);
  if (!matched) {
    drop(out, DropReason::unknown_match_id);
    return out;
  }
  const MatchEntry match = *matched.record;

  if (match.target != kSelf) {
    if (msg.checks.size() >= 255) {
      drop(out, DropReason::counter_overflow);
      return out;
    }
    const std::uint64_t check = rng_();
    ConfirmationMessage fwd = msg;
    fwd.checks.push_back(check);
    ++stats_.confirmation_inserts;
    confirmations_.insert(msg.match_id, ConfirmationEntry{msg.match_id, match.target, check}, t);
    out.sends.push_back({neighbor_at(match.target), std::move(fwd)});
    note_sizes();
    return out;
  }

  // Payee: first pass reports the list to the payer, second pass releases it.
  const auto seed_it = payee_match_seed_.find(msg.match_id);
  if (seed_it == payee_match_seed_.end()) {
    drop(out, DropReason::no_session);
    return out;
  }
  auto& session = payee_.at(seed_it->second);
  auto& phase = session.phases[msg.match_id];
  if (phase == PayeePhase::matched) {
    phase = PayeePhase::reported;
    out.reports.push_back({session.request.payer, seed_it->second, msg.match_id, msg.checks});
  } else if (phase == PayeePhase::reported) {
    phase = PayeePhase::proceeded;
    out.proceeds.push_back({session.request.payer, seed_it->second, msg.match_id});
  }
  return out;
}

RouteCandidate Node::to_candidate(const PayerSession& s, const SpecialMatchEntry& e) const {
  RouteCandidate c;
  c.match_id = e.match_id;
  c.first_hop = neighbor_at(e.target);
  c.total_counter = e.total_counter;
  c.total_fees = e.total_fees;
  c.fees_payable = 2ULL * s.request.max_fees - e.total_fees;
  c.intermediary_count =
      static_cast<std::uint8_t>(e.total_counter - 2 * s.request.counter_start);
  return c;
}

std::vector<RouteCandidate> Node::candidates(std::uint64_t seed) const {
  std::vector<RouteCandidate> out;
  const auto it = payer_.find(seed);
  if (it == payer_.end()) return out;
  it->second.special.for_each(
      [&](std::uint64_t, const SpecialMatchEntry& e) { out.push_back(to_candidate(it->second, e)); });
  return out;
}

std::optional<RouteCandidate> Node::select_route(std::uint64_t seed,
                                                 const SelectionConfig& selection) const {
  const auto it = payer_.find(seed);
  if (it == payer_.end()) return std::nullopt;
  std::vector<RouteCandidate> pool;
  for (const auto& c : candidates(seed)) {
    if (!it->second.tried.contains(c.match_id)) pool.push_back(c);
  }
  if (pool.empty()) return std::nullopt;

  std::vector<RouteCandidate> compliant;
  for (const auto& c : pool) {
    if (c.intermediary_count >= selection.privacy_floor) compliant.push_back(c);
  }
  const auto& from = compliant.empty() ? pool : compliant;

  auto better = [&](const RouteCandidate& a, const RouteCandidate& b) {
    if (selection.policy == SelectionPolicy::fewest_intermediaries &&
        a.intermediary_count != b.intermediary_count) {
      return a.intermediary_count < b.intermediary_count;
    }
    if (a.total_fees != b.total_fees) return a.total_fees > b.total_fees;
    if (a.intermediary_count != b.intermediary_count) {
      return a.intermediary_count < b.intermediary_count;
    }
    return a.match_id < b.match_id;
  };
  return *std::min_element(from.begin(), from.end(), better);
}

Effects Node::confirm(std::uint64_t seed, const RouteCandidate& route, SimTime now) {
  advance(now);
  Effects out;
  auto& session = payer_.at(seed);
  session.tried.insert(route.match_id);
  session.l0 = random_list(config_.l0_length);
  ConfirmationMessage msg;
  msg.match_id = route.match_id;
  msg.checks = session.l0;
  msg.timestamp = encode_timestamp(session.request.start_time);
  out.sends.push_back({route.first_hop, std::move(msg)});
  return out;
}

CounterVerdict Node::verify_counter_report(std::uint64_t seed,
                                           std::span<const std::uint64_t> reported,
                                           const RouteCandidate& route) const {
  const auto& session = payer_.at(seed);
  const auto appended = static_cast<long long>(reported.size()) -
                        static_cast<long long>(session.l0.size());
  return appended == route.intermediary_count ? CounterVerdict::pass
                                              : CounterVerdict::cheater_detected;
}

Effects Node::counter_check_round(std::uint64_t seed, const RouteCandidate& route,
                                  std::span<const std::uint64_t> verified, SimTime now) {
  advance(now);
  Effects out;
  auto& session = payer_.at(seed);
  session.l1 = random_list(std::max<std::size_t>(1, config_.l1_length));
  ConfirmationMessage msg;
  msg.match_id = route.match_id;
  const auto strip = std::min(session.l0.size(), verified.size());
  msg.checks.assign(verified.begin() + static_cast<std::ptrdiff_t>(strip), verified.end());
  msg.checks.insert(msg.checks.end(), session.l1.begin(), session.l1.end());
  msg.timestamp = encode_timestamp(session.request.start_time);
  out.sends.push_back({route.first_hop, std::move(msg)});
  return out;
}

const std::vector<std::uint64_t>& Node::confirmation_prefix(std::uint64_t seed) const {
  return payer_.at(seed).l0;
}

const std::vector<std::uint64_t>& Node::counter_check_suffix(std::uint64_t seed) const {
  return payer_.at(seed).l1;
}

void Node::finish_payment(std::uint64_t seed) { payer_.erase(seed); }

}  // namespace antroute::protocol
