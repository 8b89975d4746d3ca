#include "antroute/simnet/simulator.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <tuple>
#include <variant>

#include "antroute/protocol/codec.hpp"
#include "antroute/random.hpp"

namespace antroute::simnet {

using protocol::Direction;
using protocol::Effects;
using protocol::Node;
using protocol::PaymentRequest;
using protocol::RouteCandidate;

const char* outcome_name(PaymentOutcome outcome) {
  switch (outcome) {
    case PaymentOutcome::completed: return "completed";
    case PaymentOutcome::no_route: return "no_route";
    case PaymentOutcome::exhausted: return "exhausted";
    case PaymentOutcome::settlement_failed: return "settlement_failed";
    case PaymentOutcome::unroutable_locally: return "unroutable_locally";
    case PaymentOutcome::incomplete: return "incomplete";
    case PaymentOutcome::not_started: return "not_started";
  }
  return "unknown";
}

std::vector<NodeId> MatchTrace::full_path() const {
  std::vector<NodeId> path(payer_leg.rbegin(), payer_leg.rend());
  if (payee_leg.size() > 1) path.insert(path.end(), payee_leg.begin() + 1, payee_leg.end());
  return path;
}

std::vector<PaymentRequest> make_requests(const NetworkConfig& network,
                                          const std::vector<PaymentSpec>& workload) {
  std::mt19937_64 rng(derive_seed(network.rng_seed, 0x5eedULL));
  std::vector<PaymentRequest> out;
  out.reserve(workload.size());
  for (const auto& spec : workload) {
    PaymentRequest r;
    r.payer = spec.payer;
    r.payee = spec.payee;
    r.amount = spec.amount;
    r.max_fees = spec.max_fees;
    r.start_time = spec.start_time;
    r.seed = rng();
    r.counter_start = static_cast<std::uint8_t>(64 + rng() % 64);
    out.push_back(r);
  }
  return out;
}

namespace {

constexpr std::size_t kKindPayeeReport = 3;
constexpr std::size_t kKindProceed = 4;

struct Deliver {
  NodeId from = 0;
  std::vector<std::uint8_t> frame;
};
struct StartPayment {
  std::size_t payment = 0;
};
struct CollectDone {
  std::size_t payment = 0;
};
enum class Phase { pending, collecting, confirming, checking, done };
struct PhaseTimeout {
  std::size_t payment = 0;
  int attempt = 0;
  Phase phase = Phase::confirming;
};
struct ReportArrives {
  protocol::PayeeReport report;
};
struct ProceedArrives {
  protocol::ProceedSignal signal;
};

using Payload =
    std::variant<Deliver, StartPayment, CollectDone, PhaseTimeout, ReportArrives, ProceedArrives>;

struct Event {
  SimTime due{0};
  std::uint64_t seq = 0;
  NodeId target = 0;
  Payload payload;
};

struct Later {
  bool operator()(const Event& a, const Event& b) const {
    return a.due != b.due ? a.due > b.due : a.seq > b.seq;
  }
};

struct PaymentState {
  PaymentRequest request;
  Phase phase = Phase::pending;
  std::optional<RouteCandidate> route;
  std::vector<std::uint64_t> reported;
  int attempt = 0;
};

class Simulation {
 public:
  Simulation(const NetworkConfig& config, const std::vector<PaymentSpec>& workload,
             const FaultConfig& faults, const SimOptions& options)
      : network_(config), faults_(faults), options_(options),
        rng_(derive_seed(config.rng_seed, 0x1a7e9cULL)) {
    if (faults.drop_rate < 0.0 || faults.drop_rate > 1.0) {
      throw ConfigError("drop_rate must lie in [0, 1]");
    }
    for (const auto& spec : config.nodes) {
      nodes_.try_emplace(spec.id, spec.id, spec.fee, network_.neighbors(spec.id),
                         derive_seed(config.rng_seed, spec.id), options.node);
    }
    for (const auto& [id, behavior] : faults.behaviors) {
      auto it = nodes_.find(id);
      if (it == nodes_.end()) throw ConfigError("fault config names unknown node " + std::to_string(id));
      it->second.set_behavior(behavior);
    }

    const auto requests = make_requests(config, workload);
    states_.resize(requests.size());
    metrics_.payments.resize(requests.size());
    for (std::size_t i = 0; i < requests.size(); ++i) {
      const auto& r = requests[i];
      const std::string where = "payment #" + std::to_string(i);
      if (!network_.has_node(r.payer)) throw ConfigError(where + ": unknown payer " + std::to_string(r.payer));
      if (!network_.has_node(r.payee)) throw ConfigError(where + ": unknown payee " + std::to_string(r.payee));
      if (r.start_time < SimTime{0} || r.start_time >= options.horizon) {
        throw ConfigError(where + ": start_time must lie in [0, horizon)");
      }
      try {
        protocol::validate(r);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
      }
      states_[i].request = r;
      auto& m = metrics_.payments[i];
      m.index = i;
      m.payer = r.payer;
      m.payee = r.payee;
      m.amount = r.amount;
      m.max_fees = r.max_fees;
      m.seed = r.seed;
      m.counter_start = r.counter_start;
      m.start_time = r.start_time;
      by_seed_[r.seed] = i;
      schedule(r.start_time, r.payer, StartPayment{i});
    }
  }

  RunResult run() {
    while (!queue_.empty() && queue_.top().due <= options_.horizon) {
      Event ev = queue_.top();
      queue_.pop();
      now_ = ev.due;
      ++metrics_.events_processed;
      std::visit([&](auto& p) { handle(ev.target, p); }, ev.payload);
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
      if (states_[i].phase != Phase::done && states_[i].phase != Phase::pending) {
        metrics_.payments[i].outcome = PaymentOutcome::incomplete;
      }
    }
    metrics_.end_time = now_;
    for (const auto& [id, node] : nodes_) metrics_.nodes.push_back({id, node.stats()});
    for (const auto& [key, count] : edge_traversals_) {
      metrics_.max_pheromone_edge_traversals =
          std::max<std::uint64_t>(metrics_.max_pheromone_edge_traversals, count);
    }
    RunResult result;
    result.metrics = std::move(metrics_);
    result.final_channels = network_.channels();
    result.traces = std::move(traces_);
    return result;
  }

 private:
  template <typename P>
  void schedule(SimTime due, NodeId target, P payload) {
    queue_.push(Event{due, seq_++, target, Payload{std::move(payload)}});
  }

  SimTime draw_latency() {
    const auto& lat = network_.config().latency;
    if (lat.mode == LatencyMode::constant || lat.spread == SimTime{0}) return lat.base;
    std::uniform_int_distribution<std::int64_t> jitter(0, lat.spread.count());
    return lat.base + SimTime{jitter(rng_)};
  }

  bool lost() {
    if (faults_.drop_rate <= 0.0) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < faults_.drop_rate;
  }

  void apply(NodeId at, Effects&& fx) {
    for (const auto& created : fx.matches_created) {
      MatchTrace t;
      t.seed = created.seed;
      t.match_id = created.match_id;
      t.match_node = at;
      t.total_counter = created.total_counter;
      t.total_fees = created.total_fees;
      t.payer_leg = {at};
      t.payee_leg = {at};
      traces_[created.match_id] = std::move(t);
    }
    for (const auto& stored : fx.candidates_stored) on_candidate(stored);
    for (auto& out : fx.sends) {
      if (lost()) {
        ++metrics_.link_drops;
        continue;
      }
      schedule(now_ + draw_latency(), out.to, Deliver{at, protocol::encode(out.message)});
    }
    for (auto& r : fx.reports) schedule(now_ + draw_latency(), r.payer, ReportArrives{std::move(r)});
    for (auto& p : fx.proceeds) schedule(now_ + draw_latency(), p.payer, ProceedArrives{p});
  }

  void on_candidate(const protocol::CandidateStored& stored) {
    const auto it = by_seed_.find(stored.seed);
    if (it == by_seed_.end()) return;
    auto& m = metrics_.payments[it->second];
    ++m.candidates;
    if (!m.first_match_latency) m.first_match_latency = now_ - m.start_time;
    auto trace = traces_.find(stored.match_id);
    if (trace != traces_.end()) {
      trace->second.delivered_to_payer = true;
      const int inter =
          static_cast<std::uint8_t>(trace->second.total_counter - 2 * m.counter_start);
      const int hops = inter + 1;
      if (!m.min_candidate_hops || hops < *m.min_candidate_hops) m.min_candidate_hops = hops;
    }
  }

  void handle(NodeId target, Deliver& d) {
    metrics_.bytes_sent += d.frame.size();
    protocol::Message msg;
    try {
      msg = protocol::decode(d.frame);
    } catch (const protocol::DecodeError&) {
      ++metrics_.decode_errors;
      return;
    }
    ++metrics_.messages_by_kind[static_cast<std::size_t>(protocol::kind_of(msg)) - 1];
    if (const auto* p = std::get_if<protocol::PheromoneMessage>(&msg)) {
      ++edge_traversals_[{p->seed, static_cast<int>(p->direction), d.from, target}];
    } else if (const auto* m = std::get_if<protocol::MatchMessage>(&msg)) {
      auto it = traces_.find(m->match_id);
      if (it != traces_.end()) {
        auto& leg = m->direction == Direction::payer ? it->second.payer_leg : it->second.payee_leg;
        leg.push_back(target);
      }
    } else {
      const auto& c = std::get<protocol::ConfirmationMessage>(msg);
      auto it = confirming_.find(c.match_id);
      if (it != confirming_.end() && states_[it->second].phase == Phase::confirming) {
        confirmation_paths_[c.match_id].push_back(target);
      }
    }
    apply(target, nodes_.at(target).receive(d.from, msg, now_, network_));
  }

  void handle(NodeId, StartPayment& s) {
    auto& st = states_[s.payment];
    const auto& r = st.request;
    st.phase = Phase::collecting;
    auto payer = nodes_.at(r.payer).originate(r, Direction::payer, now_, network_);
    auto payee = nodes_.at(r.payee).originate(r, Direction::payee, now_, network_);
    apply(r.payer, std::move(payer.effects));
    apply(r.payee, std::move(payee.effects));
    if (payer.status == protocol::OriginateStatus::unroutable_locally) {
      finish(s.payment, PaymentOutcome::unroutable_locally);
      return;
    }
    schedule(now_ + options_.collect_window, r.payer, CollectDone{s.payment});
  }

  void handle(NodeId, CollectDone& c) {
    if (states_[c.payment].phase == Phase::collecting) attempt_next(c.payment);
  }

  void handle(NodeId, PhaseTimeout& t) {
    auto& st = states_[t.payment];
    if (st.phase != t.phase || st.attempt != t.attempt) return;
    ++metrics_.payments[t.payment].timeouts;
    attempt_next(t.payment);
  }

  void handle(NodeId target, ReportArrives& r) {
    ++metrics_.messages_by_kind[kKindPayeeReport];
    const auto it = by_seed_.find(r.report.seed);
    if (it == by_seed_.end()) return;
    const std::size_t i = it->second;
    auto& st = states_[i];
    if (st.phase != Phase::confirming || !st.route || st.route->match_id != r.report.match_id) return;
    auto& payer = nodes_.at(target);
    if (payer.verify_counter_report(st.request.seed, r.report.checks, *st.route) ==
        protocol::CounterVerdict::cheater_detected) {
      ++metrics_.payments[i].cheater_detections;
      attempt_next(i);
      return;
    }
    st.reported = r.report.checks;
    st.phase = Phase::checking;
    apply(target, payer.counter_check_round(st.request.seed, *st.route, st.reported, now_));
    schedule(now_ + options_.phase_timeout, target, PhaseTimeout{i, st.attempt, Phase::checking});
  }

  void handle(NodeId, ProceedArrives& p) {
    ++metrics_.messages_by_kind[kKindProceed];
    const auto it = by_seed_.find(p.signal.seed);
    if (it == by_seed_.end()) return;
    const std::size_t i = it->second;
    auto& st = states_[i];
    if (st.phase != Phase::checking || !st.route || st.route->match_id != p.signal.match_id) return;
    auto& m = metrics_.payments[i];
    m.route_found = true;
    std::vector<NodeId> path{st.request.payer};
    const auto& hops = confirmation_paths_[p.signal.match_id];
    path.insert(path.end(), hops.begin(), hops.end());
    m.path = path;
    m.path_length = static_cast<int>(path.size());
    const auto settled = settle_payment(network_, path, st.request.amount);
    if (settled.settled) {
      m.fees_paid = settled.fees_paid;
      finish(i, PaymentOutcome::completed);
    } else {
      finish(i, PaymentOutcome::settlement_failed);
    }
  }

  void attempt_next(std::size_t i) {
    auto& st = states_[i];
    auto& m = metrics_.payments[i];
    auto& payer = nodes_.at(st.request.payer);
    payer.advance(now_);
    const auto route = payer.select_route(st.request.seed, options_.selection);
    if (!route) {
      finish(i, m.candidates == 0 ? PaymentOutcome::no_route : PaymentOutcome::exhausted);
      return;
    }
    ++st.attempt;
    ++m.attempts;
    st.route = route;
    st.phase = Phase::confirming;
    m.selected_match_id = route->match_id;
    confirming_[route->match_id] = i;
    confirmation_paths_[route->match_id].clear();
    apply(st.request.payer, payer.confirm(st.request.seed, *route, now_));
    schedule(now_ + options_.phase_timeout, st.request.payer,
             PhaseTimeout{i, st.attempt, Phase::confirming});
  }

  void finish(std::size_t i, PaymentOutcome outcome) {
    states_[i].phase = Phase::done;
    metrics_.payments[i].outcome = outcome;
    nodes_.at(states_[i].request.payer).finish_payment(states_[i].request.seed);
  }

  SimNetwork network_;
  FaultConfig faults_;
  SimOptions options_;
  std::mt19937_64 rng_;
  std::map<NodeId, Node> nodes_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  SimTime now_{0};
  std::uint64_t seq_ = 0;

  std::vector<PaymentState> states_;
  RunMetrics metrics_;
  std::map<std::uint64_t, std::size_t> by_seed_;
  std::map<std::uint64_t, MatchTrace> traces_;
  std::map<std::uint64_t, std::size_t> confirming_;
  std::map<std::uint64_t, std::vector<NodeId>> confirmation_paths_;
  std::map<std::tuple<std::uint64_t, int, NodeId, NodeId>, std::uint64_t> edge_traversals_;
};

}  // namespace

RunResult run(const NetworkConfig& network, const std::vector<PaymentSpec>& workload,
              const FaultConfig& faults, const SimOptions& options) {
  return Simulation(network, workload, faults, options).run();
}

}  // namespace antroute::simnet
