#include "antroute/simnet/report.hpp"

#include <fstream>
#include <sstream>

#include "antroute/version.hpp"

namespace antroute::simnet {

using nlohmann::ordered_json;

const char* const kPaymentColumns =
    "index,payer,payee,amount,f_max,seed,counter_start,start_time_us,outcome,route_found,"
    "path_length,fees_paid,first_match_latency_us,candidates,min_candidate_hops,attempts,"
    "cheater_detections,timeouts,selected_match_id,path";

std::string node_columns() {
  std::string cols =
      "id,handler_calls,pheromone_lookups,pheromone_inserts,match_lookups,match_inserts,"
      "confirmation_lookups,confirmation_inserts,expired_records,peak_pheromone_records,"
      "peak_match_records,peak_confirmation_records";
  for (std::size_t i = 0; i < protocol::kDropReasonCount; ++i) {
    cols += ",drop_";
    cols += protocol::drop_reason_name(static_cast<protocol::DropReason>(i));
  }
  return cols;
}

namespace {

std::string join_path(const std::vector<NodeId>& path) {
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '-';
    s += std::to_string(path[i]);
  }
  return s;
}

template <typename T>
std::string opt_field(const std::optional<T>& v) {
  return v ? std::to_string(*v) : std::string{};
}

std::string opt_us(const std::optional<SimTime>& v) {
  return v ? std::to_string(v->count()) : std::string{};
}

template <typename T>
ordered_json opt_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

ordered_json node_json(const NodeMetrics& n) {
  const auto& s = n.stats;
  ordered_json drops;
  for (std::size_t i = 0; i < protocol::kDropReasonCount; ++i) {
    drops[protocol::drop_reason_name(static_cast<protocol::DropReason>(i))] = s.drops[i];
  }
  return {{"id", n.id},
          {"handler_calls", s.handler_calls},
          {"pheromone_lookups", s.pheromone_lookups},
          {"pheromone_inserts", s.pheromone_inserts},
          {"match_lookups", s.match_lookups},
          {"match_inserts", s.match_inserts},
          {"confirmation_lookups", s.confirmation_lookups},
          {"confirmation_inserts", s.confirmation_inserts},
          {"expired_records", s.expired_records},
          {"peak_pheromone_records", s.peak_pheromone_records},
          {"peak_match_records", s.peak_match_records},
          {"peak_confirmation_records", s.peak_confirmation_records},
          {"drops", std::move(drops)}};
}

ordered_json payment_json(const PaymentMetrics& p) {
  return {{"index", p.index},
          {"payer", p.payer},
          {"payee", p.payee},
          {"amount", p.amount},
          {"f_max", p.max_fees},
          {"seed", p.seed},
          {"counter_start", p.counter_start},
          {"start_time_us", p.start_time.count()},
          {"outcome", outcome_name(p.outcome)},
          {"route_found", p.route_found},
          {"path_length", p.path_length},
          {"fees_paid", p.fees_paid},
          {"first_match_latency_us",
           p.first_match_latency ? ordered_json(p.first_match_latency->count()) : ordered_json(nullptr)},
          {"candidates", p.candidates},
          {"min_candidate_hops", opt_json(p.min_candidate_hops)},
          {"attempts", p.attempts},
          {"cheater_detections", p.cheater_detections},
          {"timeouts", p.timeouts},
          {"selected_match_id", opt_json(p.selected_match_id)},
          {"path", p.path}};
}

}  // namespace

ordered_json report_json(const NetworkConfig& network, const WorkloadConfig& workload,
                         const RunResult& result) {
  const auto& m = result.metrics;
  ordered_json j;
  j["version"] = kVersion;
  j["rng_seed"] = network.rng_seed;
  j["config"] = {{"network", network_to_json(network)}, {"workload", workload_to_json(workload)}};

  std::size_t completed = 0;
  for (const auto& p : m.payments) completed += p.outcome == PaymentOutcome::completed;
  ordered_json kinds;
  for (std::size_t i = 0; i < kMessageKinds.size(); ++i) kinds[kMessageKinds[i]] = m.messages_by_kind[i];
  j["summary"] = {{"payments", m.payments.size()},
                  {"completed", completed},
                  {"messages_by_kind", std::move(kinds)},
                  {"bytes_sent", m.bytes_sent},
                  {"link_drops", m.link_drops},
                  {"decode_errors", m.decode_errors},
                  {"max_pheromone_edge_traversals", m.max_pheromone_edge_traversals},
                  {"events_processed", m.events_processed},
                  {"end_time_us", m.end_time.count()}};

  ordered_json payments = ordered_json::array();
  for (const auto& p : m.payments) payments.push_back(payment_json(p));
  j["payments"] = std::move(payments);
  ordered_json nodes = ordered_json::array();
  for (const auto& n : m.nodes) nodes.push_back(node_json(n));
  j["nodes"] = std::move(nodes);
  ordered_json channels = ordered_json::array();
  for (const auto& c : result.final_channels) {
    channels.push_back(
        {{"a", c.a}, {"b", c.b}, {"balance_ab", c.balance_ab}, {"balance_ba", c.balance_ba}});
  }
  j["final_channels"] = std::move(channels);
  return j;
}

std::string payments_csv(const RunResult& result) {
  std::ostringstream out;
  out << kPaymentColumns << '\n';
  for (const auto& p : result.metrics.payments) {
    out << p.index << ',' << p.payer << ',' << p.payee << ',' << p.amount << ',' << p.max_fees << ','
        << p.seed << ',' << static_cast<int>(p.counter_start) << ',' << p.start_time.count() << ','
        << outcome_name(p.outcome) << ',' << (p.route_found ? 1 : 0) << ',' << p.path_length << ','
        << p.fees_paid << ',' << opt_us(p.first_match_latency) << ',' << p.candidates << ','
        << opt_field(p.min_candidate_hops) << ',' << p.attempts << ',' << p.cheater_detections << ','
        << p.timeouts << ',' << opt_field(p.selected_match_id) << ',' << join_path(p.path) << '\n';
  }
  return out.str();
}

std::string nodes_csv(const RunResult& result) {
  std::ostringstream out;
  out << node_columns() << '\n';
  for (const auto& n : result.metrics.nodes) {
    const auto& s = n.stats;
    out << n.id << ',' << s.handler_calls << ',' << s.pheromone_lookups << ',' << s.pheromone_inserts
        << ',' << s.match_lookups << ',' << s.match_inserts << ',' << s.confirmation_lookups << ','
        << s.confirmation_inserts << ',' << s.expired_records << ',' << s.peak_pheromone_records
        << ',' << s.peak_match_records << ',' << s.peak_confirmation_records;
    for (auto d : s.drops) out << ',' << d;
    out << '\n';
  }
  return out.str();
}

void write_reports(const std::filesystem::path& dir, const NetworkConfig& network,
                   const WorkloadConfig& workload, const RunResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const char* name, const std::string& text) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << text;
  };
  write("report.json", report_json(network, workload, result).dump(2) + "\n");
  write("payments.csv", payments_csv(result));
  write("nodes.csv", nodes_csv(result));
}

}  // namespace antroute::simnet
