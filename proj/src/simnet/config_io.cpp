#include "antroute/simnet/config_io.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "antroute/simnet/generators.hpp"

namespace antroute::simnet {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// Typed field access with path-qualified errors and unknown-key rejection.
class Fields {
 public:
  Fields(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(label() + "expected an object");
  }

  bool has(const char* key) const { return j_.contains(key); }

  const json& at(const char* key) {
    used_.insert(key);
    if (!j_.contains(key)) throw ConfigError(path(key) + ": missing required field");
    return j_.at(key);
  }

  std::uint64_t u64(const char* key) {
    const json& v = at(key);
    if (!v.is_number_unsigned()) throw ConfigError(path(key) + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::uint64_t u64(const char* key, std::uint64_t fallback) {
    return has(key) ? u64(key) : fallback;
  }

  std::uint32_t u32(const char* key) {
    const auto v = u64(key);
    if (v > std::numeric_limits<std::uint32_t>::max()) {
      throw ConfigError(path(key) + ": value exceeds 32 bits");
    }
    return static_cast<std::uint32_t>(v);
  }
  std::uint32_t u32(const char* key, std::uint32_t fallback) {
    return has(key) ? u32(key) : fallback;
  }

  double number(const char* key) {
    const json& v = at(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    return v.get<double>();
  }
  double number(const char* key, double fallback) { return has(key) ? number(key) : fallback; }

  SimTime seconds(const char* key, SimTime fallback) {
    if (!has(key)) return fallback;
    const double s = number(key);
    if (s < 0) throw ConfigError(path(key) + ": must be non-negative");
    return from_seconds(s);
  }

  std::string text(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  const json& array(const char* key) {
    const json& v = at(key);
    if (!v.is_array()) throw ConfigError(path(key) + ": expected an array");
    return v;
  }

  void done() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.contains(key)) throw ConfigError(path(key.c_str()) + ": unknown field");
    }
  }

  std::string path(const char* key) const { return where_.empty() ? key : where_ + "." + key; }

 private:
  std::string label() const { return where_.empty() ? "" : where_ + ": "; }

  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

std::string indexed(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

LatencyModel parse_latency(const json& j, const std::string& where) {
  Fields f(j, where);
  LatencyModel m;
  const auto mode = f.text("mode", "constant");
  if (mode == "constant") {
    m.mode = LatencyMode::constant;
  } else if (mode == "uniform") {
    m.mode = LatencyMode::uniform;
  } else {
    throw ConfigError(f.path("mode") + ": expected \"constant\" or \"uniform\"");
  }
  const double base = f.number("base_ms", 10.0);
  const double spread = f.number("spread_ms", 0.0);
  if (base < 0 || spread < 0) throw ConfigError(where + ": latency must be non-negative");
  m.base = from_seconds(base / 1000.0);
  m.spread = from_seconds(spread / 1000.0);
  f.done();
  return m;
}

}  // namespace

protocol::Behavior parse_behavior(const std::string& name) {
  if (name == "honest") return protocol::Behavior::honest;
  if (name == "counter_decrement") return protocol::Behavior::counter_decrement;
  if (name == "refuse_payment") return protocol::Behavior::refuse_payment;
  throw ConfigError("unknown behavior \"" + name + "\"");
}

const char* behavior_name(protocol::Behavior b) {
  switch (b) {
    case protocol::Behavior::honest: return "honest";
    case protocol::Behavior::counter_decrement: return "counter_decrement";
    case protocol::Behavior::refuse_payment: return "refuse_payment";
  }
  return "unknown";
}

protocol::SelectionPolicy parse_policy(const std::string& name) {
  if (name == "max_remaining_fees") return protocol::SelectionPolicy::max_remaining_fees;
  if (name == "fewest_intermediaries") return protocol::SelectionPolicy::fewest_intermediaries;
  throw ConfigError("unknown selection policy \"" + name + "\"");
}

const char* policy_name(protocol::SelectionPolicy p) {
  switch (p) {
    case protocol::SelectionPolicy::max_remaining_fees: return "max_remaining_fees";
    case protocol::SelectionPolicy::fewest_intermediaries: return "fewest_intermediaries";
  }
  return "unknown";
}

NetworkConfig parse_network(const json& doc) {
  Fields root(doc, "");
  NetworkConfig config;
  config.rng_seed = root.u64("rng_seed", 1);
  if (root.has("latency")) config.latency = parse_latency(root.at("latency"), "latency");

  if (root.has("generator")) {
    if (root.has("nodes") || root.has("channels")) {
      throw ConfigError("generator: cannot be combined with explicit nodes/channels");
    }
    Fields g(root.at("generator"), "generator");
    RandomGraphSpec spec;
    spec.node_count = static_cast<int>(g.u32("node_count"));
    spec.extra_edge_probability = g.number("extra_edge_probability", spec.extra_edge_probability);
    spec.fee_min = g.u32("fee_min", spec.fee_min);
    spec.fee_max = g.u32("fee_max", spec.fee_max);
    spec.balance_min = g.u32("balance_min", static_cast<std::uint32_t>(spec.balance_min));
    spec.balance_max = g.u32("balance_max", static_cast<std::uint32_t>(spec.balance_max));
    g.done();
    spec.latency = config.latency;
    spec.rng_seed = config.rng_seed;
    root.done();
    auto generated = random_connected_network(spec);
    validate(generated);
    return generated;
  }

  const json& nodes = root.array("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    Fields n(nodes[i], indexed("nodes", i));
    config.nodes.push_back({n.u32("id"), n.u32("fee", 0)});
    n.done();
  }
  const json& channels = root.array("channels");
  for (std::size_t i = 0; i < channels.size(); ++i) {
    Fields c(channels[i], indexed("channels", i));
    Channel ch;
    ch.a = c.u32("a");
    ch.b = c.u32("b");
    ch.balance_ab = c.u32("balance_ab");
    ch.balance_ba = c.u32("balance_ba");
    c.done();
    config.channels.push_back(ch);
  }
  root.done();
  validate(config);
  return config;
}

WorkloadConfig parse_workload(const json& doc, const NetworkConfig& network) {
  Fields root(doc, "");
  WorkloadConfig out;

  if (root.has("options")) {
    Fields o(root.at("options"), "options");
    auto& opt = out.options;
    opt.horizon = o.seconds("horizon", opt.horizon);
    opt.collect_window = o.seconds("collect_window", opt.collect_window);
    opt.phase_timeout = o.seconds("phase_timeout", opt.phase_timeout);
    opt.node.seed_lifetime = o.seconds("seed_lifetime", opt.node.seed_lifetime);
    opt.node.l0_length = o.u32("l0_length", static_cast<std::uint32_t>(opt.node.l0_length));
    opt.node.l1_length = o.u32("l1_length", static_cast<std::uint32_t>(opt.node.l1_length));
    const auto delta = o.u32("cheat_delta", opt.node.cheat_delta);
    if (delta > 255) throw ConfigError("options.cheat_delta: must fit in one byte");
    opt.node.cheat_delta = static_cast<std::uint8_t>(delta);
    if (o.has("policy")) opt.selection.policy = parse_policy(o.text("policy", ""));
    opt.selection.privacy_floor = static_cast<int>(
        o.u32("privacy_floor", static_cast<std::uint32_t>(opt.selection.privacy_floor)));
    o.done();
    if (opt.node.seed_lifetime <= SimTime{0} || opt.node.seed_lifetime % kBucketWidth != SimTime{0}) {
      throw ConfigError("options.seed_lifetime: must be a positive multiple of 0.1 s");
    }
    if (opt.horizon <= SimTime{0}) throw ConfigError("options.horizon: must be positive");
  }

  if (root.has("faults")) {
    Fields f(root.at("faults"), "faults");
    out.faults.drop_rate = f.number("drop_rate", 0.0);
    if (out.faults.drop_rate < 0.0 || out.faults.drop_rate > 1.0) {
      throw ConfigError("faults.drop_rate: must lie in [0, 1]");
    }
    if (f.has("nodes")) {
      const json& list = f.array("nodes");
      for (std::size_t i = 0; i < list.size(); ++i) {
        const auto where = indexed("faults.nodes", i);
        Fields n(list[i], where);
        const NodeId id = n.u32("id");
        try {
          out.faults.behaviors[id] = parse_behavior(n.text("mode", ""));
        } catch (const ConfigError& e) {
          throw ConfigError(where + ".mode: " + e.what());
        }
        n.done();
      }
    }
    f.done();
  }

  if (root.has("generator")) {
    if (root.has("payments")) throw ConfigError("generator: cannot be combined with payments");
    Fields g(root.at("generator"), "generator");
    PoissonWorkloadSpec spec;
    spec.rate = g.number("rate");
    spec.duration = g.seconds("duration", spec.duration);
    spec.amount_min = g.u32("amount_min", spec.amount_min);
    spec.amount_max = g.u32("amount_max", spec.amount_max);
    spec.max_fees = g.u32("f_max", spec.max_fees);
    g.done();
    std::vector<NodeId> ids;
    for (const auto& n : network.nodes) ids.push_back(n.id);
    out.payments = poisson_workload(spec, ids, network.rng_seed);
  } else {
    const json& list = root.array("payments");
    for (std::size_t i = 0; i < list.size(); ++i) {
      Fields p(list[i], indexed("payments", i));
      PaymentSpec s;
      s.payer = p.u32("payer");
      s.payee = p.u32("payee");
      s.amount = p.u32("amount");
      s.max_fees = p.u32("f_max");
      s.start_time = p.seconds("start_time", SimTime{0});
      p.done();
      out.payments.push_back(s);
    }
  }
  root.done();
  return out;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

NetworkConfig load_network(const std::filesystem::path& path) {
  try {
    return parse_network(read_json_file(path));
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw ConfigError(path.string() + ": " + what);
  }
}

WorkloadConfig load_workload(const std::filesystem::path& path, const NetworkConfig& network) {
  try {
    return parse_workload(read_json_file(path), network);
  } catch (const ConfigError& e) {
    const std::string what = e.what();
    if (what.rfind(path.string(), 0) == 0) throw;
    throw ConfigError(path.string() + ": " + what);
  }
}

ordered_json network_to_json(const NetworkConfig& network) {
  ordered_json j;
  j["rng_seed"] = network.rng_seed;
  j["latency"] = {
      {"mode", network.latency.mode == LatencyMode::constant ? "constant" : "uniform"},
      {"base_ms", to_seconds(network.latency.base) * 1000.0},
      {"spread_ms", to_seconds(network.latency.spread) * 1000.0},
  };
  ordered_json nodes = ordered_json::array();
  for (const auto& n : network.nodes) nodes.push_back({{"id", n.id}, {"fee", n.fee}});
  j["nodes"] = std::move(nodes);
  ordered_json channels = ordered_json::array();
  for (const auto& c : network.channels) {
    channels.push_back(
        {{"a", c.a}, {"b", c.b}, {"balance_ab", c.balance_ab}, {"balance_ba", c.balance_ba}});
  }
  j["channels"] = std::move(channels);
  return j;
}

ordered_json workload_to_json(const WorkloadConfig& workload) {
  const auto& opt = workload.options;
  ordered_json j;
  j["options"] = {
      {"horizon", to_seconds(opt.horizon)},
      {"collect_window", to_seconds(opt.collect_window)},
      {"phase_timeout", to_seconds(opt.phase_timeout)},
      {"seed_lifetime", to_seconds(opt.node.seed_lifetime)},
      {"l0_length", opt.node.l0_length},
      {"l1_length", opt.node.l1_length},
      {"cheat_delta", opt.node.cheat_delta},
      {"policy", policy_name(opt.selection.policy)},
      {"privacy_floor", opt.selection.privacy_floor},
  };
  ordered_json nodes = ordered_json::array();
  for (const auto& [id, b] : workload.faults.behaviors) {
    nodes.push_back({{"id", id}, {"mode", behavior_name(b)}});
  }
  j["faults"] = {{"drop_rate", workload.faults.drop_rate}, {"nodes", std::move(nodes)}};
  ordered_json payments = ordered_json::array();
  for (const auto& p : workload.payments) {
    payments.push_back({{"payer", p.payer},
                        {"payee", p.payee},
                        {"amount", p.amount},
                        {"f_max", p.max_fees},
                        {"start_time", to_seconds(p.start_time)}});
  }
  j["payments"] = std::move(payments);
  return j;
}

}  // namespace antroute::simnet
