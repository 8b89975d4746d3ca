#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "antroute/capacity/capacity.hpp"
#include "antroute/csv.hpp"
#include "antroute/reproduce.hpp"
#include "antroute/scaling/benchmark.hpp"
#include "antroute/scaling/model.hpp"
#include "antroute/simnet/batch.hpp"
#include "antroute/simnet/config_io.hpp"
#include "antroute/simnet/report.hpp"
#include "antroute/version.hpp"

namespace {

using namespace antroute;
using nlohmann::json;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kConfig = 2;
constexpr int kCheckFailed = 3;

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct SimulateArgs {
  std::string network;
  std::string workload;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> latency_ms;
  std::optional<double> eta;
  std::optional<std::size_t> l0;
  std::optional<std::size_t> l1;
  std::optional<std::string> policy;
  std::optional<double> horizon;
  int batch = 1;
};

struct Loaded {
  simnet::NetworkConfig network;
  simnet::WorkloadConfig workload;
};

Loaded load(const SimulateArgs& a, std::optional<std::uint64_t> seed) {
  json net = simnet::read_json_file(a.network);
  if (!net.is_object()) throw simnet::ConfigError(a.network + ": expected an object");
  if (seed) net["rng_seed"] = *seed;
  if (a.latency_ms) net["latency"]["base_ms"] = *a.latency_ms;
  Loaded out;
  try {
    out.network = simnet::parse_network(net);
  } catch (const simnet::ConfigError& e) {
    throw simnet::ConfigError(a.network + ": " + e.what());
  }
  json work = simnet::read_json_file(a.workload);
  if (!work.is_object()) throw simnet::ConfigError(a.workload + ": expected an object");
  if (a.eta) work["options"]["seed_lifetime"] = *a.eta;
  if (a.l0) work["options"]["l0_length"] = *a.l0;
  if (a.l1) work["options"]["l1_length"] = *a.l1;
  if (a.policy) work["options"]["policy"] = *a.policy;
  if (a.horizon) work["options"]["horizon"] = *a.horizon;
  try {
    out.workload = simnet::parse_workload(work, out.network);
  } catch (const simnet::ConfigError& e) {
    throw simnet::ConfigError(a.workload + ": " + e.what());
  }
  return out;
}

bool all_attempted(const simnet::RunResult& r) {
  for (const auto& p : r.metrics.payments) {
    if (p.outcome == simnet::PaymentOutcome::not_started) return false;
  }
  return true;
}

int simulate(const SimulateArgs& a) {
  if (a.batch < 1) throw CLI::ValidationError("--batch", "must be at least 1");
  if (a.batch == 1) {
    const auto cfg = load(a, a.seed);
    const auto result = simnet::run(cfg.network, cfg.workload.payments, cfg.workload.faults,
                                    cfg.workload.options);
    simnet::write_reports(a.out, cfg.network, cfg.workload, result);
    std::size_t completed = 0;
    for (const auto& p : result.metrics.payments) completed += p.outcome == simnet::PaymentOutcome::completed;
    std::cout << "payments=" << result.metrics.payments.size() << " completed=" << completed
              << " rng_seed=" << cfg.network.rng_seed << " out=" << a.out << '\n';
    return all_attempted(result) ? kOk : kUsage;
  }

  std::uint64_t base = a.seed.value_or(0);
  std::vector<Loaded> configs;
  std::vector<simnet::Scenario> scenarios;
  for (int i = 0; i < a.batch; ++i) {
    auto seed = a.seed ? std::optional(base + static_cast<std::uint64_t>(i)) : std::nullopt;
    if (!a.seed) {
      // vary around the file's own seed
      const auto first = load(a, std::nullopt);
      seed = first.network.rng_seed + static_cast<std::uint64_t>(i);
    }
    configs.push_back(load(a, seed));
    const auto& c = configs.back();
    scenarios.push_back({c.network, c.workload.payments, c.workload.faults, c.workload.options});
  }
  const auto results = simnet::run_batch_parallel(scenarios);
  bool ok = true;
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto dir = std::filesystem::path(a.out) / ("seed-" + std::to_string(configs[i].network.rng_seed));
    simnet::write_reports(dir, configs[i].network, configs[i].workload, results[i]);
    ok = ok && all_attempted(results[i]);
  }
  std::cout << "runs=" << results.size() << " out=" << a.out << '\n';
  return ok ? kOk : kUsage;
}

struct CapacityArgs {
  std::string preset;
  std::optional<double> block_max, tx_size, interblock;
  std::string unit = "B";
  std::optional<double> mempool, data_per_tx, lifetime;
  std::optional<double> reach;
  std::optional<std::uint64_t> nodes;
};

void print_capacity_rows(const std::vector<capacity::CapacityRow>& rows) {
  std::cout << "preset,label,formula,tx_per_s,tx_per_s_2dp,reference,relative_error,pass,note\n";
  for (const auto& r : rows) {
    std::cout << r.preset << ',' << csv_field(r.label) << ',' << csv_field(r.formula) << ','
              << num(r.value) << ','
              << capacity::format_fixed(r.value) << ',' << capacity::format_fixed(r.expected) << ','
              << num(r.relative_error()) << ',' << (r.pass() ? "pass" : "FAIL") << ','
              << csv_field(r.note) << '\n';
  }
}

int run_capacity(const CapacityArgs& a) {
  if (!a.preset.empty()) {
    print_capacity_rows(a.preset == "all" ? capacity::evaluate_all_presets()
                                          : capacity::evaluate_preset(a.preset));
    return kOk;
  }
  if (a.block_max || a.tx_size || a.interblock) {
    if (!(a.block_max && a.tx_size && a.interblock)) {
      throw CLI::ValidationError("capacity", "--block-max, --tx-size and --interblock-time go together");
    }
    const double v = capacity::chain_capacity({*a.block_max, *a.tx_size, *a.interblock, a.unit});
    std::cout << "block_max,tx_size,interblock_time,unit,tx_per_s,tx_per_s_2dp\n"
              << num(*a.block_max) << ',' << num(*a.tx_size) << ',' << num(*a.interblock) << ',' << a.unit
              << ',' << num(v) << ',' << capacity::format_fixed(v) << '\n';
    return kOk;
  }
  if (a.mempool || a.data_per_tx || a.lifetime) {
    if (!(a.mempool && a.data_per_tx && a.lifetime)) {
      throw CLI::ValidationError("capacity", "--mempool, --data-per-tx and --lifetime go together");
    }
    const double v = capacity::ant_routing_capacity({*a.mempool, *a.data_per_tx, *a.lifetime});
    std::cout << "mempool_max,data_per_tx,seed_lifetime,tx_per_s,tx_per_s_2dp\n"
              << num(*a.mempool) << ',' << num(*a.data_per_tx) << ',' << num(*a.lifetime) << ',' << num(v)
              << ',' << capacity::format_fixed(v) << '\n';
    return kOk;
  }
  if (a.reach || a.nodes) {
    if (!(a.reach && a.nodes)) throw CLI::ValidationError("capacity", "--reach and --nodes go together");
    std::cout << "reach_fraction,n_nodes,match_probability\n"
              << num(*a.reach) << ',' << *a.nodes << ',' << num(capacity::match_probability(*a.reach, *a.nodes))
              << '\n';
    return kOk;
  }
  throw CLI::ValidationError("capacity", "give --preset or a full parameter set");
}

void add_model_options(CLI::App* cmd, scaling::ScalingParams& p) {
  cmd->add_option("--alpha", p.alpha, "lookup seconds per log2 unit")->capture_default_str();
  cmd->add_option("--beta", p.beta, "insert seconds per log2 unit")->capture_default_str();
  cmd->add_option("--gamma", p.gamma, "deletion seconds per node")->capture_default_str();
  cmd->add_option("-p,--lookups", p.lookups_per_task, "lookups per task")->capture_default_str();
  cmd->add_option("-m,--matches", p.matches_per_task, "matches per task")->capture_default_str();
  cmd->add_option("-c,--confirm", p.confirm_probability, "confirmation probability")->capture_default_str();
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoull(item));
  return out;
}

int run_bench(const scaling::BenchmarkConfig& cfg) {
  const auto r = scaling::benchmark_constants(cfg);
  std::cout << "size,lookup_s,insert_s,delete_s,deletion_trials\n";
  for (const auto& s : r.samples) {
    std::cout << s.size << ',' << num(s.lookup_seconds) << ',' << num(s.insert_seconds) << ','
              << num(s.delete_seconds) << ',' << s.deletion_trials << '\n';
  }
  std::cout << "\nconstant,value,intercept,r_squared,reference\n"
            << "alpha," << num(r.alpha) << ',' << num(r.lookup.intercept) << ',' << num(r.lookup.r_squared)
            << ",0.7e-6\n"
            << "beta," << num(r.beta) << ',' << num(r.insert.intercept) << ',' << num(r.insert.r_squared)
            << ",1.1e-6\n"
            << "gamma," << num(r.gamma) << ',' << num(r.deletion.intercept) << ','
            << num(r.deletion.r_squared) << ",8.2e-8\n";
  std::cerr << "pinned=" << (r.pinned ? "yes" : "no") << '\n';
  for (const auto& d : r.diagnostics) std::cerr << "note: " << d << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ant Routing simulator and scaling models"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "run a network + workload scenario");
  simulate_cmd->add_option("--network", sim.network, "network JSON file")->required();
  simulate_cmd->add_option("--workload", sim.workload, "workload JSON file")->required();
  simulate_cmd->add_option("--out", sim.out, "output directory")->required();
  simulate_cmd->add_option("--seed", sim.seed, "override rng_seed");
  simulate_cmd->add_option("--latency-ms", sim.latency_ms, "override base link latency");
  simulate_cmd->add_option("--eta", sim.eta, "override seed lifetime (s)");
  simulate_cmd->add_option("--l0", sim.l0, "override l0 length");
  simulate_cmd->add_option("--l1", sim.l1, "override l1 length");
  simulate_cmd->add_option("--policy", sim.policy, "max_remaining_fees | fewest_intermediaries");
  simulate_cmd->add_option("--horizon", sim.horizon, "override horizon (s)");
  simulate_cmd->add_option("--batch", sim.batch, "run this many consecutive seeds in parallel")
      ->capture_default_str();

  CapacityArgs cap;
  auto* capacity_cmd = app.add_subcommand("capacity", "steady-state capacity model");
  capacity_cmd->add_option("--preset", cap.preset, "preset name or 'all'");
  capacity_cmd->add_option("--block-max", cap.block_max, "block size or gas limit");
  capacity_cmd->add_option("--tx-size", cap.tx_size, "transaction size or gas");
  capacity_cmd->add_option("--interblock-time", cap.interblock, "seconds between blocks");
  capacity_cmd->add_option("--unit", cap.unit, "unit label for block/tx size")->capture_default_str();
  capacity_cmd->add_option("--mempool", cap.mempool, "local mempool bytes");
  capacity_cmd->add_option("--data-per-tx", cap.data_per_tx, "bytes propagated per transaction");
  capacity_cmd->add_option("--lifetime", cap.lifetime, "seed lifetime (s)");
  capacity_cmd->add_option("--reach", cap.reach, "fraction of nodes reached by each direction");
  capacity_cmd->add_option("--nodes", cap.nodes, "number of nodes");

  auto* scaling_cmd = app.add_subcommand("scaling", "per-node workload model");
  scaling_cmd->require_subcommand(1);

  scaling::ScalingParams eval_p = scaling::kReferenceConstants;
  auto* eval_cmd = scaling_cmd->add_subcommand("eval", "T and total load at one rate");
  add_model_options(eval_cmd, eval_p);
  eval_cmd->add_option("--rate", eval_p.rate, "transactions per second")->capture_default_str();

  scaling::ScalingParams lm_p = scaling::kReferenceConstants;
  auto* lm_cmd = scaling_cmd->add_subcommand("lambda-max", "largest sustainable rate");
  add_model_options(lm_cmd, lm_p);

  scaling::MemoryParams mem{10000, 2, 0};
  auto* mem_cmd = scaling_cmd->add_subcommand("memory", "seed memory bound");
  mem_cmd->add_option("--rate", mem.rate)->capture_default_str();
  mem_cmd->add_option("--lifetime", mem.lifetime)->capture_default_str();
  mem_cmd->add_option("-r,--matches-received", mem.matches_received)->capture_default_str();

  scaling::CollisionParams col{10000, 2, 64, scaling::kCenturySeconds};
  auto* col_cmd = scaling_cmd->add_subcommand("collision", "seed collision probability");
  col_cmd->add_option("--rate", col.rate)->capture_default_str();
  col_cmd->add_option("--lifetime", col.lifetime)->capture_default_str();
  col_cmd->add_option("--bits", col.seed_bits)->capture_default_str();
  col_cmd->add_option("--horizon", col.horizon_seconds, "seconds")->capture_default_str();

  double bw_rate = 10000, bw_size = 16;
  auto* bw_cmd = scaling_cmd->add_subcommand("bandwidth", "pheromone bandwidth");
  bw_cmd->add_option("--rate", bw_rate)->capture_default_str();
  bw_cmd->add_option("--size", bw_size, "message bytes")->capture_default_str();

  scaling::BenchmarkConfig bench_cfg;
  std::string sizes_text = "100,300,1000,3000,10000,30000,100000";
  auto add_bench_options = [&](CLI::App* cmd) {
    cmd->add_option("--sizes", sizes_text, "comma-separated store sizes")->capture_default_str();
    cmd->add_option("--trials", bench_cfg.trials)->capture_default_str();
    cmd->add_option("--replicas", bench_cfg.replicas)->capture_default_str();
    cmd->add_option("--seed", bench_cfg.rng_seed)->capture_default_str();
  };
  auto* sbench_cmd = scaling_cmd->add_subcommand("bench", "measure alpha, beta, gamma");
  add_bench_options(sbench_cmd);
  auto* bench_cmd = app.add_subcommand("bench", "same as 'scaling bench'");
  add_bench_options(bench_cmd);

  std::vector<std::string> only;
  auto* repro_cmd = app.add_subcommand("reproduce", "reference figures with pass/fail");
  repro_cmd->add_option("--only", only, "sections: capacity match lambda collision bandwidth memory")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (simulate_cmd->parsed()) return simulate(sim);
    if (capacity_cmd->parsed()) return run_capacity(cap);
    if (eval_cmd->parsed()) {
      const double t = scaling::task_time(eval_p);
      const double load = scaling::total_time(eval_p);
      std::cout << "rate,alpha,beta,gamma,p,m,c,task_time_s,total_time\n"
                << num(eval_p.rate) << ',' << num(eval_p.alpha) << ',' << num(eval_p.beta) << ','
                << num(eval_p.gamma) << ',' << num(eval_p.lookups_per_task) << ','
                << num(eval_p.matches_per_task) << ',' << num(eval_p.confirm_probability) << ',' << num(t)
                << ',' << num(load) << '\n';
      return kOk;
    }
    if (lm_cmd->parsed()) {
      const auto r = scaling::lambda_max(lm_p);
      std::cout << "alpha,beta,gamma,p,m,c,lambda_max,bounded,half_network_upper_bound\n"
                << num(lm_p.alpha) << ',' << num(lm_p.beta) << ',' << num(lm_p.gamma) << ','
                << num(lm_p.lookups_per_task) << ',' << num(lm_p.matches_per_task) << ','
                << num(lm_p.confirm_probability) << ',' << num(r.lambda) << ',' << (r.bounded ? 1 : 0)
                << ',' << num(2 * r.lambda) << '\n';
      if (!r.bounded) std::cerr << "note: unbounded at this precision (no root below 1e9)\n";
      return kOk;
    }
    if (mem_cmd->parsed()) {
      std::cout << "rate,lifetime,matches_received,bytes\n"
                << num(mem.rate) << ',' << num(mem.lifetime) << ',' << num(mem.matches_received) << ','
                << num(scaling::memory_estimate(mem)) << '\n';
      if (const auto w = scaling::memory_range_warning(mem.rate, mem.lifetime)) {
        std::cerr << "warning: " << *w << '\n';
      }
      return kOk;
    }
    if (col_cmd->parsed()) {
      const auto r = scaling::collision_probability(col);
      std::cout << "rate,lifetime,bits,horizon_s,seeds_alive,instant,horizon_probability,exact_instant,"
                   "exact_horizon,precondition_warning\n"
                << num(col.rate) << ',' << num(col.lifetime) << ',' << col.seed_bits << ','
                << num(col.horizon_seconds) << ',' << num(r.seeds_alive) << ',' << num(r.instant_probability)
                << ',' << num(r.horizon_probability) << ',' << num(r.exact_instant) << ','
                << num(r.exact_horizon) << ',' << (r.precondition_warning ? 1 : 0) << '\n';
      if (r.precondition_warning) std::cerr << "warning: " << r.warning << '\n';
      return kOk;
    }
    if (bw_cmd->parsed()) {
      std::cout << "rate,message_bytes,bytes_per_s\n"
                << num(bw_rate) << ',' << num(bw_size) << ',' << num(scaling::bandwidth_estimate(bw_rate, bw_size))
                << '\n';
      return kOk;
    }
    if (sbench_cmd->parsed() || bench_cmd->parsed()) {
      bench_cfg.sizes = parse_sizes(sizes_text);
      return run_bench(bench_cfg);
    }
    if (repro_cmd->parsed()) {
      const auto rows = reproduce_table(only);
      std::cout << "# version " << kVersion << '\n' << repro_csv(rows);
      for (const auto& r : rows) {
        if (!r.pass) return kCheckFailed;
      }
      return kOk;
    }
  } catch (const simnet::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kUsage;
}
