// Serial reference vs OpenMP kernel: wall time, speedup, and whether the
// results are identical. Output is CSV.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

#include <CLI11.hpp>

#include "antroute/scaling/birthday.hpp"
#include "antroute/simnet/batch.hpp"
#include "antroute/simnet/generators.hpp"
#include "antroute/simnet/report.hpp"

using namespace antroute;

namespace {

double seconds(const std::function<void()>& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<simnet::Scenario> scenarios(int count, int nodes, double rate) {
  std::vector<simnet::Scenario> out;
  for (int i = 0; i < count; ++i) {
    simnet::RandomGraphSpec spec;
    spec.node_count = nodes;
    spec.rng_seed = 1 + i;
    spec.latency = {simnet::LatencyMode::uniform, 5ms, 20ms};
    simnet::Scenario s;
    s.network = simnet::random_connected_network(spec);
    simnet::PoissonWorkloadSpec w;
    w.rate = rate;
    w.duration = 5s;
    w.amount_max = 200;
    s.workload = simnet::poisson_workload(w, simnet::SimNetwork(s.network).node_ids(), 1 + i);
    out.push_back(std::move(s));
  }
  return out;
}

void row(const char* kernel, const char* size, double serial, double parallel, bool identical) {
  std::printf("%s,%s,%d,%.6f,%.6f,%.3f,%s\n", kernel, size, omp_get_max_threads(), serial, parallel,
              serial / parallel, identical ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs OpenMP kernels"};
  std::uint64_t trials = 200000;
  int scenario_count = 16;
  int nodes = 40;
  double rate = 20;
  app.add_option("--trials", trials, "birthday Monte Carlo trials")->capture_default_str();
  app.add_option("--scenarios", scenario_count, "independent simulations in the batch")->capture_default_str();
  app.add_option("--nodes", nodes, "nodes per simulated network")->capture_default_str();
  app.add_option("--rate", rate, "payments per second per simulation")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  std::printf("kernel,size,threads,serial_s,parallel_s,speedup,identical\n");

  scaling::BirthdayExperiment e;
  e.trials = trials;
  scaling::BirthdayEstimate s, p;
  const double ts = seconds([&] { s = scaling::birthday_monte_carlo_serial(e); });
  const double tp = seconds([&] { p = scaling::birthday_monte_carlo_parallel(e); });
  row("birthday_monte_carlo", std::to_string(trials).c_str(), ts, tp, s.collisions == p.collisions);

  const auto batch = scenarios(scenario_count, nodes, rate);
  std::vector<simnet::RunResult> rs, rp;
  const double bs = seconds([&] { rs = simnet::run_batch_serial(batch); });
  const double bp = seconds([&] { rp = simnet::run_batch_parallel(batch); });
  bool same = rs.size() == rp.size();
  for (std::size_t i = 0; same && i < rs.size(); ++i) {
    same = simnet::payments_csv(rs[i]) == simnet::payments_csv(rp[i]) &&
           simnet::nodes_csv(rs[i]) == simnet::nodes_csv(rp[i]);
  }
  row("simulation_batch", std::to_string(scenario_count).c_str(), bs, bp, same);
  return 0;
}
