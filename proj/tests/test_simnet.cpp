#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <numeric>

#include "antroute/simnet/batch.hpp"
#include "antroute/simnet/config_io.hpp"
#include "antroute/simnet/generators.hpp"
#include "antroute/simnet/report.hpp"
#include "support/fixtures.hpp"

using namespace antroute;
using namespace antroute::simnet;
using namespace antroute::testing;
using protocol::Behavior;

namespace {

std::uint64_t total_capacity(const std::vector<Channel>& channels) {
  return std::accumulate(channels.begin(), channels.end(), std::uint64_t{0},
                         [](std::uint64_t s, const Channel& c) { return s + c.capacity(); });
}

}  // namespace

TEST_CASE("3-node path completes and pays the middle fee") {
  auto net = line(3, 3);
  const auto res = run(net, {pay(1, 3, 100, 10)});
  const auto& p = res.metrics.payments.at(0);
  CHECK(p.outcome == PaymentOutcome::completed);
  CHECK(p.path == std::vector<NodeId>{1, 2, 3});
  CHECK(p.path_length == 3);
  CHECK(p.fees_paid == 3);
  CHECK(p.min_candidate_hops == 2);
  CHECK(res.final_channels[0].balance_ab == 1000 - 103);
  CHECK(res.final_channels[1].balance_ab == 1000 - 100);
}

TEST_CASE("disconnected payee gives no_route") {
  auto net = graph({{1, 0}, {2, 1}, {3, 0}, {4, 0}}, {{1, 2}, {3, 4}});
  const auto res = run(net, {pay(1, 3)});
  CHECK(res.metrics.payments[0].outcome == PaymentOutcome::no_route);
  CHECK_FALSE(res.metrics.payments[0].route_found);
}

TEST_CASE("payer without an eligible channel is unroutable locally") {
  auto net = line(3);
  net.channels[0].balance_ab = 10;
  const auto res = run(net, {pay(1, 3)});
  CHECK(res.metrics.payments[0].outcome == PaymentOutcome::unroutable_locally);
}

TEST_CASE("4-cycle routes around the expensive node") {
  // 1 - 2 - 4 and 1 - 3 - 4; node 2 charges 50, node 3 charges 5
  auto net = graph({{1, 0}, {2, 50}, {3, 5}, {4, 0}}, {{1, 2}, {2, 4}, {1, 3}, {3, 4}});
  const auto res = run(net, {pay(1, 4, 100, 100)});
  const auto& p = res.metrics.payments[0];
  CHECK(p.outcome == PaymentOutcome::completed);
  CHECK(p.path == std::vector<NodeId>{1, 3, 4});
  CHECK(p.fees_paid == 5);
}

TEST_CASE("min candidate hops match the BFS oracle on small graphs") {
  SUBCASE("triangle prefers the direct edge") {
    auto net = graph({{1, 0}, {2, 1}, {3, 0}}, {{1, 2}, {2, 3}, {1, 3}});
    const auto res = run(net, {pay(1, 3)});
    CHECK(res.metrics.payments[0].min_candidate_hops == 1);
    CHECK(shortest_path_oracle(SimNetwork(net), 1, 3, 100) == 1);
  }
  SUBCASE("an underfunded edge is skipped by both") {
    auto net = graph({{1, 0}, {2, 1}, {3, 0}}, {{1, 2}, {2, 3}, {1, 3}});
    net.channels[2].balance_ab = 50;
    const auto res = run(net, {pay(1, 3)});
    CHECK(res.metrics.payments[0].min_candidate_hops == 2);
    CHECK(shortest_path_oracle(SimNetwork(net), 1, 3, 100) == 2);
    CHECK(res.metrics.payments[0].path == std::vector<NodeId>{1, 2, 3});
  }
  SUBCASE("balance is directional") {
    auto net = graph({{1, 0}, {2, 1}, {3, 0}}, {{1, 2}, {2, 3}, {1, 3}});
    net.channels[2].balance_ba = 50;
    CHECK(shortest_path_oracle(SimNetwork(net), 1, 3, 100) == 1);
    CHECK(shortest_path_oracle(SimNetwork(net), 3, 1, 100) == 2);
  }
}

TEST_CASE("delivered matches carry the fee identity and true hop count") {
  RandomGraphSpec spec;
  spec.node_count = 15;
  spec.rng_seed = 5;
  const auto net = random_connected_network(spec);
  const SimNetwork sim(net);
  const auto res = run(net, {pay(1, 15, 100, 200)});
  const auto req = make_requests(net, {pay(1, 15, 100, 200)})[0];
  int delivered = 0;
  for (const auto& [id, t] : res.traces) {
    if (!t.delivered_to_payer) continue;
    ++delivered;
    const auto path = t.full_path();
    REQUIRE(path.front() == 1);
    REQUIRE(path.back() == 15);
    std::uint64_t fees = 0;
    for (std::size_t i = 1; i + 1 < path.size(); ++i) fees += sim.fee(path[i]);
    CHECK(2 * 200 - t.total_fees == fees);
    CHECK(static_cast<std::uint8_t>(t.total_counter - 2 * req.counter_start) + 1 == path.size() - 1);
  }
  CHECK(delivered > 0);
}

TEST_CASE("counter cheater is flagged and the payment still completes") {
  for (int k = 0; k < 5; ++k) {
    const auto s = cheater_scenario(k);
    FaultConfig faults;
    faults.behaviors[s.cheater] = Behavior::counter_decrement;
    const auto res = run(s.network, {s.payment}, faults);
    const auto& p = res.metrics.payments[0];
    CHECK(p.cheater_detections >= 1);
    CHECK(p.outcome == PaymentOutcome::completed);
  }
}

TEST_CASE("refusing node times out and the payer retries") {
  const auto s = cheater_scenario(0);
  FaultConfig faults;
  faults.behaviors[s.network.nodes[2].id] = Behavior::refuse_payment;  // first hop of the cheap route
  const auto res = run(s.network, {s.payment}, faults);
  const auto& p = res.metrics.payments[0];
  CHECK(p.timeouts >= 1);
  CHECK(p.outcome == PaymentOutcome::completed);
  CHECK(p.path == s.honest_route);
}

TEST_CASE("honest networks never report cheaters") {
  int detections = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomGraphSpec spec;
    spec.node_count = 12;
    spec.rng_seed = seed;
    const auto net = random_connected_network(spec);
    const auto res = run(net, {pay(1, 12, 100, 200)});
    detections += res.metrics.payments[0].cheater_detections;
  }
  CHECK(detections == 0);
}

TEST_CASE("settlement conserves channel capacity") {
  SUBCASE("single channel") {
    auto net = line(2);
    const auto res = run(net, {pay(1, 2, 300)});
    CHECK(res.metrics.payments[0].outcome == PaymentOutcome::completed);
    CHECK(res.final_channels[0].balance_ab == 700);
    CHECK(res.final_channels[0].balance_ba == 1300);
  }
  SUBCASE("two payments racing for one channel") {
    auto net = line(3, 0);
    net.channels[1].balance_ab = 150;
    const auto res = run(net, {pay(1, 3, 100, 10, 100ms), pay(1, 3, 100, 10, 110ms)});
    int completed = 0;
    for (const auto& p : res.metrics.payments) completed += p.outcome == PaymentOutcome::completed;
    CHECK(completed == 1);
    CHECK(total_capacity(res.final_channels) == total_capacity(net.channels));
  }
  SUBCASE("random workload") {
    RandomGraphSpec spec;
    spec.node_count = 20;
    spec.balance_min = 200;
    spec.balance_max = 2000;
    const auto net = random_connected_network(spec);
    PoissonWorkloadSpec w;
    w.rate = 20;
    w.duration = 2s;
    w.amount_min = 10;
    w.amount_max = 300;
    const auto res = run(net, poisson_workload(w, SimNetwork(net).node_ids(), 3));
    CHECK(total_capacity(res.final_channels) == total_capacity(net.channels));
    for (std::size_t i = 0; i < net.channels.size(); ++i) {
      CHECK(res.final_channels[i].capacity() == net.channels[i].capacity());
    }
  }
  SUBCASE("settle_payment is all or nothing") {
    SimNetwork sim(line(4, 2));
    CHECK_FALSE(settle_payment(sim, {1, 2, 3, 4}, 997).settled);
    CHECK(sim.balance(1, 2) == 1000);
    const auto ok = settle_payment(sim, {1, 2, 3, 4}, 996);
    CHECK(ok.settled);
    CHECK(ok.fees_paid == 4);
    CHECK(sim.balance(1, 2) == 0);
    CHECK(sim.balance(2, 3) == 2);
    CHECK(sim.balance(3, 4) == 4);
  }
}

TEST_CASE("runs are deterministic and batch modes agree") {
  std::vector<Scenario> scenarios;
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RandomGraphSpec spec;
    spec.rng_seed = seed;
    spec.latency = {LatencyMode::uniform, 5ms, 20ms};
    Scenario s;
    s.network = random_connected_network(spec);
    PoissonWorkloadSpec w;
    w.rate = 5;
    s.workload = poisson_workload(w, SimNetwork(s.network).node_ids(), seed);
    s.faults.drop_rate = 0.05;
    scenarios.push_back(s);
  }
  const auto serial = run_batch_serial(scenarios);
  const auto parallel = run_batch_parallel(scenarios);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(payments_csv(serial[i]) == payments_csv(parallel[i]));
    CHECK(nodes_csv(serial[i]) == nodes_csv(parallel[i]));
  }
  const auto again = run(scenarios[0].network, scenarios[0].workload, scenarios[0].faults);
  CHECK(payments_csv(again) == payments_csv(serial[0]));
  CHECK(again.metrics.bytes_sent == serial[0].metrics.bytes_sent);
}

TEST_CASE("configuration errors name the culprit") {
  auto bad = line(3);
  bad.channels[1].b = 9;
  CHECK_THROWS_WITH_AS(run(bad, {}), doctest::Contains("channel #1"), ConfigError);
  CHECK_THROWS_WITH_AS(run(line(3), {pay(1, 7)}), doctest::Contains("payment #0"), ConfigError);
  FaultConfig f;
  f.drop_rate = 1.5;
  CHECK_THROWS_AS(run(line(3), {}, f), ConfigError);

  const auto doc = nlohmann::json::parse(
      R"({"nodes":[{"id":1,"fee":0},{"id":2,"fee":0}],"channels":[{"a":1,"b":2,"balance_ab":-1,"balance_ba":5}]})");
  CHECK_THROWS_WITH_AS(parse_network(doc), doctest::Contains("channels[0].balance_ab"), ConfigError);
  const auto extra = nlohmann::json::parse(R"({"nodes":[],"channels":[],"colour":1})");
  CHECK_THROWS_WITH_AS(parse_network(extra), doctest::Contains("colour"), ConfigError);

  const auto path = std::filesystem::temp_directory_path() / "antroute_bad.json";
  std::ofstream(path) << "{\n  \"nodes\": [\n    {\"id\": 1,}\n  ]\n}\n";
  CHECK_THROWS_WITH_AS(read_json_file(path), doctest::Contains("line 3"), ConfigError);
  std::filesystem::remove(path);
}

TEST_CASE("config round-trips through JSON") {
  RandomGraphSpec spec;
  spec.latency = {LatencyMode::uniform, 3ms, 7ms};
  const auto net = random_connected_network(spec);
  const auto back = parse_network(nlohmann::json::parse(network_to_json(net).dump()));
  CHECK(back.channels == net.channels);
  CHECK(back.nodes.size() == net.nodes.size());
  CHECK(back.latency.spread == net.latency.spread);

  WorkloadConfig w;
  w.payments = {pay(1, 2), pay(3, 4, 5, 6, 1500ms)};
  w.faults.behaviors[3] = Behavior::refuse_payment;
  w.faults.drop_rate = 0.25;
  w.options.selection.privacy_floor = 0;
  const auto wb = parse_workload(nlohmann::json::parse(workload_to_json(w).dump()), net);
  REQUIRE(wb.payments.size() == 2);
  CHECK(wb.payments[1].start_time == 1500ms);
  CHECK(wb.faults.behaviors.at(3) == Behavior::refuse_payment);
  CHECK(wb.faults.drop_rate == 0.25);
  CHECK(wb.options.selection.privacy_floor == 0);
}

TEST_CASE("generators") {
  RandomGraphSpec spec;
  spec.node_count = 30;
  spec.fee_min = 2;
  spec.fee_max = 4;
  const auto net = random_connected_network(spec);
  CHECK(net.nodes.size() == 30);
  CHECK(net.channels.size() >= 29);
  const SimNetwork sim(net);
  for (NodeId id = 2; id <= 30; ++id) CHECK(shortest_path_oracle(sim, 1, id, 1).has_value());
  for (const auto& n : net.nodes) {
    CHECK(n.fee >= 2);
    CHECK(n.fee <= 4);
  }
  CHECK(random_connected_network(spec).channels == net.channels);

  PoissonWorkloadSpec w;
  w.rate = 50;
  w.duration = 10s;
  const auto pays = poisson_workload(w, sim.node_ids(), 9);
  CHECK(pays.size() > 400);
  CHECK(pays.size() < 600);
  for (std::size_t i = 0; i < pays.size(); ++i) {
    CHECK(pays[i].payer != pays[i].payee);
    CHECK(pays[i].start_time < 10s);
    if (i > 0) CHECK(pays[i - 1].start_time <= pays[i].start_time);
  }
}

TEST_CASE("report columns are stable") {
  CHECK(std::string(kPaymentColumns) ==
        "index,payer,payee,amount,f_max,seed,counter_start,start_time_us,outcome,route_found,"
        "path_length,fees_paid,first_match_latency_us,candidates,min_candidate_hops,attempts,"
        "cheater_detections,timeouts,selected_match_id,path");
  CHECK(node_columns().rfind("id,handler_calls,", 0) == 0);
  const auto res = run(line(3), {pay(1, 3)});
  const auto csv = payments_csv(res);
  CHECK(csv.rfind(std::string(kPaymentColumns) + "\n", 0) == 0);
  CHECK(csv.find(",completed,") != std::string::npos);
  CHECK(csv.find(",1-2-3\n") != std::string::npos);
}

TEST_CASE("links that drop everything leave payments without a route") {
  FaultConfig f;
  f.drop_rate = 1.0;
  const auto res = run(line(4), {pay(1, 4)}, f);
  CHECK(res.metrics.payments[0].outcome == PaymentOutcome::no_route);
  CHECK(res.metrics.link_drops > 0);
}

TEST_CASE("payments still running at the horizon are incomplete") {
  SimOptions o;
  o.horizon = 500ms;
  const auto res = run(line(4), {pay(1, 4, 100, 100, 400ms)}, {}, o);
  CHECK(res.metrics.payments[0].outcome == PaymentOutcome::incomplete);
}
