#pragma once

#include <vector>

#include "antroute/simnet/simulator.hpp"

namespace antroute::simnet {

struct Scenario {
  NetworkConfig network;
  std::vector<PaymentSpec> workload;
  FaultConfig faults;
  SimOptions options;
};

// Each scenario is an independent single-threaded run, so both versions
// return identical results. The first exception (by scenario index) is
// rethrown after all runs finish.
std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios);
std::vector<RunResult> run_batch_parallel(const std::vector<Scenario>& scenarios);

}  // namespace antroute::simnet
