#include "antroute/simnet/batch.hpp"

#include <exception>

namespace antroute::simnet {

std::vector<RunResult> run_batch_serial(const std::vector<Scenario>& scenarios) {
  std::vector<RunResult> results;
  results.reserve(scenarios.size());
  for (const auto& s : scenarios) results.push_back(run(s.network, s.workload, s.faults, s.options));
  return results;
}

std::vector<RunResult> run_batch_parallel(const std::vector<Scenario>& scenarios) {
  const auto n = static_cast<long>(scenarios.size());
  std::vector<RunResult> results(scenarios.size());
  std::vector<std::exception_ptr> errors(scenarios.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < n; ++i) {
    try {
      const auto& s = scenarios[i];
      results[i] = run(s.network, s.workload, s.faults, s.options);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace antroute::simnet
