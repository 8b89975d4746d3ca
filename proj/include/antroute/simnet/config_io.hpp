#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "antroute/simnet/network.hpp"
#include "antroute/simnet/simulator.hpp"

namespace antroute::simnet {

// Workload file contents: explicit payments (or a generator spec, expanded on
// load), plus optional faults and run options.
struct WorkloadConfig {
  std::vector<PaymentSpec> payments;
  FaultConfig faults;
  SimOptions options;
};

// Parse errors carry the line and column; schema errors name the offending
// field (e.g. "channels[3].balance_ab").
NetworkConfig parse_network(const nlohmann::json& doc);
WorkloadConfig parse_workload(const nlohmann::json& doc, const NetworkConfig& network);

nlohmann::json read_json_file(const std::filesystem::path& path);
NetworkConfig load_network(const std::filesystem::path& path);
WorkloadConfig load_workload(const std::filesystem::path& path, const NetworkConfig& network);

// Fully expanded configuration, suitable for re-loading.
nlohmann::ordered_json network_to_json(const NetworkConfig& network);
nlohmann::ordered_json workload_to_json(const WorkloadConfig& workload);

protocol::Behavior parse_behavior(const std::string& name);
const char* behavior_name(protocol::Behavior b);
protocol::SelectionPolicy parse_policy(const std::string& name);
const char* policy_name(protocol::SelectionPolicy p);

}  // namespace antroute::simnet
