#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "antroute/simnet/config_io.hpp"
#include "antroute/simnet/simulator.hpp"

namespace antroute::simnet {

// Column order of payments.csv and nodes.csv; stable across versions.
extern const char* const kPaymentColumns;
std::string node_columns();

nlohmann::ordered_json report_json(const NetworkConfig& network, const WorkloadConfig& workload,
                                   const RunResult& result);
std::string payments_csv(const RunResult& result);
std::string nodes_csv(const RunResult& result);

// Writes report.json, payments.csv and nodes.csv into `dir` (created if needed).
void write_reports(const std::filesystem::path& dir, const NetworkConfig& network,
                   const WorkloadConfig& workload, const RunResult& result);

}  // namespace antroute::simnet
