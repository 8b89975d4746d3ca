#pragma once

#include <string>
#include <vector>

namespace antroute {

struct ReproRow {
  std::string section;  // capacity, match, lambda, collision, bandwidth, memory
  std::string name;
  double value = 0;
  double expected = 0;
  std::string tolerance;  // human-readable acceptance band
  bool pass = false;
  std::string note;
};

inline const std::vector<std::string> kReproSections = {"capacity", "match",     "lambda",
                                                        "collision", "bandwidth", "memory"};

// Rows for the requested sections (all when empty). Throws
// std::invalid_argument on an unknown section.
std::vector<ReproRow> reproduce_table(const std::vector<std::string>& only = {});

std::string repro_csv(const std::vector<ReproRow>& rows);

}  // namespace antroute
