#include "antroute/reproduce.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "antroute/capacity/capacity.hpp"
#include "antroute/csv.hpp"
#include "antroute/protocol/codec.hpp"
#include "antroute/scaling/model.hpp"

namespace antroute {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.8g", v);
  return buf;
}

ReproRow relative(std::string section, std::string name, double value, double expected, double tol,
                  std::string note = {}) {
  ReproRow r{std::move(section), std::move(name), value, expected, {}, false, std::move(note)};
  r.tolerance = "+-" + num(tol * 100) + "%";
  r.pass = std::abs(value - expected) <= tol * std::abs(expected);
  return r;
}

ReproRow exact(std::string section, std::string name, double value, double expected,
               std::string note = {}) {
  return {std::move(section), std::move(name), value, expected, "exact", value == expected, std::move(note)};
}

ReproRow at_least(std::string section, std::string name, double value, double bound,
                  std::string note = {}) {
  return {std::move(section), std::move(name), value, bound, ">= " + num(bound), value >= bound,
          std::move(note)};
}

void capacity_rows(std::vector<ReproRow>& out) {
  for (const auto& row : capacity::evaluate_all_presets()) {
    auto r = relative("capacity", row.preset + ": " + row.label, row.value, row.expected, row.tolerance,
                      row.note);
    out.push_back(std::move(r));
  }
}

void match_rows(std::vector<ReproRow>& out) {
  out.push_back(at_least("match", "reach 0.5, N=32", capacity::match_probability(0.5, 32), 0.9999,
                         "1 - 0.75^32 rounds to 99.99% but is below it; N >= 33 clears the bound"));
  out.push_back(at_least("match", "reach 0.1, N=1000", capacity::match_probability(0.1, 1000), 0.9999));
}

void lambda_rows(std::vector<ReproRow>& out) {
  const auto r = scaling::lambda_max(scaling::kReferenceConstants);
  out.push_back(relative("lambda", "lambda_max, worst case (8a+2b)", r.lambda, 12500, 0.05,
                         "2*lambda_max is an upper bound when half the network routes each payment"));
  auto literal = scaling::kReferenceConstants;
  literal.lookups_per_task = 8;
  const auto l8 = scaling::lambda_max(literal);
  ReproRow info{"lambda", "lambda_max, general formula with p=8 (9a+2b)", l8.lambda, 12500, "informational",
                true, "one extra lookup per task against the worst-case reduction"};
  out.push_back(std::move(info));
}

void collision_rows(std::vector<ReproRow>& out) {
  const auto c64 = scaling::collision_probability({10000, 2, 64, scaling::kCenturySeconds});
  ReproRow r64{"collision", "64-bit seeds, 100 years", c64.horizon_probability, 0.03, "[3.0%, 3.6%]",
               c64.horizon_probability >= 0.030 && c64.horizon_probability <= 0.036,
               "reference: approximately 3%"};
  out.push_back(std::move(r64));
  const auto c72 = scaling::collision_probability({10000, 2, 72, scaling::kCenturySeconds});
  out.push_back(relative("collision", "72-bit seeds, 100 years", c72.horizon_probability, 1.3e-4, 0.1,
                         "the quoted 2e-5 divides by 2^82 rather than 2^73"));
}

void bandwidth_rows(std::vector<ReproRow>& out) {
  out.push_back(exact("bandwidth", "16-byte pheromone at 10000 tx/s",
                      scaling::bandwidth_estimate(10000, 16), 160000));
  const double frame = static_cast<double>(protocol::kPheromoneFrameSize);
  out.push_back(exact("bandwidth", "wire pheromone frame at 10000 tx/s",
                      scaling::bandwidth_estimate(10000, frame), 10000 * frame,
                      "frame carries direction and kind bytes"));
}

void memory_rows(std::vector<ReproRow>& out) {
  out.push_back(exact("memory", "r=0, 10000 tx/s, 2 s", scaling::memory_estimate({10000, 2, 0}), 1340000));
  out.push_back(exact("memory", "r=8, 10000 tx/s, 2 s", scaling::memory_estimate({10000, 2, 8}), 5340000));
  out.push_back(relative("memory", "r=100 vs 0.5r MB", scaling::memory_estimate({10000, 2, 100}), 50e6, 0.07));
  if (const auto w = scaling::memory_range_warning(10000, 2)) {
    ReproRow r{"memory", "stated 2-4 MB range for r<=8", 0, 0, "informational", true, "warning: " + *w};
    out.push_back(std::move(r));
  }
}

}  // namespace

std::vector<ReproRow> reproduce_table(const std::vector<std::string>& only) {
  for (const auto& s : only) {
    if (std::find(kReproSections.begin(), kReproSections.end(), s) == kReproSections.end()) {
      throw std::invalid_argument("unknown section \"" + s + "\"");
    }
  }
  auto wanted = [&](const char* s) {
    return only.empty() || std::find(only.begin(), only.end(), s) != only.end();
  };
  std::vector<ReproRow> rows;
  if (wanted("capacity")) capacity_rows(rows);
  if (wanted("match")) match_rows(rows);
  if (wanted("lambda")) lambda_rows(rows);
  if (wanted("collision")) collision_rows(rows);
  if (wanted("bandwidth")) bandwidth_rows(rows);
  if (wanted("memory")) memory_rows(rows);
  return rows;
}

std::string repro_csv(const std::vector<ReproRow>& rows) {
  std::ostringstream out;
  out << "section,name,value,expected,tolerance,pass,note\n";
  for (const auto& r : rows) {
    out << r.section << ',' << csv_field(r.name) << ',' << num(r.value) << ',' << num(r.expected) << ','
        << csv_field(r.tolerance) << ',' << (r.pass ? "pass" : "FAIL") << ',' << csv_field(r.note) << '\n';
  }
  return out.str();
}

}  // namespace antroute
