#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tbsim/config.hpp"

namespace tbsim::experiment {

struct RunResult {
  config::ExperimentConfig config;
  std::string csv;          // fixed header set per kind; deterministic given (config, seed)
  std::string report_json;  // JSON object with kind/seed/config/stats/analytic/timestamp
  bool check_passed = true;
  std::vector<std::string> check_messages;  // populated when a consistency band is violated
};

// Run the experiment described by a validated config and render both output
// formats. The CSV never embeds wall-clock data, so identical (config, seed)
// pairs produce byte-identical CSV.
RunResult run_experiment(const config::ExperimentConfig& config);

// CSV cell rendering for doubles: "0" for zero, scientific notation for
// |x| < 1e-3, shortest general form otherwise. Exposed for golden tests.
std::string csv_number(double value);
std::string csv_count(std::uint64_t value);

}  // namespace tbsim::experiment
