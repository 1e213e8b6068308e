#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>

#include "tbsim/montecarlo.hpp"
#include "tbsim/repeater.hpp"

namespace tbsim::config {

enum class ExperimentKind { kDistribute, kRepeater, kSweep, kCompareKwd };
enum class OutputFormat { kCsv, kJson };

// What a sweep evaluates at each point: Monte Carlo distribution runs for the
// theta parameters, analytic repeater-rate comparison for the rest.
enum class SweepTarget { kDistribute, kCompareKwd };

struct SweepAxis {
  SweepTarget target = SweepTarget::kCompareKwd;
  std::string parameter = "eta";  // theta|theta1|theta2 or gamma|zeta|p_source|eta|p_cnot|p_qnd
  double lo = 0.3;
  double hi = 0.8;
  int steps = 6;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::kDistribute;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 12345;
  OutputFormat format = OutputFormat::kCsv;
  // Channels 0,1 feed segment one (and the plain distribution run);
  // channels 2,3 feed segment two of the repeater.
  std::array<mc::ChannelDistribution, 4> channels = {
      mc::ChannelDistribution::uniform_full(), mc::ChannelDistribution::uniform_full(),
      mc::ChannelDistribution::uniform_full(), mc::ChannelDistribution::uniform_full()};
  repeater::RepeaterParams repeater_params;
  // Alignment angles entering p_pur for the compare-kwd report; pi/4 gives
  // the quoted cos^2 = 1/2 averages.
  double compare_theta1 = std::numbers::pi / 4.0;
  double compare_theta2 = std::numbers::pi / 4.0;
  std::optional<SweepAxis> sweep;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// String names used in config files and reports.
std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);
std::string format_name(OutputFormat format);
OutputFormat format_from_name(const std::string& name);
std::string target_name(SweepTarget target);

// Baseline config for a given experiment kind: paper-quoted repeater defaults,
// fully random channels, theta1 = theta2 = pi/4 for the comparison.
ExperimentConfig default_config(ExperimentKind kind);

// Parse a JSON config document. Angles are radians; string values with a
// "deg:" prefix are converted. Throws ConfigError on malformed input or
// invariant violations.
ExperimentConfig parse_config(const std::string& text);

// Canonical JSON serialization (radians, explicit distribution objects).
// serialize_config(parse_config(text)) is idempotent.
std::string serialize_config(const ExperimentConfig& config);

// Validate invariants (trials >= 1, sweep axis present iff kind == sweep,
// probabilities in [0, 1], axis compatibility). Throws ConfigError.
void validate_config(const ExperimentConfig& config);

}  // namespace tbsim::config
