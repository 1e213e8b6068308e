#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "tbsim/optics.hpp"
#include "tbsim/repeater.hpp"

namespace tbsim::mc {

// Distribution of a single channel parameter across trials.
enum class DistKind { kFixed, kUniform, kGaussian };

struct ParamDistribution {
  DistKind kind = DistKind::kFixed;
  double a = 0.0;  // fixed value, uniform lower bound, or gaussian mean
  double b = 0.0;  // uniform upper bound or gaussian sigma

  static ParamDistribution fixed(double value) { return {DistKind::kFixed, value, 0.0}; }
  static ParamDistribution uniform(double lo, double hi) { return {DistKind::kUniform, lo, hi}; }
  static ParamDistribution gaussian(double mean, double sigma) {
    return {DistKind::kGaussian, mean, sigma};
  }

  double sample(std::mt19937_64& rng) const;

  // E[cos^2 X] in closed form; used for analytic success predictions.
  double mean_cos2() const;
};

// Per-channel distributions for the three birefringence parameters.
struct ChannelDistribution {
  ParamDistribution theta = ParamDistribution::fixed(0.0);
  ParamDistribution phi = ParamDistribution::fixed(0.0);
  ParamDistribution chi = ParamDistribution::fixed(0.0);

  // Fully random channel: every parameter uniform over [0, 2*pi).
  static ChannelDistribution uniform_full();

  double mean_cos2_theta() const { return theta.mean_cos2(); }
};

optics::ChannelParams sample_params(const ChannelDistribution& dist, std::mt19937_64& rng);

// Binomial success counters plus fidelity tracking over the successful trials.
struct RunStats {
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double mean_success = 0.0;
  double std_err = 0.0;
  double fidelity_min = 0.0;   // 0 when no trial succeeded
  double fidelity_mean = 0.0;  // 0 when no trial succeeded
};

struct RepeaterStats {
  RunStats end_to_end;
  std::uint64_t segment1_passes = 0;
  std::uint64_t segment2_passes = 0;
  std::uint64_t both_passes = 0;
  std::uint64_t bsm_successes = 0;

  double segment1_rate() const;
  double segment2_rate() const;
  double both_rate() const;
  // BSM success conditioned on both segments passing.
  double bsm_rate() const;
};

struct DistributeExperiment {
  ChannelDistribution channel1 = ChannelDistribution::uniform_full();
  ChannelDistribution channel2 = ChannelDistribution::uniform_full();
};

struct RepeaterExperiment {
  std::array<ChannelDistribution, 4> channels = {
      ChannelDistribution::uniform_full(), ChannelDistribution::uniform_full(),
      ChannelDistribution::uniform_full(), ChannelDistribution::uniform_full()};
  repeater::RepeaterParams params;
};

// splitmix64 hash step; also used to decorrelate per-trial seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Independent generator for trial `index` under master `seed`. Trials can be
// reordered or rerun individually without touching the others' streams.
std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index);

double binomial_std_err(std::uint64_t successes, std::uint64_t trials);

RunStats run_distribute_trials(const DistributeExperiment& experiment, std::uint64_t trials,
                               std::uint64_t seed);

RepeaterStats run_repeater_trials(const RepeaterExperiment& experiment, std::uint64_t trials,
                                  std::uint64_t seed);

// Analytic predictions matching the Monte Carlo estimators above.
double analytic_distribute_success(const DistributeExperiment& experiment);
double analytic_segment_pass(const ChannelDistribution& a, const ChannelDistribution& b,
                             const repeater::RepeaterParams& params);
double analytic_repeater_end_to_end(const RepeaterExperiment& experiment);

}  // namespace tbsim::mc
