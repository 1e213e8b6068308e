#include "tbsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tbsim/protocol.hpp"

namespace tbsim::mc {

double ParamDistribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case DistKind::kFixed:
      return a;
    case DistKind::kUniform: {
      std::uniform_real_distribution<double> dist(a, b);
      return dist(rng);
    }
    case DistKind::kGaussian: {
      std::normal_distribution<double> dist(a, b);
      return dist(rng);
    }
  }
  throw std::logic_error("unreachable distribution kind");
}

double ParamDistribution::mean_cos2() const {
  switch (kind) {
    case DistKind::kFixed: {
      double c = std::cos(a);
      return c * c;
    }
    case DistKind::kUniform: {
      // E[cos^2 X] = 1/2 + (sin 2b - sin 2a) / (4 (b - a)) on [a, b].
      if (b == a) {
        double c = std::cos(a);
        return c * c;
      }
      return 0.5 + (std::sin(2.0 * b) - std::sin(2.0 * a)) / (4.0 * (b - a));
    }
    case DistKind::kGaussian:
      // E[cos^2 X] = (1 + exp(-2 sigma^2) cos(2 mu)) / 2 for X ~ N(mu, sigma).
      return 0.5 * (1.0 + std::exp(-2.0 * b * b) * std::cos(2.0 * a));
  }
  throw std::logic_error("unreachable distribution kind");
}

ChannelDistribution ChannelDistribution::uniform_full() {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  ChannelDistribution dist;
  dist.theta = ParamDistribution::uniform(0.0, kTwoPi);
  dist.phi = ParamDistribution::uniform(0.0, kTwoPi);
  dist.chi = ParamDistribution::uniform(0.0, kTwoPi);
  return dist;
}

optics::ChannelParams sample_params(const ChannelDistribution& dist, std::mt19937_64& rng) {
  optics::ChannelParams params;
  params.theta = dist.theta.sample(rng);
  params.phi = dist.phi.sample(rng);
  params.chi = dist.chi.sample(rng);
  return params;
}

double RepeaterStats::segment1_rate() const {
  return end_to_end.trials == 0 ? 0.0
                                : static_cast<double>(segment1_passes) /
                                      static_cast<double>(end_to_end.trials);
}

double RepeaterStats::segment2_rate() const {
  return end_to_end.trials == 0 ? 0.0
                                : static_cast<double>(segment2_passes) /
                                      static_cast<double>(end_to_end.trials);
}

double RepeaterStats::both_rate() const {
  return end_to_end.trials == 0
             ? 0.0
             : static_cast<double>(both_passes) / static_cast<double>(end_to_end.trials);
}

double RepeaterStats::bsm_rate() const {
  return both_passes == 0
             ? 0.0
             : static_cast<double>(bsm_successes) / static_cast<double>(both_passes);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 trial_rng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(splitmix64(splitmix64(seed) + index));
}

double binomial_std_err(std::uint64_t successes, std::uint64_t trials) {
  if (trials == 0) {
    return 0.0;
  }
  double p = static_cast<double>(successes) / static_cast<double>(trials);
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

RunStats run_distribute_trials(const DistributeExperiment& experiment, std::uint64_t trials,
                               std::uint64_t seed) {
  RunStats stats;
  stats.trials = trials;
  double fidelity_sum = 0.0;
  double fidelity_min = 1.0;

  for (std::uint64_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng = trial_rng(seed, i);
    optics::ChannelParams c1 = sample_params(experiment.channel1, rng);
    optics::ChannelParams c2 = sample_params(experiment.channel2, rng);
    protocol::DistributionOutcome outcome = protocol::run_distribution(c1, c2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (unit(rng) < outcome.success_prob) {
      ++stats.successes;
      fidelity_sum += outcome.fidelity_phi_plus;
      fidelity_min = std::min(fidelity_min, outcome.fidelity_phi_plus);
    }
  }

  stats.mean_success =
      trials == 0 ? 0.0 : static_cast<double>(stats.successes) / static_cast<double>(trials);
  stats.std_err = binomial_std_err(stats.successes, trials);
  if (stats.successes > 0) {
    stats.fidelity_min = fidelity_min;
    stats.fidelity_mean = fidelity_sum / static_cast<double>(stats.successes);
  }
  return stats;
}

RepeaterStats run_repeater_trials(const RepeaterExperiment& experiment, std::uint64_t trials,
                                  std::uint64_t seed) {
  RepeaterStats stats;
  stats.end_to_end.trials = trials;
  double fidelity_sum = 0.0;
  double fidelity_min = 1.0;

  for (std::uint64_t i = 0; i < trials; ++i) {
    std::mt19937_64 rng = trial_rng(seed, i);
    optics::ChannelParams c1 = sample_params(experiment.channels[0], rng);
    optics::ChannelParams c2 = sample_params(experiment.channels[1], rng);
    optics::ChannelParams c3 = sample_params(experiment.channels[2], rng);
    optics::ChannelParams c4 = sample_params(experiment.channels[3], rng);

    repeater::RepeaterTrialOutcome trial =
        repeater::run_repeater(c1, c2, c3, c4, experiment.params, rng);
    if (trial.segment1_passed) ++stats.segment1_passes;
    if (trial.segment2_passed) ++stats.segment2_passes;
    if (trial.segment1_passed && trial.segment2_passed) ++stats.both_passes;
    if (trial.bsm_success) ++stats.bsm_successes;
    if (trial.success) {
      ++stats.end_to_end.successes;
      fidelity_sum += trial.fidelity;
      fidelity_min = std::min(fidelity_min, trial.fidelity);
    }
  }

  stats.end_to_end.mean_success =
      trials == 0 ? 0.0
                  : static_cast<double>(stats.end_to_end.successes) / static_cast<double>(trials);
  stats.end_to_end.std_err = binomial_std_err(stats.end_to_end.successes, trials);
  if (stats.end_to_end.successes > 0) {
    stats.end_to_end.fidelity_min = fidelity_min;
    stats.end_to_end.fidelity_mean = fidelity_sum / static_cast<double>(stats.end_to_end.successes);
  }
  return stats;
}

double analytic_distribute_success(const DistributeExperiment& experiment) {
  return experiment.channel1.mean_cos2_theta() * experiment.channel2.mean_cos2_theta();
}

double analytic_segment_pass(const ChannelDistribution& a, const ChannelDistribution& b,
                             const repeater::RepeaterParams& params) {
  return params.p_source * params.zeta * a.mean_cos2_theta() * b.mean_cos2_theta();
}

double analytic_repeater_end_to_end(const RepeaterExperiment& experiment) {
  double seg1 = analytic_segment_pass(experiment.channels[0], experiment.channels[1],
                                      experiment.params);
  double seg2 = analytic_segment_pass(experiment.channels[2], experiment.channels[3],
                                      experiment.params);
  return seg1 * seg2 * repeater::swap_success_prob(experiment.params.eta);
}

}  // namespace tbsim::mc
