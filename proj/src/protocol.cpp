#include "tbsim/protocol.hpp"

#include <cmath>
#include <utility>

namespace tbsim::protocol {

namespace {

DistributionOutcome run_pipeline(const ModeOperator& channel1, const ModeOperator& channel2) {
  const ModeOperator encoder = optics::encoder_unitary();
  const ModeOperator decoder = optics::decoder_unitary();

  PureState state = make_bell_phi_plus(kBinEarly);
  state = apply_single(state, 0, encoder);
  state = apply_single(state, 1, encoder);
  state = apply_single(state, 0, channel1);
  state = apply_single(state, 1, channel2);
  state = apply_single(state, 0, decoder);
  state = apply_single(state, 1, decoder);

  auto [kept, probability] =
      post_select(state, [](int, ModeLabel m) { return m.bin == kBinIntermediate; });

  DistributionOutcome outcome;
  outcome.success_prob = probability;
  outcome.omega_weight = state.norm_squared() - probability;
  outcome.fidelity_phi_plus =
      kept.empty() ? 0.0 : fidelity(kept, make_bell_phi_plus(kBinIntermediate));
  outcome.post_state = std::move(kept);
  return outcome;
}

}  // namespace

DistributionOutcome run_distribution(const optics::ChannelParams& c1,
                                     const optics::ChannelParams& c2) {
  return run_pipeline(optics::channel_unitary(c1), optics::channel_unitary(c2));
}

DistributionOutcome run_distribution_drifted(const optics::ChannelParams& c1_early,
                                             const optics::ChannelParams& c1_late,
                                             const optics::ChannelParams& c2_early,
                                             const optics::ChannelParams& c2_late) {
  // Photons occupy bins {0,1} while in the channel; the bin-2 block never acts.
  return run_pipeline(optics::channel_unitary_per_bin(c1_early, c1_late, c1_late),
                      optics::channel_unitary_per_bin(c2_early, c2_late, c2_late));
}

double analytic_success_prob(double theta1, double theta2) {
  const double c1 = std::cos(theta1);
  const double c2 = std::cos(theta2);
  return c1 * c1 * c2 * c2;
}

double omega_weight(const optics::ChannelParams& c1, const optics::ChannelParams& c2) {
  return run_distribution(c1, c2).omega_weight;
}

}  // namespace tbsim::protocol
