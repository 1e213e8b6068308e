#pragma once

#include "tbsim/optics.hpp"
#include "tbsim/qstate.hpp"

namespace tbsim::protocol {

// Result of one exact pass through the distribution pipeline, before any
// loss or detector sampling.
struct DistributionOutcome {
  PureState post_state;          // both photons in the intermediate bin; empty if weightless
  double success_prob = 0.0;     // weight of the all-intermediate-bin sector
  double fidelity_phi_plus = 0.0;
  double omega_weight = 0.0;     // weight of the too-early/too-late error terms

  DistributionOutcome() : post_state(2) {}
};

// Full pipeline: Bell pair at bin 0, encode both photons, send photon 1
// through channel c1 and photon 2 through c2, decode both, post-select on
// both photons arriving in the intermediate bin.
DistributionOutcome run_distribution(const optics::ChannelParams& c1,
                                     const optics::ChannelParams& c2);

// Same pipeline but each channel applies different rotations to the early and
// late components, violating the steady-state assumption. Quantifies how the
// post-selected fidelity degrades when the channel drifts within a pulse.
DistributionOutcome run_distribution_drifted(const optics::ChannelParams& c1_early,
                                             const optics::ChannelParams& c1_late,
                                             const optics::ChannelParams& c2_early,
                                             const optics::ChannelParams& c2_late);

// cos^2(theta1) * cos^2(theta2)
double analytic_success_prob(double theta1, double theta2);

// Weight outside the all-intermediate-bin sector; complements the success law.
double omega_weight(const optics::ChannelParams& c1, const optics::ChannelParams& c2);

}  // namespace tbsim::protocol
