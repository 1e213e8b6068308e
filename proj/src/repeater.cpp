#include "tbsim/repeater.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace tbsim::repeater {

namespace {

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
  }
}

}  // namespace

BsmOutcome bsm(const PureState& state4, double eta, std::mt19937_64& rng) {
  if (state4.photon_count() != 4) {
    throw std::invalid_argument("bsm expects a four-photon state");
  }
  check_probability(eta, "eta");

  BsmOutcome outcome;

  // Two-fold coincidence: each analyzer photon must click independently.
  optics::DetectorParams detector{eta, kBinIntermediate};
  bool click2 = optics::sample_detection(rng, detector, kBinIntermediate);
  bool click3 = optics::sample_detection(rng, detector, kBinIntermediate);
  if (!click2 || !click3) {
    return outcome;
  }

  // Born-rule walk over the four Bell projections of photons 2 and 3.
  constexpr std::array<BellState, 4> kOrder = {BellState::kPhiPlus, BellState::kPhiMinus,
                                               BellState::kPsiPlus, BellState::kPsiMinus};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u = unit(rng);
  double cumulative = 0.0;
  for (BellState which : kOrder) {
    BellProjection proj = project_bell(state4, 1, 2, which, kBinIntermediate);
    cumulative += proj.probability;
    if (u < cumulative) {
      if (which == BellState::kPsiPlus || which == BellState::kPsiMinus) {
        outcome.success = true;
        outcome.identified =
            which == BellState::kPsiPlus ? BsmIdentified::kPsiPlus : BsmIdentified::kPsiMinus;
        outcome.heralded_state = proj.remainder;
      }
      return outcome;
    }
  }
  // u fell beyond the total projection weight (possible when the state has
  // support outside the gated bin): no conclusive pattern, report failure.
  return outcome;
}

PureState swap_correction(const PureState& heralded, BsmIdentified identified) {
  if (identified == BsmIdentified::kNone) {
    throw std::invalid_argument("swap_correction requires an identified Bell outcome");
  }
  if (heralded.photon_count() != 2) {
    throw std::invalid_argument("swap_correction expects a two-photon state");
  }
  // Photon 4 sits in slot 1 of the heralded pair. Psi+ needs a bit flip;
  // Psi- needs the bit flip followed by a phase flip.
  PureState corrected = apply_single(heralded, 1, optics::polarization_flip());
  if (identified == BsmIdentified::kPsiMinus) {
    corrected = apply_single(corrected, 1, optics::polarization_phase());
  }
  return corrected;
}

RepeaterTrialOutcome run_repeater(const optics::ChannelParams& c1, const optics::ChannelParams& c2,
                                  const optics::ChannelParams& c3, const optics::ChannelParams& c4,
                                  const RepeaterParams& params, std::mt19937_64& rng) {
  check_probability(params.p_source, "p_source");
  check_probability(params.zeta, "zeta");

  RepeaterTrialOutcome trial;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  trial.source1_fired = unit(rng) < params.p_source;
  trial.source2_fired = unit(rng) < params.p_source;

  optics::LossParams loss = optics::LossParams::from_pair_survival(params.zeta);

  // Segment pipeline: distribution over the two channels, photon loss, and the
  // intermediate-bin post-selection drawn as a Bernoulli with the exact
  // success weight of the pure-state pipeline.
  auto run_segment = [&](bool fired, const optics::ChannelParams& ca,
                         const optics::ChannelParams& cb, protocol::DistributionOutcome& result) {
    if (!fired) {
      return false;
    }
    std::vector<bool> survived = optics::sample_loss(rng, loss, 2);
    if (!survived[0] || !survived[1]) {
      return false;
    }
    result = protocol::run_distribution(ca, cb);
    return unit(rng) < result.success_prob;
  };

  protocol::DistributionOutcome seg1;
  protocol::DistributionOutcome seg2;
  trial.segment1_passed = run_segment(trial.source1_fired, c1, c2, seg1);
  trial.segment2_passed = run_segment(trial.source2_fired, c3, c4, seg2);
  if (!trial.segment1_passed || !trial.segment2_passed) {
    return trial;
  }

  // Both segments hold a Phi+ pair in the intermediate bin; photons are
  // ordered 1,2 (segment one) then 3,4 (segment two).
  PureState joint = tensor(seg1.post_state, seg2.post_state);
  trial.bsm_attempted = true;

  BsmOutcome swap = bsm(joint, params.eta, rng);
  trial.bsm_success = swap.success;
  trial.identified = swap.identified;
  if (!swap.success) {
    return trial;
  }

  PureState corrected = swap_correction(swap.heralded_state, swap.identified);
  trial.success = true;
  trial.fidelity = fidelity(corrected, make_bell_phi_plus(kBinIntermediate));
  return trial;
}

double p_pur_kwd(const RepeaterParams& params) {
  return (1.0 - params.gamma) * params.zeta * std::pow(params.p_source, 5) *
         std::pow(params.eta, 8) * params.p_cnot * params.p_cnot * params.p_qnd;
}

double p_pur(double zeta, double p_source, double theta1, double theta2) {
  double c1 = std::cos(theta1);
  double c2 = std::cos(theta2);
  return zeta * p_source * c1 * c1 * c2 * c2;
}

double swap_success_prob(double eta) { return eta * eta / 2.0; }

}  // namespace tbsim::repeater
