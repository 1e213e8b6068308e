#pragma once

#include <random>

#include "tbsim/optics.hpp"
#include "tbsim/protocol.hpp"
#include "tbsim/qstate.hpp"

namespace tbsim::repeater {

// Throughput parameters shared by this scheme and the KWD comparator.
struct RepeaterParams {
  double gamma = 0.5;     // fidelity reduction with distance (KWD only)
  double zeta = 0.5;      // photon loss factor per purified pair
  double p_source = 0.9;  // probability the source emits the photon pair
  double eta = 0.8;       // detector efficiency
  double p_cnot = 0.25;   // CNOT success probability (KWD only)
  double p_qnd = 0.125;   // QND measurement success probability (KWD only)
};

// Which Bell state a linear-optics analyzer can herald. Phi+/Phi- produce the
// same detection signature and are reported as failure.
enum class BsmIdentified { kNone, kPsiPlus, kPsiMinus };

struct BsmOutcome {
  bool success = false;
  BsmIdentified identified = BsmIdentified::kNone;
  PureState heralded_state;  // remaining photons 1 and 4; empty unless success

  BsmOutcome() : heralded_state(2) {}
};

// Bell-state measurement on photon slots 2 and 3 (0-based slots 1 and 2) of a
// four-photon state gated to the intermediate bin. Both photons must fire a
// detector (probability eta each); given a coincidence the outcome follows the
// Born weights of the four Bell states, of which only Psi+/Psi- herald success.
BsmOutcome bsm(const PureState& state4, double eta, std::mt19937_64& rng);

// Local Pauli fix-up on photon 4 turning the heralded Psi+/Psi- into Phi+:
// bit-flip for Psi+, bit-flip then phase-flip for Psi-.
PureState swap_correction(const PureState& heralded, BsmIdentified identified);

struct RepeaterTrialOutcome {
  bool source1_fired = false;
  bool source2_fired = false;
  bool segment1_passed = false;  // source fired, no photon lost, intermediate-bin gate passed
  bool segment2_passed = false;
  bool bsm_attempted = false;
  bool bsm_success = false;
  bool success = false;  // end-to-end: heralded pair delivered to Alice and Bob
  BsmIdentified identified = BsmIdentified::kNone;
  double fidelity = 0.0;  // of the corrected photon-1,4 pair, valid when success
};

// One trial of the two-segment repeater: sources S12 and S34 each fire with
// probability p_source, each segment runs the distribution pipeline over its
// two channels with per-photon loss sqrt(zeta), and the BSM on photons 2,3
// swaps the entanglement out to photons 1,4.
RepeaterTrialOutcome run_repeater(const optics::ChannelParams& c1, const optics::ChannelParams& c2,
                                  const optics::ChannelParams& c3, const optics::ChannelParams& c4,
                                  const RepeaterParams& params, std::mt19937_64& rng);

// Purified-pair probability per attempt for the KWD linear-optical repeater:
// (1 - gamma) * zeta * p_source^5 * eta^8 * p_cnot^2 * p_qnd
double p_pur_kwd(const RepeaterParams& params);

// Purified-pair probability per attempt for this scheme:
// zeta * p_source * cos^2(theta1) * cos^2(theta2)
double p_pur(double zeta, double p_source, double theta1, double theta2);

// eta^2 / 2: two-fold coincidence times the linear-optics BSM ceiling.
double swap_success_prob(double eta);

}  // namespace tbsim::repeater
