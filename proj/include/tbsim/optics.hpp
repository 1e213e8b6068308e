#pragma once

#include <random>
#include <vector>

#include "tbsim/qstate.hpp"

namespace tbsim::optics {

// Birefringence of one channel: theta mixes H/V, phi and chi are the relative
// phases picked up by the two polarizations.
struct ChannelParams {
  double theta = 0.0;
  double phi = 0.0;
  double chi = 0.0;
};

// A Pockels cell flips H<->V during exactly one time-bin.
struct PockelsSchedule {
  TimeBin active_bin = kBinLate;
};

struct LossParams {
  double per_photon_transmission = 1.0;
  double zeta = 1.0;  // pair-survival factor

  // per-photon transmission sqrt(zeta), so a two-photon trial survives with
  // probability zeta.
  static LossParams from_pair_survival(double zeta);
};

struct DetectorParams {
  double efficiency = 1.0;  // eta
  TimeBin gate_bin = kBinIntermediate;
};

// H<->V within the scheduled bin, identity elsewhere.
ModeOperator pockels_unitary(const PockelsSchedule& schedule);

// Unbalanced polarization interferometer: H takes the short path and keeps
// its bin, V takes the long path and moves one bin later (mod 3; the wrap
// only affects the physically unreachable V-bin-2 input).
ModeOperator interferometer_unitary();

// Source-side encoder. On the populated bin-0 inputs: |H,0> -> |H,0> (PBS
// short path), |V,0> -> |H,1> (long path, then the Pockels cell flips V->H on
// late arrival). Rows for bins 1-2 are completed identity-like to keep the
// matrix unitary; the one collision (|H,1>) takes the leftover |V,0> column.
ModeOperator encoder_unitary();

// Station-side decoder: Pockels cell at the scheduled early-arrival bin
// (|H,0> <-> |V,0>) followed by the interferometer. Net effect on populated
// inputs: |H,0> -> |V,1>, |V,0> -> |H,0>, |H,1> -> |H,1>, |V,1> -> |V,2>.
ModeOperator decoder_unitary();

// General polarization unitary applied identically in every time-bin
// (steady-state birefringence):
//   |H> -> e^{i phi} cos(theta) |H> + e^{i chi} sin(theta) |V>
//   |V> -> -e^{-i chi} sin(theta) |H> + e^{-i phi} cos(theta) |V>
ModeOperator channel_unitary(const ChannelParams& p);

// Channel whose polarization rotation differs per time-bin; models a channel
// drifting between a photon's early and late components.
ModeOperator channel_unitary_per_bin(const ChannelParams& bin0, const ChannelParams& bin1,
                                     const ChannelParams& bin2);

// Polarization bit-flip (H<->V) in every bin.
ModeOperator polarization_flip();
// Polarization phase-flip (|V> -> -|V>) in every bin.
ModeOperator polarization_phase();

// Independent Bernoulli(per_photon_transmission) survival per photon.
std::vector<bool> sample_loss(std::mt19937_64& rng, const LossParams& p, int n_photons);

// True with probability eta when the photon arrives inside the gate bin;
// arrivals outside the gate are never detected.
bool sample_detection(std::mt19937_64& rng, const DetectorParams& d, TimeBin arrival_bin);

}  // namespace tbsim::optics
