#include "tbsim/optics.hpp"

#include <cmath>
#include <stdexcept>

namespace tbsim::optics {

namespace {

ModeOperator permutation(const std::array<int, kModeCount>& image) {
  ModeOperator op;
  for (int col = 0; col < kModeCount; ++col) op.at(image[col], col) = 1.0;
  op.unitary = true;
  return op;
}

int idx(Polarization pol, TimeBin bin) { return ModeLabel{pol, bin}.index(); }

}  // namespace

LossParams LossParams::from_pair_survival(double zeta) {
  if (zeta < 0.0 || zeta > 1.0) throw std::invalid_argument("pair-survival factor outside [0,1]");
  return LossParams{std::sqrt(zeta), zeta};
}

ModeOperator pockels_unitary(const PockelsSchedule& schedule) {
  if (!is_valid_bin(schedule.active_bin)) throw std::invalid_argument("invalid Pockels bin");
  std::array<int, kModeCount> image{};
  for (int i = 0; i < kModeCount; ++i) image[i] = i;
  const ModeLabel h{Polarization::H, schedule.active_bin};
  const ModeLabel v{Polarization::V, schedule.active_bin};
  image[h.index()] = v.index();
  image[v.index()] = h.index();
  return permutation(image);
}

ModeOperator interferometer_unitary() {
  std::array<int, kModeCount> image{};
  for (TimeBin bin = 0; bin < kBinCount; ++bin) {
    image[idx(Polarization::H, bin)] = idx(Polarization::H, bin);
    image[idx(Polarization::V, bin)] = idx(Polarization::V, (bin + 1) % kBinCount);
  }
  return permutation(image);
}

ModeOperator encoder_unitary() {
  std::array<int, kModeCount> image{};
  image[idx(Polarization::H, 0)] = idx(Polarization::H, 0);
  image[idx(Polarization::V, 0)] = idx(Polarization::H, 1);
  // Unused inputs, completed identity-like; |H,1> takes the leftover column.
  image[idx(Polarization::H, 1)] = idx(Polarization::V, 0);
  image[idx(Polarization::H, 2)] = idx(Polarization::H, 2);
  image[idx(Polarization::V, 1)] = idx(Polarization::V, 1);
  image[idx(Polarization::V, 2)] = idx(Polarization::V, 2);
  return permutation(image);
}

ModeOperator decoder_unitary() {
  return interferometer_unitary() * pockels_unitary({kBinTooEarly});
}

ModeOperator channel_unitary(const ChannelParams& p) {
  return channel_unitary_per_bin(p, p, p);
}

ModeOperator channel_unitary_per_bin(const ChannelParams& bin0, const ChannelParams& bin1,
                                     const ChannelParams& bin2) {
  const std::array<const ChannelParams*, kBinCount> per_bin{&bin0, &bin1, &bin2};
  ModeOperator op;
  for (TimeBin bin = 0; bin < kBinCount; ++bin) {
    const ChannelParams& p = *per_bin[bin];
    const double c = std::cos(p.theta);
    const double s = std::sin(p.theta);
    const Complex eiphi = std::polar(1.0, p.phi);
    const Complex eichi = std::polar(1.0, p.chi);
    op.at(idx(Polarization::H, bin), idx(Polarization::H, bin)) = eiphi * c;
    op.at(idx(Polarization::V, bin), idx(Polarization::H, bin)) = eichi * s;
    op.at(idx(Polarization::H, bin), idx(Polarization::V, bin)) = -std::conj(eichi) * s;
    op.at(idx(Polarization::V, bin), idx(Polarization::V, bin)) = std::conj(eiphi) * c;
  }
  op.unitary = true;
  return op;
}

ModeOperator polarization_flip() {
  std::array<int, kModeCount> image{};
  for (TimeBin bin = 0; bin < kBinCount; ++bin) {
    image[idx(Polarization::H, bin)] = idx(Polarization::V, bin);
    image[idx(Polarization::V, bin)] = idx(Polarization::H, bin);
  }
  return permutation(image);
}

ModeOperator polarization_phase() {
  ModeOperator op;
  for (TimeBin bin = 0; bin < kBinCount; ++bin) {
    op.at(idx(Polarization::H, bin), idx(Polarization::H, bin)) = 1.0;
    op.at(idx(Polarization::V, bin), idx(Polarization::V, bin)) = -1.0;
  }
  op.unitary = true;
  return op;
}

std::vector<bool> sample_loss(std::mt19937_64& rng, const LossParams& p, int n_photons) {
  if (p.per_photon_transmission < 0.0 || p.per_photon_transmission > 1.0) {
    throw std::invalid_argument("transmission outside [0,1]");
  }
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<bool> survived(n_photons);
  for (int i = 0; i < n_photons; ++i) survived[i] = u(rng) < p.per_photon_transmission;
  return survived;
}

bool sample_detection(std::mt19937_64& rng, const DetectorParams& d, TimeBin arrival_bin) {
  if (d.efficiency < 0.0 || d.efficiency > 1.0) {
    throw std::invalid_argument("detector efficiency outside [0,1]");
  }
  if (arrival_bin != d.gate_bin) return false;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < d.efficiency;
}

}  // namespace tbsim::optics
