#include "tbsim/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tbsim {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void check_photon_slot(const PureState& state, int photon) {
  if (photon < 0 || photon >= state.photon_count()) {
    throw std::out_of_range("photon slot " + std::to_string(photon) +
                            " out of range for " + std::to_string(state.photon_count()) +
                            "-photon state");
  }
}

}  // namespace

ModeOperator ModeOperator::identity() {
  ModeOperator op;
  for (int i = 0; i < kModeCount; ++i) op.at(i, i) = 1.0;
  op.unitary = true;
  return op;
}

ModeOperator ModeOperator::adjoint() const {
  ModeOperator out;
  for (int r = 0; r < kModeCount; ++r)
    for (int c = 0; c < kModeCount; ++c) out.at(r, c) = std::conj(at(c, r));
  out.unitary = unitary;
  return out;
}

bool ModeOperator::is_unitary(double tol) const {
  // M†M = I entrywise.
  for (int r = 0; r < kModeCount; ++r) {
    for (int c = 0; c < kModeCount; ++c) {
      Complex acc = 0.0;
      for (int k = 0; k < kModeCount; ++k) acc += std::conj(at(k, r)) * at(k, c);
      const Complex want = (r == c) ? Complex{1.0, 0.0} : Complex{0.0, 0.0};
      if (std::abs(acc - want) > tol) return false;
    }
  }
  return true;
}

ModeOperator operator*(const ModeOperator& lhs, const ModeOperator& rhs) {
  ModeOperator out;
  for (int r = 0; r < kModeCount; ++r) {
    for (int c = 0; c < kModeCount; ++c) {
      Complex acc = 0.0;
      for (int k = 0; k < kModeCount; ++k) acc += lhs.at(r, k) * rhs.at(k, c);
      out.at(r, c) = acc;
    }
  }
  out.unitary = lhs.unitary && rhs.unitary;
  return out;
}

PureState::PureState(int n_photons) : n_photons_(n_photons) {
  if (n_photons < 0) throw std::invalid_argument("negative photon count");
}

Complex PureState::amplitude(Key key) const {
  auto it = amps_.find(key);
  return it == amps_.end() ? Complex{0.0, 0.0} : it->second;
}

Complex PureState::amplitude(const std::vector<ModeLabel>& modes) const {
  return amplitude(pack(modes));
}

void PureState::set_amplitude(Key key, Complex value) {
  if (value == Complex{0.0, 0.0}) {
    amps_.erase(key);
  } else {
    amps_[key] = value;
  }
}

void PureState::set_amplitude(const std::vector<ModeLabel>& modes, Complex value) {
  set_amplitude(pack(modes), value);
}

void PureState::add_amplitude(Key key, Complex value) { amps_[key] += value; }

double PureState::norm_squared() const {
  double total = 0.0;
  for (const auto& [key, amp] : amps_) total += std::norm(amp);
  return total;
}

double PureState::norm() const { return std::sqrt(norm_squared()); }

PureState& PureState::normalize() {
  const double n = norm();
  if (n <= 0.0) return *this;
  for (auto& [key, amp] : amps_) amp /= n;
  return *this;
}

void PureState::prune(double epsilon) {
  for (auto it = amps_.begin(); it != amps_.end();) {
    if (std::abs(it->second) < epsilon) {
      it = amps_.erase(it);
    } else {
      ++it;
    }
  }
}

PureState::Key PureState::pack(const std::vector<ModeLabel>& modes) const {
  if (static_cast<int>(modes.size()) != n_photons_) {
    throw std::invalid_argument("mode tuple length does not match photon count");
  }
  Key key = 0;
  for (int i = n_photons_ - 1; i >= 0; --i) {
    if (!is_valid_bin(modes[i].bin)) throw std::invalid_argument("time-bin out of range");
    key = key * kModeCount + static_cast<Key>(modes[i].index());
  }
  return key;
}

std::vector<ModeLabel> PureState::unpack(Key key) const {
  std::vector<ModeLabel> modes(n_photons_);
  for (int i = 0; i < n_photons_; ++i) {
    modes[i] = ModeLabel::from_index(static_cast<int>(key % kModeCount));
    key /= kModeCount;
  }
  return modes;
}

ModeLabel PureState::mode_at(Key key, int photon) const {
  return ModeLabel::from_index(static_cast<int>((key / stride(photon)) % kModeCount));
}

PureState::Key PureState::stride(int photon) {
  Key s = 1;
  for (int i = 0; i < photon; ++i) s *= kModeCount;
  return s;
}

PureState make_bell_phi_plus(TimeBin bin) { return make_bell(BellState::kPhiPlus, bin); }

PureState make_bell(BellState which, TimeBin bin) {
  if (!is_valid_bin(bin)) throw std::invalid_argument("time-bin out of range");
  const ModeLabel h{Polarization::H, bin};
  const ModeLabel v{Polarization::V, bin};
  PureState state(2);
  switch (which) {
    case BellState::kPhiPlus:
      state.set_amplitude({h, h}, kInvSqrt2);
      state.set_amplitude({v, v}, kInvSqrt2);
      break;
    case BellState::kPhiMinus:
      state.set_amplitude({h, h}, kInvSqrt2);
      state.set_amplitude({v, v}, -kInvSqrt2);
      break;
    case BellState::kPsiPlus:
      state.set_amplitude({h, v}, kInvSqrt2);
      state.set_amplitude({v, h}, kInvSqrt2);
      break;
    case BellState::kPsiMinus:
      state.set_amplitude({h, v}, kInvSqrt2);
      state.set_amplitude({v, h}, -kInvSqrt2);
      break;
  }
  return state;
}

PureState apply_single(const PureState& state, int photon, const ModeOperator& op) {
  check_photon_slot(state, photon);
  const PureState::Key stride = PureState::stride(photon);
  PureState out(state.photon_count());
  for (const auto& [key, amp] : state.amplitudes()) {
    const int col = static_cast<int>((key / stride) % kModeCount);
    const PureState::Key base = key - static_cast<PureState::Key>(col) * stride;
    for (int row = 0; row < kModeCount; ++row) {
      const Complex entry = op.at(row, col);
      if (entry == Complex{0.0, 0.0}) continue;
      out.add_amplitude(base + static_cast<PureState::Key>(row) * stride, entry * amp);
    }
  }
  out.prune();
  return out;
}

PureState tensor(const PureState& a, const PureState& b) {
  PureState out(a.photon_count() + b.photon_count());
  const PureState::Key shift = PureState::stride(a.photon_count());
  for (const auto& [ka, va] : a.amplitudes()) {
    for (const auto& [kb, vb] : b.amplitudes()) {
      out.add_amplitude(ka + kb * shift, va * vb);
    }
  }
  return out;
}

PostSelection post_select(const PureState& state, const ModePredicate& keep) {
  PureState kept(state.photon_count());
  double probability = 0.0;
  for (const auto& [key, amp] : state.amplitudes()) {
    bool all = true;
    for (int photon = 0; photon < state.photon_count() && all; ++photon) {
      all = keep(photon, state.mode_at(key, photon));
    }
    if (all) {
      kept.set_amplitude(key, amp);
      probability += std::norm(amp);
    }
  }
  if (probability > 0.0) kept.normalize();
  return {std::move(kept), probability};
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.photon_count() != b.photon_count()) {
    throw std::invalid_argument("fidelity of states with different photon counts");
  }
  // Iterate over the smaller map, look up in the other.
  const PureState& small = a.amplitudes().size() <= b.amplitudes().size() ? a : b;
  const PureState& large = a.amplitudes().size() <= b.amplitudes().size() ? b : a;
  Complex overlap = 0.0;
  for (const auto& [key, amp] : small.amplitudes()) {
    overlap += std::conj(amp) * large.amplitude(key);
  }
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

namespace {

// Amplitude of |pol_i, pol_j> within the chosen Bell state; the Bell state
// lives entirely in one time-bin.
Complex bell_entry(BellState which, TimeBin bin, ModeLabel mi, ModeLabel mj) {
  if (mi.bin != bin || mj.bin != bin) return 0.0;
  const bool hv = mi.pol == Polarization::H && mj.pol == Polarization::V;
  const bool vh = mi.pol == Polarization::V && mj.pol == Polarization::H;
  const bool hh = mi.pol == Polarization::H && mj.pol == Polarization::H;
  const bool vv = mi.pol == Polarization::V && mj.pol == Polarization::V;
  switch (which) {
    case BellState::kPhiPlus:
      return hh || vv ? kInvSqrt2 : 0.0;
    case BellState::kPhiMinus:
      return hh ? kInvSqrt2 : (vv ? -kInvSqrt2 : 0.0);
    case BellState::kPsiPlus:
      return hv || vh ? kInvSqrt2 : 0.0;
    case BellState::kPsiMinus:
      return hv ? kInvSqrt2 : (vh ? -kInvSqrt2 : 0.0);
  }
  return 0.0;
}

// Drops the base-6 digits of the two measured photons from the key.
PureState::Key drop_photons(const PureState& state, PureState::Key key, int pi, int pj) {
  PureState::Key out = 0;
  PureState::Key mult = 1;
  for (int photon = 0; photon < state.photon_count(); ++photon) {
    if (photon == pi || photon == pj) continue;
    out += static_cast<PureState::Key>(state.mode_at(key, photon).index()) * mult;
    mult *= kModeCount;
  }
  return out;
}

}  // namespace

BellProjection project_bell(const PureState& state, int photon_i, int photon_j,
                            BellState which, TimeBin bin) {
  check_photon_slot(state, photon_i);
  check_photon_slot(state, photon_j);
  if (photon_i == photon_j) throw std::invalid_argument("Bell projection needs distinct photons");
  if (!is_valid_bin(bin)) throw std::invalid_argument("time-bin out of range");

  PureState remainder(state.photon_count() - 2);
  for (const auto& [key, amp] : state.amplitudes()) {
    const Complex coeff =
        std::conj(bell_entry(which, bin, state.mode_at(key, photon_i), state.mode_at(key, photon_j)));
    if (coeff == Complex{0.0, 0.0}) continue;
    remainder.add_amplitude(drop_photons(state, key, photon_i, photon_j), coeff * amp);
  }
  remainder.prune();
  const double probability = remainder.norm_squared();
  if (probability > 0.0) remainder.normalize();
  return {std::move(remainder), probability};
}

}  // namespace tbsim
