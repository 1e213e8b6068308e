#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <vector>

namespace tbsim {

using Complex = std::complex<double>;

// Stored amplitudes with |a| below this are dropped after a linear map.
inline constexpr double kAmplitudeEpsilon = 1e-15;
// Tolerance for normalization and unitarity checks.
inline constexpr double kNormTolerance = 1e-12;

enum class Polarization : std::uint8_t { H = 0, V = 1 };

constexpr Polarization flipped(Polarization p) {
  return p == Polarization::H ? Polarization::V : Polarization::H;
}

// Discrete arrival slot of a photon. The encoder populates bins {0,1}
// (early/late); after decoding the slots read as too-early / intermediate /
// too-late. The semantic label is derived from pipeline stage, never stored.
using TimeBin = int;
inline constexpr int kBinCount = 3;
inline constexpr TimeBin kBinEarly = 0;
inline constexpr TimeBin kBinLate = 1;
inline constexpr TimeBin kBinTooEarly = 0;
inline constexpr TimeBin kBinIntermediate = 1;
inline constexpr TimeBin kBinTooLate = 2;

constexpr bool is_valid_bin(TimeBin bin) { return bin >= 0 && bin < kBinCount; }

// One (polarization, time-bin) mode of a single photon.
struct ModeLabel {
  Polarization pol = Polarization::H;
  TimeBin bin = 0;

  constexpr int index() const { return static_cast<int>(pol) * kBinCount + bin; }
  static constexpr ModeLabel from_index(int index) {
    return ModeLabel{static_cast<Polarization>(index / kBinCount), index % kBinCount};
  }
  friend constexpr bool operator==(const ModeLabel&, const ModeLabel&) = default;
};

// Modes per photon: 2 polarizations x 3 time-bins.
inline constexpr int kModeCount = 2 * kBinCount;

// Linear map on one photon's six-dimensional mode space (row-major).
// `unitary` is declared by the constructor of the operator; is_unitary()
// verifies the claim numerically.
struct ModeOperator {
  std::array<Complex, kModeCount * kModeCount> matrix{};
  bool unitary = false;

  static ModeOperator identity();

  Complex& at(int row, int col) { return matrix[row * kModeCount + col]; }
  Complex at(int row, int col) const { return matrix[row * kModeCount + col]; }

  ModeOperator adjoint() const;
  bool is_unitary(double tol = kNormTolerance) const;

  // Composition: (lhs * rhs) applies rhs first, then lhs.
  friend ModeOperator operator*(const ModeOperator& lhs, const ModeOperator& rhs);
};

enum class BellState { kPhiPlus, kPhiMinus, kPsiPlus, kPsiMinus };

// Pure state of n photons, each occupying one (polarization, time-bin) mode.
// Sparse map over joint mode assignments; absent keys mean amplitude zero.
// Keys pack the per-photon mode indices base-6, photon 0 least significant.
// All mutating operations return new values; states are cheap to copy.
class PureState {
 public:
  using Key = std::uint32_t;
  using AmplitudeMap = std::map<Key, Complex>;

  explicit PureState(int n_photons);

  int photon_count() const { return n_photons_; }
  // True for the zero state (the empty-state marker of failed projections).
  bool empty() const { return amps_.empty(); }

  const AmplitudeMap& amplitudes() const { return amps_; }

  Complex amplitude(Key key) const;
  Complex amplitude(const std::vector<ModeLabel>& modes) const;
  void set_amplitude(Key key, Complex value);
  void set_amplitude(const std::vector<ModeLabel>& modes, Complex value);
  void add_amplitude(Key key, Complex value);

  double norm_squared() const;
  double norm() const;
  // Scales to unit norm; the zero state is left untouched.
  PureState& normalize();
  void prune(double epsilon = kAmplitudeEpsilon);

  Key pack(const std::vector<ModeLabel>& modes) const;
  std::vector<ModeLabel> unpack(Key key) const;
  ModeLabel mode_at(Key key, int photon) const;

  // 6^photon, the key stride of the given photon slot.
  static Key stride(int photon);

 private:
  int n_photons_;
  AmplitudeMap amps_;
};

// (1/sqrt2)(|H,bin>|H,bin> + |V,bin>|V,bin>)
PureState make_bell_phi_plus(TimeBin bin);
// Any of the four polarization Bell states at the given bin.
PureState make_bell(BellState which, TimeBin bin);

// Applies `op` to the mode factor of one photon; all other photons untouched.
PureState apply_single(const PureState& state, int photon, const ModeOperator& op);

// Joint state of the photons of `a` followed by the photons of `b`.
PureState tensor(const PureState& a, const PureState& b);

using ModePredicate = std::function<bool(int photon, ModeLabel mode)>;

struct PostSelection {
  PureState state;     // renormalized restriction; empty when probability 0
  double probability;  // total squared amplitude of the kept assignments
};

// Keeps the assignments where every photon satisfies the predicate.
PostSelection post_select(const PureState& state, const ModePredicate& keep);

// |<a|b>|^2, clamped to [0,1]. Throws on mismatched photon count.
double fidelity(const PureState& a, const PureState& b);

struct BellProjection {
  PureState remainder;  // photons i,j removed; empty when probability 0
  double probability;
};

// Projects photons i and j onto the chosen polarization Bell state at `bin`
// and returns the renormalized remainder on the other photons.
BellProjection project_bell(const PureState& state, int photon_i, int photon_j,
                            BellState which, TimeBin bin);

}  // namespace tbsim
