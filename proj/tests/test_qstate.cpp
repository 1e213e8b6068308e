#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <doctest.h>

#include "tbsim/qstate.hpp"
#include "test_helpers.hpp"

using namespace tbsim;

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

std::vector<ModeLabel> hh(TimeBin bin) {
  return {ModeLabel{Polarization::H, bin}, ModeLabel{Polarization::H, bin}};
}
std::vector<ModeLabel> vv(TimeBin bin) {
  return {ModeLabel{Polarization::V, bin}, ModeLabel{Polarization::V, bin}};
}

// Polarization amplitudes <p2 p3|B> of the four Bell states, used by the
// brute-force projection oracle below.
Complex bell_coeff(BellState which, Polarization p2, Polarization p3) {
  bool hh_term = p2 == Polarization::H && p3 == Polarization::H;
  bool vv_term = p2 == Polarization::V && p3 == Polarization::V;
  bool hv_term = p2 == Polarization::H && p3 == Polarization::V;
  bool vh_term = p2 == Polarization::V && p3 == Polarization::H;
  switch (which) {
    case BellState::kPhiPlus:
      return hh_term || vv_term ? kInvSqrt2 : 0.0;
    case BellState::kPhiMinus:
      return hh_term ? kInvSqrt2 : vv_term ? -kInvSqrt2 : 0.0;
    case BellState::kPsiPlus:
      return hv_term || vh_term ? kInvSqrt2 : 0.0;
    case BellState::kPsiMinus:
      return hv_term ? kInvSqrt2 : vh_term ? -kInvSqrt2 : 0.0;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("mode labels map to indices and back") {
  for (int i = 0; i < kModeCount; ++i) {
    CHECK(ModeLabel::from_index(i).index() == i);
  }
  CHECK(ModeLabel{Polarization::H, 0}.index() == 0);
  CHECK(ModeLabel{Polarization::H, 2}.index() == 2);
  CHECK(ModeLabel{Polarization::V, 0}.index() == 3);
  CHECK(ModeLabel{Polarization::V, 2}.index() == 5);
}

TEST_CASE("phi+ holds equal HH and VV amplitudes at the requested bin") {
  for (TimeBin bin = 0; bin < kBinCount; ++bin) {
    PureState bell = make_bell_phi_plus(bin);
    CHECK(bell.photon_count() == 2);
    CHECK(bell.amplitudes().size() == 2);
    CHECK(std::abs(bell.amplitude(hh(bin)) - Complex(kInvSqrt2)) < 1e-15);
    CHECK(std::abs(bell.amplitude(vv(bin)) - Complex(kInvSqrt2)) < 1e-15);
    CHECK(bell.norm() == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("the four bell states are orthonormal") {
  const BellState all[] = {BellState::kPhiPlus, BellState::kPhiMinus, BellState::kPsiPlus,
                           BellState::kPsiMinus};
  for (BellState a : all) {
    for (BellState b : all) {
      double f = fidelity(make_bell(a, kBinIntermediate), make_bell(b, kBinIntermediate));
      CHECK(f == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-13));
    }
  }
}

TEST_CASE("fidelity of phi+ against a bare |HH> is one half") {
  PureState product(2);
  product.set_amplitude(hh(kBinIntermediate), 1.0);
  CHECK(fidelity(make_bell_phi_plus(kBinIntermediate), product) ==
        doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("fidelity is symmetric and blind to global phase") {
  std::mt19937_64 rng(7);
  PureState a = testing::random_state(rng, 2);
  PureState b = testing::random_state(rng, 2);
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-13));

  PureState rotated(2);
  const Complex phase = std::polar(1.0, 1.234);
  for (const auto& [key, amp] : a.amplitudes()) rotated.set_amplitude(key, phase * amp);
  CHECK(fidelity(rotated, b) == doctest::Approx(fidelity(a, b)).epsilon(1e-12));
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("fidelity rejects mismatched photon counts") {
  CHECK_THROWS_AS(fidelity(PureState(1), PureState(2)), std::invalid_argument);
}

TEST_CASE("random unitaries preserve the norm through apply_single") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 25; ++rep) {
    ModeOperator u = testing::random_unitary(rng);
    REQUIRE(u.is_unitary());
    PureState state = testing::random_state(rng, 3);
    int photon = static_cast<int>(rng() % 3);
    PureState mapped = apply_single(state, photon, u);
    CHECK(mapped.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("apply_single touches only the targeted photon") {
  // X on photon 1 of |H0 H0>: photon 0 must stay put.
  ModeOperator x;
  for (TimeBin bin = 0; bin < kBinCount; ++bin) {
    x.at(ModeLabel{Polarization::V, bin}.index(), ModeLabel{Polarization::H, bin}.index()) = 1.0;
    x.at(ModeLabel{Polarization::H, bin}.index(), ModeLabel{Polarization::V, bin}.index()) = 1.0;
  }
  PureState state(2);
  state.set_amplitude(hh(0), 1.0);
  PureState mapped = apply_single(state, 1, x);
  CHECK(std::abs(mapped.amplitude({ModeLabel{Polarization::H, 0}, ModeLabel{Polarization::V, 0}}) -
                 Complex(1.0)) < 1e-15);
  CHECK(mapped.amplitudes().size() == 1);
}

TEST_CASE("apply_single validates the photon slot") {
  PureState state(2);
  CHECK_THROWS_AS(apply_single(state, 2, ModeOperator::identity()), std::out_of_range);
  CHECK_THROWS_AS(apply_single(state, -1, ModeOperator::identity()), std::out_of_range);
}

TEST_CASE("tensor concatenates photons and multiplies amplitudes") {
  PureState a(1);
  a.set_amplitude({ModeLabel{Polarization::H, 0}}, Complex(0.6));
  a.set_amplitude({ModeLabel{Polarization::V, 1}}, Complex(0.8));
  PureState b(1);
  b.set_amplitude({ModeLabel{Polarization::V, 2}}, Complex(0.0, 1.0));

  PureState joint = tensor(a, b);
  CHECK(joint.photon_count() == 2);
  CHECK(std::abs(joint.amplitude({ModeLabel{Polarization::H, 0}, ModeLabel{Polarization::V, 2}}) -
                 Complex(0.0, 0.6)) < 1e-15);
  CHECK(std::abs(joint.amplitude({ModeLabel{Polarization::V, 1}, ModeLabel{Polarization::V, 2}}) -
                 Complex(0.0, 0.8)) < 1e-15);
  CHECK(joint.norm() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("post_select partitions the squared norm") {
  std::mt19937_64 rng(23);
  PureState state = testing::random_state(rng, 2);

  auto kept = post_select(state, [](int, ModeLabel m) { return m.bin == kBinIntermediate; });
  CHECK(kept.probability >= 0.0);
  CHECK(kept.probability <= 1.0);
  CHECK(kept.state.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // The rejected weight (assignments with any photon off the gated bin) must
  // complement the kept probability exactly.
  double off_weight = 0.0;
  for (const auto& [key, amp] : state.amplitudes()) {
    bool all_mid = true;
    for (int p = 0; p < 2; ++p) all_mid = all_mid && state.mode_at(key, p).bin == kBinIntermediate;
    if (!all_mid) off_weight += std::norm(amp);
  }
  CHECK(off_weight == doctest::Approx(1.0 - kept.probability).epsilon(1e-12));

  auto everything = post_select(state, [](int, ModeLabel) { return true; });
  CHECK(everything.probability == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("post_select on an impossible predicate yields the empty state") {
  PureState bell = make_bell_phi_plus(kBinEarly);
  auto selected = post_select(bell, [](int, ModeLabel m) { return m.bin == kBinTooLate; });
  CHECK(selected.probability == 0.0);
  CHECK(selected.state.empty());
  // Normalizing the zero state must stay a no-op rather than dividing by 0.
  selected.state.normalize();
  CHECK(selected.state.empty());
}

TEST_CASE("pack and unpack round-trip and validate bins") {
  PureState state(3);
  std::vector<ModeLabel> modes = {ModeLabel{Polarization::V, 2}, ModeLabel{Polarization::H, 1},
                                  ModeLabel{Polarization::V, 0}};
  auto key = state.pack(modes);
  auto back = state.unpack(key);
  REQUIRE(back.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(back[i] == modes[i]);
  CHECK(state.mode_at(key, 0) == modes[0]);
  CHECK(state.mode_at(key, 2) == modes[2]);

  CHECK_THROWS_AS(state.pack({ModeLabel{Polarization::H, 3}, ModeLabel{Polarization::H, 0},
                              ModeLabel{Polarization::H, 0}}),
                  std::invalid_argument);
}

TEST_CASE("add_amplitude accumulates and prune drops dust") {
  PureState state(1);
  state.add_amplitude(0, Complex(0.5));
  state.add_amplitude(0, Complex(0.5));
  state.add_amplitude(1, Complex(1e-16));
  CHECK(std::abs(state.amplitude(PureState::Key{0}) - Complex(1.0)) < 1e-15);
  state.prune();
  CHECK(state.amplitudes().size() == 1);
}

TEST_CASE("project_bell on phi+ x phi+ gives four equal quarters") {
  // Entanglement-swapping identity: each Bell projection of the inner pair
  // carries weight 1/4 and leaves the outer pair in the matching Bell state.
  PureState joint =
      tensor(make_bell_phi_plus(kBinIntermediate), make_bell_phi_plus(kBinIntermediate));
  const BellState all[] = {BellState::kPhiPlus, BellState::kPhiMinus, BellState::kPsiPlus,
                           BellState::kPsiMinus};
  double total = 0.0;
  for (BellState which : all) {
    BellProjection proj = project_bell(joint, 1, 2, which, kBinIntermediate);
    CHECK(proj.probability == doctest::Approx(0.25).epsilon(1e-12));
    REQUIRE(proj.remainder.photon_count() == 2);
    CHECK(fidelity(proj.remainder, make_bell(which, kBinIntermediate)) ==
          doctest::Approx(1.0).epsilon(1e-12));
    total += proj.probability;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("project_bell matches a brute-force polarization-basis oracle") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 10; ++rep) {
    PureState state = testing::random_state_at_bin(rng, 4, kBinIntermediate);
    const BellState all[] = {BellState::kPhiPlus, BellState::kPhiMinus, BellState::kPsiPlus,
                             BellState::kPsiMinus};
    for (BellState which : all) {
      // Oracle: expand over the 16 polarization assignments at the gated bin,
      // contract photons 1,2 against the Bell coefficients, sum |.|^2.
      double expected = 0.0;
      const Polarization pols[] = {Polarization::H, Polarization::V};
      for (Polarization p0 : pols) {
        for (Polarization p3 : pols) {
          Complex contracted = 0.0;
          for (Polarization p1 : pols) {
            for (Polarization p2 : pols) {
              std::vector<ModeLabel> modes = {
                  ModeLabel{p0, kBinIntermediate}, ModeLabel{p1, kBinIntermediate},
                  ModeLabel{p2, kBinIntermediate}, ModeLabel{p3, kBinIntermediate}};
              contracted += std::conj(bell_coeff(which, p1, p2)) * state.amplitude(modes);
            }
          }
          expected += std::norm(contracted);
        }
      }
      BellProjection proj = project_bell(state, 1, 2, which, kBinIntermediate);
      CHECK(proj.probability == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("project_bell with no overlap returns the empty remainder") {
  // Both inner photons sit in the early bin: projecting at the intermediate
  // bin finds nothing.
  PureState joint = tensor(make_bell_phi_plus(kBinEarly), make_bell_phi_plus(kBinEarly));
  BellProjection proj = project_bell(joint, 1, 2, BellState::kPsiPlus, kBinIntermediate);
  CHECK(proj.probability == 0.0);
  CHECK(proj.remainder.empty());
}

TEST_CASE("operator composition applies right factor first") {
  std::mt19937_64 rng(41);
  ModeOperator a = testing::random_unitary(rng);
  ModeOperator b = testing::random_unitary(rng);
  PureState state = testing::random_state(rng, 1);

  PureState stepwise = apply_single(apply_single(state, 0, b), 0, a);
  PureState composed = apply_single(state, 0, a * b);
  CHECK(fidelity(stepwise, composed) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adjoint inverts a unitary") {
  std::mt19937_64 rng(43);
  ModeOperator u = testing::random_unitary(rng);
  ModeOperator round_trip = u.adjoint() * u;
  for (int r = 0; r < kModeCount; ++r) {
    for (int c = 0; c < kModeCount; ++c) {
      CHECK(std::abs(round_trip.at(r, c) - (r == c ? Complex(1.0) : Complex(0.0))) < 1e-12);
    }
  }
}
