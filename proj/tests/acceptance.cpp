// Acceptance gate: one pass/fail line per criterion, nonzero exit when any
// fails. Tolerances are pinned here, not configurable.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "tbsim/montecarlo.hpp"
#include "tbsim/protocol.hpp"
#include "tbsim/qstate.hpp"
#include "tbsim/repeater.hpp"

using namespace tbsim;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

void report(int index, const char* label, bool ok, const std::string& detail) {
  std::printf("%s  %d. %-26s %s\n", ok ? "PASS" : "FAIL", index, label, detail.c_str());
  if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(const char* format, ...) {
  char buf[256];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// --- criterion 1: error-freedom over random steady-state channels ----------

void criterion_error_freedom() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(1001);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  double min_fidelity = 1.0;
  int post_selected = 0;
  for (int i = 0; i < 1000; ++i) {
    optics::ChannelParams c1{angle(rng), angle(rng), angle(rng)};
    optics::ChannelParams c2{angle(rng), angle(rng), angle(rng)};
    protocol::DistributionOutcome out = protocol::run_distribution(c1, c2);
    if (out.success_prob > 1e-12) {
      ++post_selected;
      min_fidelity = std::min(min_fidelity, out.fidelity_phi_plus);
    }
  }
  double elapsed = seconds_since(start);
  bool ok = post_selected > 900 && min_fidelity >= 1.0 - 1e-9 && elapsed < 5.0;
  report(1, "error-freedom",
         ok, fmt("min fidelity %.12f over %d post-selected draws (%.2f s)", min_fidelity,
                 post_selected, elapsed));
}

// --- criterion 2: success law, exact grid + Monte Carlo --------------------

void criterion_success_law() {
  auto start = std::chrono::steady_clock::now();
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      double t1 = kPi / 2.0 * i / 19.0;
      double t2 = kPi / 2.0 * j / 19.0;
      double sim = protocol::run_distribution({t1, 0.3, -0.8}, {t2, 1.9, 0.2}).success_prob;
      worst = std::max(worst, std::abs(sim - protocol::analytic_success_prob(t1, t2)));
    }
  }

  mc::DistributeExperiment exp;
  exp.channel1.theta = mc::ParamDistribution::fixed(kPi / 4.0);
  exp.channel2.theta = mc::ParamDistribution::fixed(kPi / 4.0);
  const std::uint64_t n = 100000;
  mc::RunStats stats = mc::run_distribute_trials(exp, n, 20002);
  double sigma = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
  double deviation = std::abs(stats.mean_success - 0.25);

  double elapsed = seconds_since(start);
  bool ok = worst < 1e-12 && deviation <= 3.0 * sigma && elapsed < 30.0;
  report(2, "success law", ok,
         fmt("grid max err %.2e, MC mean %.5f (3 sigma %.5f, %.2f s)", worst,
             stats.mean_success, 3.0 * sigma, elapsed));
}

// --- criterion 3: quarter average over fully random theta ------------------

void criterion_long_run_average() {
  mc::DistributeExperiment exp;  // theta, phi, chi all uniform over [0, 2pi)
  const std::uint64_t n = 100000;
  mc::RunStats stats = mc::run_distribute_trials(exp, n, 30003);
  double sigma = std::sqrt(0.25 * 0.75 / static_cast<double>(n));
  bool ok = std::abs(stats.mean_success - 0.25) <= 3.0 * sigma;
  report(3, "long-run average 1/4", ok,
         fmt("mean %.5f vs 0.25 (3 sigma %.5f)", stats.mean_success, 3.0 * sigma));
}

// --- criterion 4: Eq. 6 regime reproduction ---------------------------------

void criterion_kwd_rate() {
  repeater::RepeaterParams params;  // gamma .5 zeta .5 p_source .9 p_cnot .25 p_qnd .125
  params.eta = 0.3;
  double low = repeater::p_pur_kwd(params);
  params.eta = 0.8;
  double high = repeater::p_pur_kwd(params);

  bool ok = std::abs(std::log10(low) - (-7.0)) <= 0.5 &&
            std::abs(std::log10(high) - (-4.0)) <= 0.5 &&
            std::abs(low / 7.56680642578125e-8 - 1.0) < 1e-12 &&
            std::abs(high / 1.934917632e-4 - 1.0) < 1e-12;
  report(4, "KWD rate (Eq. 6)", ok,
         fmt("eta .3 -> %.4e (log10 %.3f), eta .8 -> %.4e (log10 %.3f)", low, std::log10(low),
             high, std::log10(high)));
}

// --- criterion 5: Eq. 7 and the orders-of-magnitude ratio -------------------

void criterion_rate_comparison() {
  double base = repeater::p_pur(0.5, 0.9, kPi / 4.0, kPi / 4.0);
  double low_source = repeater::p_pur(0.5, 0.1, kPi / 4.0, kPi / 4.0);

  repeater::RepeaterParams params;
  params.eta = 0.3;
  double log_low = std::log10(base / repeater::p_pur_kwd(params));
  params.eta = 0.8;
  double log_high = std::log10(base / repeater::p_pur_kwd(params));

  bool ok = std::abs(base - 0.1125) < 1e-12 && std::abs(low_source - 0.0125) < 1e-12 &&
            log_low >= 5.5 && log_low <= 6.5 && log_high >= 2.5 && log_high <= 3.5;
  report(5, "rate advantage (Eq. 7)", ok,
         fmt("p_pur %.6f / %.6f, log10 ratios %.3f and %.3f", base, low_source, log_low,
             log_high));
}

// --- criterion 6: swap success rate and post-swap fidelity ------------------

void criterion_swap() {
  std::mt19937_64 rng(60006);
  repeater::RepeaterParams params;
  params.zeta = 1.0;
  params.p_source = 1.0;
  params.eta = 0.8;
  optics::ChannelParams id{0.0, 0.0, 0.0};

  const int n = 100000;
  int attempted = 0;
  int successes = 0;
  double min_fidelity = 1.0;
  for (int i = 0; i < n; ++i) {
    repeater::RepeaterTrialOutcome trial = repeater::run_repeater(id, id, id, id, params, rng);
    attempted += trial.bsm_attempted ? 1 : 0;
    if (trial.success) {
      ++successes;
      min_fidelity = std::min(min_fidelity, trial.fidelity);
    }
  }
  double rate = static_cast<double>(successes) / n;
  double sigma = std::sqrt(0.32 * 0.68 / static_cast<double>(n));
  bool ok = attempted == n && std::abs(rate - 0.32) <= 3.0 * sigma &&
            (successes == 0 || min_fidelity >= 1.0 - 1e-9);
  report(6, "entanglement swap", ok,
         fmt("BSM rate %.5f vs 0.32 (3 sigma %.5f), min fidelity %.12f", rate, 3.0 * sigma,
             min_fidelity));
}

// --- criterion 7: Bell projection vs brute-force oracle ---------------------

Complex bell_coeff(BellState which, Polarization p2, Polarization p3) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  bool hh = p2 == Polarization::H && p3 == Polarization::H;
  bool vv = p2 == Polarization::V && p3 == Polarization::V;
  bool hv = p2 == Polarization::H && p3 == Polarization::V;
  bool vh = p2 == Polarization::V && p3 == Polarization::H;
  switch (which) {
    case BellState::kPhiPlus:
      return hh || vv ? inv_sqrt2 : 0.0;
    case BellState::kPhiMinus:
      return hh ? inv_sqrt2 : vv ? -inv_sqrt2 : 0.0;
    case BellState::kPsiPlus:
      return hv || vh ? inv_sqrt2 : 0.0;
    case BellState::kPsiMinus:
      return hv ? inv_sqrt2 : vh ? -inv_sqrt2 : 0.0;
  }
  return 0.0;
}

void criterion_projection_oracle() {
  PureState joint =
      tensor(make_bell_phi_plus(kBinIntermediate), make_bell_phi_plus(kBinIntermediate));
  const BellState all[] = {BellState::kPhiPlus, BellState::kPhiMinus, BellState::kPsiPlus,
                           BellState::kPsiMinus};
  const Polarization pols[] = {Polarization::H, Polarization::V};

  double worst = 0.0;
  for (BellState which : all) {
    // Brute force over all 16 polarization assignments at the gated bin.
    double oracle = 0.0;
    for (Polarization p0 : pols) {
      for (Polarization p3 : pols) {
        Complex contracted = 0.0;
        for (Polarization p1 : pols) {
          for (Polarization p2 : pols) {
            contracted += std::conj(bell_coeff(which, p1, p2)) *
                          joint.amplitude({ModeLabel{p0, kBinIntermediate},
                                           ModeLabel{p1, kBinIntermediate},
                                           ModeLabel{p2, kBinIntermediate},
                                           ModeLabel{p3, kBinIntermediate}});
          }
        }
        oracle += std::norm(contracted);
      }
    }
    double sim = project_bell(joint, 1, 2, which, kBinIntermediate).probability;
    worst = std::max(worst, std::abs(sim - oracle));
    worst = std::max(worst, std::abs(sim - 0.25));
  }
  report(7, "projection oracle", worst < 1e-12, fmt("max |sim - oracle| = %.2e", worst));
}

// --- criterion 8: byte-identical CSV through the CLI ------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void criterion_determinism() {
#ifndef TBSIM_CLI_PATH
  report(8, "CSV determinism", false, "CLI path not wired into the build");
#else
  namespace fs = std::filesystem;
  fs::path dir = fs::temp_directory_path() / "tbsim_acceptance";
  std::error_code ec;
  fs::create_directories(dir, ec);
  fs::path out1 = dir / "run1.csv";
  fs::path out2 = dir / "run2.csv";

  std::string base = std::string(TBSIM_CLI_PATH) +
                     " distribute --trials 2000 --seed 99 --format csv --out ";
  int rc1 = std::system((base + out1.string()).c_str());
  int rc2 = std::system((base + out2.string()).c_str());
  std::string first = read_file(out1);
  std::string second = read_file(out2);

  bool ok = rc1 == 0 && rc2 == 0 && !first.empty() && first == second;
  report(8, "CSV determinism", ok,
         fmt("exit %d/%d, %zu bytes, %s", rc1, rc2, first.size(),
             first == second ? "identical" : "DIFFER"));
  fs::remove(out1, ec);
  fs::remove(out2, ec);
#endif
}

}  // namespace

int main() {
  criterion_error_freedom();
  criterion_success_law();
  criterion_long_run_average();
  criterion_kwd_rate();
  criterion_rate_comparison();
  criterion_swap();
  criterion_projection_oracle();
  criterion_determinism();

  if (g_failures == 0) {
    std::printf("all 8 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
