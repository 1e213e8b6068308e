#include "tbsim/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tbsim/montecarlo.hpp"
#include "tbsim/protocol.hpp"
#include "tbsim/repeater.hpp"

namespace tbsim::experiment {

namespace {

using nlohmann::json;

constexpr double kCheckFloor = 1e-12;     // absolute slack under the sigma bands
constexpr double kFidelityFloor = 1e-9;   // error-freedom margin on post-selected pairs

std::string iso8601_utc_now() {
  std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf;
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

json config_as_json(const config::ExperimentConfig& cfg) {
  return json::parse(config::serialize_config(cfg));
}

struct CheckCollector {
  bool passed = true;
  std::vector<std::string> messages;

  void band(double observed, double expected, double slack, const std::string& label) {
    if (!(std::abs(observed - expected) <= slack)) {
      passed = false;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: observed %.6g vs expected %.6g (allowed %.3g)",
                    label.c_str(), observed, expected, slack);
      messages.push_back(buf);
    }
  }

  void at_least(double observed, double threshold, const std::string& label) {
    if (!(observed >= threshold)) {
      passed = false;
      char buf[160];
      std::snprintf(buf, sizeof buf, "%s: observed %.6g below threshold %.6g", label.c_str(),
                    observed, threshold);
      messages.push_back(buf);
    }
  }
};

RunResult run_distribute(const config::ExperimentConfig& cfg) {
  mc::DistributeExperiment exp;
  exp.channel1 = cfg.channels[0];
  exp.channel2 = cfg.channels[1];

  mc::RunStats stats = mc::run_distribute_trials(exp, cfg.trials, cfg.seed);
  double analytic = mc::analytic_distribute_success(exp);
  double ci_lo = stats.mean_success - 3.0 * stats.std_err;
  double ci_hi = stats.mean_success + 3.0 * stats.std_err;

  CheckCollector check;
  check.band(stats.mean_success, analytic, 3.0 * stats.std_err + kCheckFloor, "mean_success");
  if (stats.successes > 0) {
    check.at_least(stats.fidelity_min, 1.0 - kFidelityFloor, "fidelity_min");
  }

  RunResult result;
  result.config = cfg;
  result.check_passed = check.passed;
  result.check_messages = check.messages;

  result.csv = join_row({"kind", "trials", "seed", "successes", "mean_success", "std_err",
                         "ci997_lo", "ci997_hi", "analytic_success", "fidelity_min",
                         "fidelity_mean"});
  result.csv += join_row({config::kind_name(cfg.kind), csv_count(cfg.trials), csv_count(cfg.seed),
                          csv_count(stats.successes), csv_number(stats.mean_success),
                          csv_number(stats.std_err), csv_number(ci_lo), csv_number(ci_hi),
                          csv_number(analytic), csv_number(stats.fidelity_min),
                          csv_number(stats.fidelity_mean)});

  json report;
  report["kind"] = config::kind_name(cfg.kind);
  report["seed"] = cfg.seed;
  report["timestamp"] = iso8601_utc_now();
  report["config"] = config_as_json(cfg);
  report["stats"] = json{{"trials", stats.trials},
                         {"successes", stats.successes},
                         {"mean_success", stats.mean_success},
                         {"std_err", stats.std_err},
                         {"ci997_lo", ci_lo},
                         {"ci997_hi", ci_hi},
                         {"fidelity_min", stats.fidelity_min},
                         {"fidelity_mean", stats.fidelity_mean}};
  report["analytic"] = json{{"success_prob", analytic}};
  report["check_passed"] = check.passed;
  report["check_messages"] = check.messages;
  result.report_json = report.dump(2);
  return result;
}

RunResult run_repeater_kind(const config::ExperimentConfig& cfg) {
  mc::RepeaterExperiment exp;
  exp.channels = cfg.channels;
  exp.params = cfg.repeater_params;

  mc::RepeaterStats stats = mc::run_repeater_trials(exp, cfg.trials, cfg.seed);
  double analytic_seg1 =
      mc::analytic_segment_pass(exp.channels[0], exp.channels[1], exp.params);
  double analytic_seg2 =
      mc::analytic_segment_pass(exp.channels[2], exp.channels[3], exp.params);
  double analytic_bsm = repeater::swap_success_prob(exp.params.eta);
  double analytic_end = mc::analytic_repeater_end_to_end(exp);

  CheckCollector check;
  check.band(stats.end_to_end.mean_success, analytic_end,
             3.0 * stats.end_to_end.std_err + kCheckFloor, "end_to_end_rate");
  check.band(stats.segment1_rate(), analytic_seg1,
             3.0 * mc::binomial_std_err(stats.segment1_passes, stats.end_to_end.trials) +
                 kCheckFloor,
             "segment1_pass_rate");
  check.band(stats.segment2_rate(), analytic_seg2,
             3.0 * mc::binomial_std_err(stats.segment2_passes, stats.end_to_end.trials) +
                 kCheckFloor,
             "segment2_pass_rate");
  if (stats.both_passes > 0) {
    check.band(stats.bsm_rate(), analytic_bsm,
               3.0 * mc::binomial_std_err(stats.bsm_successes, stats.both_passes) + kCheckFloor,
               "bsm_success_rate");
  }
  if (stats.end_to_end.successes > 0) {
    check.at_least(stats.end_to_end.fidelity_min, 1.0 - kFidelityFloor, "fidelity_min");
  }

  RunResult result;
  result.config = cfg;
  result.check_passed = check.passed;
  result.check_messages = check.messages;

  result.csv = join_row({"kind", "trials", "seed", "successes", "end_to_end_rate", "std_err",
                         "analytic_end_to_end", "segment1_pass_rate", "analytic_segment1",
                         "segment2_pass_rate", "analytic_segment2", "bsm_success_rate",
                         "analytic_bsm", "fidelity_min", "fidelity_mean"});
  result.csv += join_row(
      {config::kind_name(cfg.kind), csv_count(cfg.trials), csv_count(cfg.seed),
       csv_count(stats.end_to_end.successes), csv_number(stats.end_to_end.mean_success),
       csv_number(stats.end_to_end.std_err), csv_number(analytic_end),
       csv_number(stats.segment1_rate()), csv_number(analytic_seg1),
       csv_number(stats.segment2_rate()), csv_number(analytic_seg2),
       csv_number(stats.bsm_rate()), csv_number(analytic_bsm),
       csv_number(stats.end_to_end.fidelity_min), csv_number(stats.end_to_end.fidelity_mean)});

  json report;
  report["kind"] = config::kind_name(cfg.kind);
  report["seed"] = cfg.seed;
  report["timestamp"] = iso8601_utc_now();
  report["config"] = config_as_json(cfg);
  report["stats"] = json{{"trials", stats.end_to_end.trials},
                         {"successes", stats.end_to_end.successes},
                         {"end_to_end_rate", stats.end_to_end.mean_success},
                         {"std_err", stats.end_to_end.std_err},
                         {"segment1_pass_rate", stats.segment1_rate()},
                         {"segment2_pass_rate", stats.segment2_rate()},
                         {"both_pass_rate", stats.both_rate()},
                         {"bsm_success_rate", stats.bsm_rate()},
                         {"fidelity_min", stats.end_to_end.fidelity_min},
                         {"fidelity_mean", stats.end_to_end.fidelity_mean}};
  report["analytic"] = json{{"end_to_end", analytic_end},
                            {"segment1_pass", analytic_seg1},
                            {"segment2_pass", analytic_seg2},
                            {"bsm_success", analytic_bsm}};
  report["check_passed"] = check.passed;
  report["check_messages"] = check.messages;
  result.report_json = report.dump(2);
  return result;
}

struct KwdPoint {
  double p_pur_kwd = 0.0;
  double p_pur = 0.0;
  double ratio = 0.0;
  double log10_ratio = 0.0;
};

KwdPoint evaluate_kwd(const repeater::RepeaterParams& params, double theta1, double theta2) {
  KwdPoint point;
  point.p_pur_kwd = repeater::p_pur_kwd(params);
  point.p_pur = repeater::p_pur(params.zeta, params.p_source, theta1, theta2);
  point.ratio = point.p_pur / point.p_pur_kwd;
  point.log10_ratio = std::log10(point.ratio);
  return point;
}

RunResult run_sweep(const config::ExperimentConfig& cfg) {
  const config::SweepAxis& axis = cfg.sweep.value();
  const std::string kind = config::kind_name(cfg.kind);
  const std::string target = config::target_name(axis.target);

  RunResult result;
  result.config = cfg;
  result.csv = join_row({"kind", "target", "parameter", "value", "trials", "seed", "successes",
                         "mean_success", "std_err", "analytic", "p_pur_kwd", "p_pur", "ratio",
                         "log10_ratio"});

  CheckCollector check;
  json rows = json::array();

  for (int k = 0; k < axis.steps; ++k) {
    double value = axis.lo + (axis.hi - axis.lo) * static_cast<double>(k) /
                                 static_cast<double>(axis.steps - 1);
    if (axis.target == config::SweepTarget::kDistribute) {
      mc::DistributeExperiment exp;
      exp.channel1 = cfg.channels[0];
      exp.channel2 = cfg.channels[1];
      if (axis.parameter == "theta" || axis.parameter == "theta1") {
        exp.channel1.theta = mc::ParamDistribution::fixed(value);
      }
      if (axis.parameter == "theta" || axis.parameter == "theta2") {
        exp.channel2.theta = mc::ParamDistribution::fixed(value);
      }
      std::uint64_t point_seed = mc::splitmix64(cfg.seed + static_cast<std::uint64_t>(k) + 1);
      mc::RunStats stats = mc::run_distribute_trials(exp, cfg.trials, point_seed);
      double analytic = mc::analytic_distribute_success(exp);
      // Per-point statistical gate: wider (4 sigma) band because a sweep
      // takes the worst row over many independent points.
      check.band(stats.mean_success, analytic, 4.0 * stats.std_err + kCheckFloor,
                 axis.parameter + "=" + csv_number(value));

      result.csv += join_row({kind, target, axis.parameter, csv_number(value),
                              csv_count(cfg.trials), csv_count(point_seed),
                              csv_count(stats.successes), csv_number(stats.mean_success),
                              csv_number(stats.std_err), csv_number(analytic), "", "", "", ""});
      rows.push_back(json{{"parameter", axis.parameter},
                          {"value", value},
                          {"trials", cfg.trials},
                          {"seed", point_seed},
                          {"successes", stats.successes},
                          {"mean_success", stats.mean_success},
                          {"std_err", stats.std_err},
                          {"analytic", analytic}});
    } else {
      repeater::RepeaterParams params = cfg.repeater_params;
      if (axis.parameter == "gamma") params.gamma = value;
      else if (axis.parameter == "zeta") params.zeta = value;
      else if (axis.parameter == "p_source") params.p_source = value;
      else if (axis.parameter == "eta") params.eta = value;
      else if (axis.parameter == "p_cnot") params.p_cnot = value;
      else if (axis.parameter == "p_qnd") params.p_qnd = value;
      KwdPoint point = evaluate_kwd(params, cfg.compare_theta1, cfg.compare_theta2);
      if (point.p_pur_kwd > 0.0) {
        check.band(point.ratio * point.p_pur_kwd, point.p_pur,
                   1e-9 * std::max(point.p_pur, 1.0),
                   "ratio consistency at " + axis.parameter + "=" + csv_number(value));
      }

      result.csv += join_row({kind, target, axis.parameter, csv_number(value), "", "", "", "", "",
                              "", csv_number(point.p_pur_kwd), csv_number(point.p_pur),
                              csv_number(point.ratio), csv_number(point.log10_ratio)});
      rows.push_back(json{{"parameter", axis.parameter},
                          {"value", value},
                          {"p_pur_kwd", point.p_pur_kwd},
                          {"p_pur", point.p_pur},
                          {"ratio", point.ratio},
                          {"log10_ratio", point.log10_ratio}});
    }
  }

  result.check_passed = check.passed;
  result.check_messages = check.messages;

  json report;
  report["kind"] = kind;
  report["seed"] = cfg.seed;
  report["timestamp"] = iso8601_utc_now();
  report["config"] = config_as_json(cfg);
  report["stats"] = json{{"points", axis.steps}};
  report["analytic"] = json{{"target", target}, {"parameter", axis.parameter}};
  report["rows"] = rows;
  report["check_passed"] = check.passed;
  report["check_messages"] = check.messages;
  result.report_json = report.dump(2);
  return result;
}

RunResult run_compare_kwd(const config::ExperimentConfig& cfg) {
  const repeater::RepeaterParams& p = cfg.repeater_params;
  KwdPoint point = evaluate_kwd(p, cfg.compare_theta1, cfg.compare_theta2);
  double c1 = std::cos(cfg.compare_theta1);
  double c2 = std::cos(cfg.compare_theta2);

  CheckCollector check;
  if (point.p_pur_kwd > 0.0) {
    check.band(point.ratio * point.p_pur_kwd, point.p_pur, 1e-9 * std::max(point.p_pur, 1.0),
               "ratio consistency");
  }

  RunResult result;
  result.config = cfg;
  result.check_passed = check.passed;
  result.check_messages = check.messages;

  result.csv = join_row({"kind", "gamma", "zeta", "p_source", "eta", "p_cnot", "p_qnd",
                         "cos2_theta1", "cos2_theta2", "p_pur_kwd", "p_pur", "ratio",
                         "log10_ratio"});
  result.csv += join_row({config::kind_name(cfg.kind), csv_number(p.gamma), csv_number(p.zeta),
                          csv_number(p.p_source), csv_number(p.eta), csv_number(p.p_cnot),
                          csv_number(p.p_qnd), csv_number(c1 * c1), csv_number(c2 * c2),
                          csv_number(point.p_pur_kwd), csv_number(point.p_pur),
                          csv_number(point.ratio), csv_number(point.log10_ratio)});

  json report;
  report["kind"] = config::kind_name(cfg.kind);
  report["seed"] = cfg.seed;
  report["timestamp"] = iso8601_utc_now();
  report["config"] = config_as_json(cfg);
  report["stats"] = json::object();
  report["analytic"] = json{{"p_pur_kwd", point.p_pur_kwd},
                            {"p_pur", point.p_pur},
                            {"ratio", point.ratio},
                            {"log10_ratio", point.log10_ratio},
                            {"cos2_theta1", c1 * c1},
                            {"cos2_theta2", c2 * c2}};
  report["check_passed"] = check.passed;
  report["check_messages"] = check.messages;
  result.report_json = report.dump(2);
  return result;
}

}  // namespace

std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0.0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[64];
  if (std::abs(value) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.12e", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.12g", value);
  }
  return buf;
}

std::string csv_count(std::uint64_t value) { return std::to_string(value); }

RunResult run_experiment(const config::ExperimentConfig& cfg) {
  config::validate_config(cfg);
  switch (cfg.kind) {
    case config::ExperimentKind::kDistribute:
      return run_distribute(cfg);
    case config::ExperimentKind::kRepeater:
      return run_repeater_kind(cfg);
    case config::ExperimentKind::kSweep:
      return run_sweep(cfg);
    case config::ExperimentKind::kCompareKwd:
      return run_compare_kwd(cfg);
  }
  throw std::logic_error("unreachable experiment kind");
}

}  // namespace tbsim::experiment
