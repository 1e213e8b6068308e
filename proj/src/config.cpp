#include "tbsim/config.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

namespace tbsim::config {

namespace {

using nlohmann::json;

constexpr double kDegToRad = std::numbers::pi / 180.0;

double angle_from_json(const json& value, const std::string& where) {
  if (value.is_number()) {
    return value.get<double>();
  }
  if (value.is_string()) {
    const std::string text = value.get<std::string>();
    if (text.rfind("deg:", 0) == 0) {
      try {
        std::size_t consumed = 0;
        double degrees = std::stod(text.substr(4), &consumed);
        if (consumed == text.size() - 4) {
          return degrees * kDegToRad;
        }
      } catch (const std::exception&) {
        // fall through to the error below
      }
    }
    throw ConfigError(where + ": expected a number or \"deg:<value>\", got \"" + text + "\"");
  }
  throw ConfigError(where + ": expected a number or \"deg:<value>\"");
}

mc::ParamDistribution dist_from_json(const json& value, const std::string& where) {
  // Shorthand: a bare number or "deg:" string means a fixed parameter.
  if (value.is_number() || value.is_string()) {
    return mc::ParamDistribution::fixed(angle_from_json(value, where));
  }
  if (!value.is_object() || value.size() != 1) {
    throw ConfigError(where + ": expected number, \"deg:<value>\", or one-key object "
                              "{fixed|uniform|gaussian: ...}");
  }
  auto item = value.begin();
  const std::string key = item.key();
  const json& body = item.value();
  if (key == "fixed") {
    return mc::ParamDistribution::fixed(angle_from_json(body, where + ".fixed"));
  }
  auto pair_of = [&](const char* name) {
    if (!body.is_array() || body.size() != 2) {
      throw ConfigError(where + "." + name + ": expected a two-element array");
    }
    return std::pair<double, double>{angle_from_json(body[0], where + "." + name + "[0]"),
                                     angle_from_json(body[1], where + "." + name + "[1]")};
  };
  if (key == "uniform") {
    auto [lo, hi] = pair_of("uniform");
    if (!(lo <= hi)) {
      throw ConfigError(where + ".uniform: lower bound exceeds upper bound");
    }
    return mc::ParamDistribution::uniform(lo, hi);
  }
  if (key == "gaussian") {
    auto [mean, sigma] = pair_of("gaussian");
    if (!(sigma >= 0.0)) {
      throw ConfigError(where + ".gaussian: sigma must be non-negative");
    }
    return mc::ParamDistribution::gaussian(mean, sigma);
  }
  throw ConfigError(where + ": unknown distribution \"" + key + "\"");
}

json dist_to_json(const mc::ParamDistribution& dist) {
  switch (dist.kind) {
    case mc::DistKind::kFixed:
      return json{{"fixed", dist.a}};
    case mc::DistKind::kUniform:
      return json{{"uniform", json::array({dist.a, dist.b})}};
    case mc::DistKind::kGaussian:
      return json{{"gaussian", json::array({dist.a, dist.b})}};
  }
  throw std::logic_error("unreachable distribution kind");
}

mc::ChannelDistribution channel_from_json(const json& value, const std::string& where) {
  if (!value.is_object()) {
    throw ConfigError(where + ": expected an object with theta/phi/chi");
  }
  mc::ChannelDistribution channel;  // parameters default to fixed 0
  for (const auto& [key, body] : value.items()) {
    if (key == "theta") {
      channel.theta = dist_from_json(body, where + ".theta");
    } else if (key == "phi") {
      channel.phi = dist_from_json(body, where + ".phi");
    } else if (key == "chi") {
      channel.chi = dist_from_json(body, where + ".chi");
    } else {
      throw ConfigError(where + ": unknown channel parameter \"" + key + "\"");
    }
  }
  return channel;
}

json channel_to_json(const mc::ChannelDistribution& channel) {
  return json{{"theta", dist_to_json(channel.theta)},
              {"phi", dist_to_json(channel.phi)},
              {"chi", dist_to_json(channel.chi)}};
}

double probability_from_json(const json& body, const char* name) {
  if (!body.is_number()) {
    throw ConfigError(std::string("repeater.") + name + ": expected a number");
  }
  return body.get<double>();
}

SweepTarget infer_target(const std::string& parameter) {
  static const std::set<std::string> kDistributeParams = {"theta", "theta1", "theta2"};
  static const std::set<std::string> kCompareParams = {"gamma",  "zeta",   "p_source",
                                                       "eta",    "p_cnot", "p_qnd"};
  if (kDistributeParams.count(parameter)) {
    return SweepTarget::kDistribute;
  }
  if (kCompareParams.count(parameter)) {
    return SweepTarget::kCompareKwd;
  }
  throw ConfigError("sweep.parameter: unknown parameter \"" + parameter + "\"");
}

SweepAxis sweep_from_json(const json& value) {
  if (!value.is_object()) {
    throw ConfigError("sweep: expected an object");
  }
  SweepAxis axis;
  if (!value.contains("parameter") || !value["parameter"].is_string()) {
    throw ConfigError("sweep.parameter: required string field");
  }
  axis.parameter = value["parameter"].get<std::string>();
  axis.target = infer_target(axis.parameter);
  if (value.contains("target")) {
    if (!value["target"].is_string()) {
      throw ConfigError("sweep.target: expected a string");
    }
    const std::string name = value["target"].get<std::string>();
    SweepTarget requested;
    if (name == "distribute") {
      requested = SweepTarget::kDistribute;
    } else if (name == "compare-kwd") {
      requested = SweepTarget::kCompareKwd;
    } else {
      throw ConfigError("sweep.target: expected \"distribute\" or \"compare-kwd\"");
    }
    if (requested != axis.target) {
      throw ConfigError("sweep.target \"" + name + "\" does not accept parameter \"" +
                        axis.parameter + "\"");
    }
  }
  for (const char* field : {"lo", "hi"}) {
    if (!value.contains(field)) {
      throw ConfigError(std::string("sweep.") + field + ": required field");
    }
  }
  axis.lo = angle_from_json(value["lo"], "sweep.lo");
  axis.hi = angle_from_json(value["hi"], "sweep.hi");
  if (!value.contains("steps") || !value["steps"].is_number_integer()) {
    throw ConfigError("sweep.steps: required integer field");
  }
  axis.steps = value["steps"].get<int>();
  return axis;
}

json sweep_to_json(const SweepAxis& axis) {
  return json{{"target", target_name(axis.target)},
              {"parameter", axis.parameter},
              {"lo", axis.lo},
              {"hi", axis.hi},
              {"steps", axis.steps}};
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) {
    throw ConfigError("config: expected a JSON object");
  }
  if (!doc.contains("kind") || !doc["kind"].is_string()) {
    throw ConfigError("config.kind: required string field");
  }
  ExperimentConfig config = default_config(kind_from_name(doc["kind"].get<std::string>()));

  for (const auto& [key, body] : doc.items()) {
    if (key == "kind") {
      continue;
    } else if (key == "trials") {
      if (!body.is_number_unsigned() && !(body.is_number_integer() && body.get<long long>() > 0)) {
        throw ConfigError("config.trials: expected a positive integer");
      }
      config.trials = body.get<std::uint64_t>();
    } else if (key == "seed") {
      if (!body.is_number_integer() && !body.is_number_unsigned()) {
        throw ConfigError("config.seed: expected an integer");
      }
      config.seed = body.get<std::uint64_t>();
    } else if (key == "format") {
      if (!body.is_string()) {
        throw ConfigError("config.format: expected \"csv\" or \"json\"");
      }
      config.format = format_from_name(body.get<std::string>());
    } else if (key == "channels") {
      if (!body.is_array() || body.empty() || body.size() > 4) {
        throw ConfigError("config.channels: expected an array of 1..4 channel objects");
      }
      for (std::size_t i = 0; i < body.size(); ++i) {
        config.channels[i] = channel_from_json(body[i], "channels[" + std::to_string(i) + "]");
      }
    } else if (key == "repeater") {
      if (!body.is_object()) {
        throw ConfigError("config.repeater: expected an object");
      }
      for (const auto& [pkey, pbody] : body.items()) {
        if (pkey == "gamma") {
          config.repeater_params.gamma = probability_from_json(pbody, "gamma");
        } else if (pkey == "zeta") {
          config.repeater_params.zeta = probability_from_json(pbody, "zeta");
        } else if (pkey == "p_source") {
          config.repeater_params.p_source = probability_from_json(pbody, "p_source");
        } else if (pkey == "eta") {
          config.repeater_params.eta = probability_from_json(pbody, "eta");
        } else if (pkey == "p_cnot") {
          config.repeater_params.p_cnot = probability_from_json(pbody, "p_cnot");
        } else if (pkey == "p_qnd") {
          config.repeater_params.p_qnd = probability_from_json(pbody, "p_qnd");
        } else {
          throw ConfigError("config.repeater: unknown parameter \"" + pkey + "\"");
        }
      }
    } else if (key == "compare") {
      if (!body.is_object()) {
        throw ConfigError("config.compare: expected an object");
      }
      for (const auto& [ckey, cbody] : body.items()) {
        if (ckey == "theta1") {
          config.compare_theta1 = angle_from_json(cbody, "compare.theta1");
        } else if (ckey == "theta2") {
          config.compare_theta2 = angle_from_json(cbody, "compare.theta2");
        } else {
          throw ConfigError("config.compare: unknown parameter \"" + ckey + "\"");
        }
      }
    } else if (key == "sweep") {
      config.sweep = sweep_from_json(body);
    } else {
      throw ConfigError("config: unknown field \"" + key + "\"");
    }
  }

  validate_config(config);
  return config;
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::kDistribute:
      return "distribute";
    case ExperimentKind::kRepeater:
      return "repeater";
    case ExperimentKind::kSweep:
      return "sweep";
    case ExperimentKind::kCompareKwd:
      return "compare-kwd";
  }
  throw std::logic_error("unreachable experiment kind");
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "distribute") return ExperimentKind::kDistribute;
  if (name == "repeater") return ExperimentKind::kRepeater;
  if (name == "sweep") return ExperimentKind::kSweep;
  if (name == "compare-kwd") return ExperimentKind::kCompareKwd;
  throw ConfigError("config.kind: unknown kind \"" + name + "\"");
}

std::string format_name(OutputFormat format) {
  return format == OutputFormat::kCsv ? "csv" : "json";
}

OutputFormat format_from_name(const std::string& name) {
  if (name == "csv") return OutputFormat::kCsv;
  if (name == "json") return OutputFormat::kJson;
  throw ConfigError("config.format: unknown format \"" + name + "\"");
}

std::string target_name(SweepTarget target) {
  return target == SweepTarget::kDistribute ? "distribute" : "compare-kwd";
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig config;  // member initializers carry the paper defaults
  config.kind = kind;
  if (kind == ExperimentKind::kSweep) {
    config.trials = 10000;
    config.sweep = SweepAxis{};
  }
  return config;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return config_from_json(doc);
}

std::string serialize_config(const ExperimentConfig& config) {
  json doc;
  doc["kind"] = kind_name(config.kind);
  doc["trials"] = config.trials;
  doc["seed"] = config.seed;
  doc["format"] = format_name(config.format);
  json channels = json::array();
  for (const auto& channel : config.channels) {
    channels.push_back(channel_to_json(channel));
  }
  doc["channels"] = channels;
  doc["repeater"] = json{{"gamma", config.repeater_params.gamma},
                         {"zeta", config.repeater_params.zeta},
                         {"p_source", config.repeater_params.p_source},
                         {"eta", config.repeater_params.eta},
                         {"p_cnot", config.repeater_params.p_cnot},
                         {"p_qnd", config.repeater_params.p_qnd}};
  doc["compare"] = json{{"theta1", config.compare_theta1}, {"theta2", config.compare_theta2}};
  if (config.sweep) {
    doc["sweep"] = sweep_to_json(*config.sweep);
  }
  return doc.dump(2);
}

void validate_config(const ExperimentConfig& config) {
  if (config.trials < 1) {
    throw ConfigError("config.trials: must be at least 1");
  }
  if ((config.kind == ExperimentKind::kSweep) != config.sweep.has_value()) {
    throw ConfigError(config.sweep ? "config.sweep: only valid when kind is \"sweep\""
                                   : "config.sweep: required when kind is \"sweep\"");
  }
  auto check_probability = [](double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw ConfigError(std::string("config.repeater.") + name + ": must lie in [0, 1]");
    }
  };
  check_probability(config.repeater_params.gamma, "gamma");
  check_probability(config.repeater_params.zeta, "zeta");
  check_probability(config.repeater_params.p_source, "p_source");
  check_probability(config.repeater_params.eta, "eta");
  check_probability(config.repeater_params.p_cnot, "p_cnot");
  check_probability(config.repeater_params.p_qnd, "p_qnd");

  if (config.sweep) {
    const SweepAxis& axis = config.sweep.value();
    if (axis.steps < 2) {
      throw ConfigError("sweep.steps: must be at least 2");
    }
    if (!(axis.lo < axis.hi)) {
      throw ConfigError("sweep: lo must be less than hi");
    }
    if (infer_target(axis.parameter) != axis.target) {
      throw ConfigError("sweep: parameter \"" + axis.parameter + "\" does not belong to target \"" +
                        target_name(axis.target) + "\"");
    }
    if (axis.target == SweepTarget::kCompareKwd && (axis.lo < 0.0 || axis.hi > 1.0)) {
      throw ConfigError("sweep: probability parameters must stay within [0, 1]");
    }
  }
}

}  // namespace tbsim::config
