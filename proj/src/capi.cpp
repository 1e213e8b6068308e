#include "tbsim/tbsim.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "tbsim/config.hpp"
#include "tbsim/experiment.hpp"
#include "tbsim/protocol.hpp"
#include "tbsim/repeater.hpp"

struct tbsim_config {
  tbsim::config::ExperimentConfig cfg;
};

struct tbsim_result {
  tbsim::experiment::RunResult result;
};

namespace {

thread_local std::string g_last_error;

void clear_error() { g_last_error.clear(); }

tbsim_status fail(tbsim_status status, const char* message) {
  g_last_error = message;
  return status;
}

// Translate the active exception into a status code and error message.
tbsim_status fail_from_exception() {
  try {
    throw;
  } catch (const tbsim::config::ConfigError& e) {
    return fail(TBSIM_ERROR_PARSE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(TBSIM_ERROR_INTERNAL, e.what());
  } catch (...) {
    return fail(TBSIM_ERROR_INTERNAL, "unknown error");
  }
}

// Copy into a malloc'd buffer the caller releases with tbsim_string_free.
tbsim_status copy_out(const std::string& text, char** out) {
  char* buffer = static_cast<char*>(std::malloc(text.size() + 1));
  if (buffer == nullptr) {
    return fail(TBSIM_ERROR_INTERNAL, "allocation failure");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  *out = buffer;
  return TBSIM_OK;
}

}  // namespace

extern "C" {

const char* tbsim_version(void) { return "1.0.0"; }

const char* tbsim_last_error(void) { return g_last_error.c_str(); }

tbsim_status tbsim_config_parse(const char* json_text, tbsim_config** out) {
  if (json_text == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  try {
    auto* handle = new tbsim_config{tbsim::config::parse_config(json_text)};
    *out = handle;
    return TBSIM_OK;
  } catch (...) {
    return fail_from_exception();
  }
}

tbsim_status tbsim_config_default(const char* kind, tbsim_config** out) {
  if (kind == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  try {
    auto* handle =
        new tbsim_config{tbsim::config::default_config(tbsim::config::kind_from_name(kind))};
    *out = handle;
    return TBSIM_OK;
  } catch (...) {
    return fail_from_exception();
  }
}

void tbsim_config_free(tbsim_config* config) { delete config; }

tbsim_status tbsim_config_set_trials(tbsim_config* config, uint64_t trials) {
  if (config == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null config");
  }
  if (trials < 1) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "trials must be at least 1");
  }
  config->cfg.trials = trials;
  return TBSIM_OK;
}

tbsim_status tbsim_config_set_seed(tbsim_config* config, uint64_t seed) {
  if (config == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null config");
  }
  config->cfg.seed = seed;
  return TBSIM_OK;
}

tbsim_status tbsim_config_set_format(tbsim_config* config, const char* format) {
  if (config == nullptr || format == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  try {
    config->cfg.format = tbsim::config::format_from_name(format);
    return TBSIM_OK;
  } catch (...) {
    return fail_from_exception();
  }
}

const char* tbsim_config_kind(const tbsim_config* config) {
  if (config == nullptr) {
    return nullptr;
  }
  switch (config->cfg.kind) {
    case tbsim::config::ExperimentKind::kDistribute:
      return "distribute";
    case tbsim::config::ExperimentKind::kRepeater:
      return "repeater";
    case tbsim::config::ExperimentKind::kSweep:
      return "sweep";
    case tbsim::config::ExperimentKind::kCompareKwd:
      return "compare-kwd";
  }
  return nullptr;
}

const char* tbsim_config_format(const tbsim_config* config) {
  if (config == nullptr) {
    return nullptr;
  }
  return config->cfg.format == tbsim::config::OutputFormat::kCsv ? "csv" : "json";
}

tbsim_status tbsim_config_to_json(const tbsim_config* config, char** out) {
  if (config == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  try {
    return copy_out(tbsim::config::serialize_config(config->cfg), out);
  } catch (...) {
    return fail_from_exception();
  }
}

void tbsim_string_free(char* text) { std::free(text); }

tbsim_status tbsim_run(const tbsim_config* config, tbsim_result** out) {
  if (config == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  try {
    auto* handle = new tbsim_result{tbsim::experiment::run_experiment(config->cfg)};
    *out = handle;
    return TBSIM_OK;
  } catch (...) {
    return fail_from_exception();
  }
}

void tbsim_result_free(tbsim_result* result) { delete result; }

tbsim_status tbsim_result_csv(const tbsim_result* result, char** out) {
  if (result == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  return copy_out(result->result.csv, out);
}

tbsim_status tbsim_result_json(const tbsim_result* result, char** out) {
  if (result == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  return copy_out(result->result.report_json, out);
}

int tbsim_result_check(const tbsim_result* result) {
  if (result == nullptr) {
    fail(TBSIM_ERROR_INVALID_ARGUMENT, "null result");
    return -1;
  }
  return result->result.check_passed ? 1 : 0;
}

tbsim_status tbsim_result_check_messages(const tbsim_result* result, char** out) {
  if (result == nullptr || out == nullptr) {
    return fail(TBSIM_ERROR_INVALID_ARGUMENT, "null argument");
  }
  clear_error();
  std::string joined;
  for (std::size_t i = 0; i < result->result.check_messages.size(); ++i) {
    if (i > 0) joined += '\n';
    joined += result->result.check_messages[i];
  }
  return copy_out(joined, out);
}

double tbsim_analytic_success_prob(double theta1, double theta2) {
  return tbsim::protocol::analytic_success_prob(theta1, theta2);
}

double tbsim_p_pur(double zeta, double p_source, double theta1, double theta2) {
  return tbsim::repeater::p_pur(zeta, p_source, theta1, theta2);
}

double tbsim_p_pur_kwd(double gamma, double zeta, double p_source, double eta, double p_cnot,
                       double p_qnd) {
  tbsim::repeater::RepeaterParams params;
  params.gamma = gamma;
  params.zeta = zeta;
  params.p_source = p_source;
  params.eta = eta;
  params.p_cnot = p_cnot;
  params.p_qnd = p_qnd;
  return tbsim::repeater::p_pur_kwd(params);
}

double tbsim_swap_success_prob(double eta) { return tbsim::repeater::swap_success_prob(eta); }

}  // extern "C"
