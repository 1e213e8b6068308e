// tbsim command-line front end. Talks to the simulator exclusively through
// the C API in tbsim/tbsim.h, the same surface other language bindings use.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tbsim/tbsim.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitIoError = 3;

struct ConfigDeleter {
  void operator()(tbsim_config* p) const { tbsim_config_free(p); }
};
struct ResultDeleter {
  void operator()(tbsim_result* p) const { tbsim_result_free(p); }
};
using ConfigPtr = std::unique_ptr<tbsim_config, ConfigDeleter>;
using ResultPtr = std::unique_ptr<tbsim_result, ResultDeleter>;

// Owned string coming back from the C API.
std::string take_string(char* text) {
  std::string value = text == nullptr ? std::string() : std::string(text);
  tbsim_string_free(text);
  return value;
}

struct CommonOpts {
  std::string config_path;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format;
  bool check = false;

  CLI::Option* trials_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* format_opt = nullptr;
};

void add_common_options(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--config", opts.config_path, "JSON config file (defaults used when omitted)");
  opts.trials_opt = sub->add_option("--trials", opts.trials, "Number of Monte Carlo trials");
  opts.seed_opt = sub->add_option("--seed", opts.seed, "Master RNG seed");
  sub->add_option("--out", opts.out_path, "Output file (stdout when omitted)");
  opts.format_opt = sub->add_option("--format", opts.format, "Output format")
                        ->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--check", opts.check,
                "Exit 1 unless results sit inside their statistical bands");
}

int run_subcommand(const std::string& kind, const CommonOpts& opts) {
  ConfigPtr config;

  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path, std::ios::binary);
    if (!in) {
      std::cerr << "error: cannot open config file '" << opts.config_path << "'\n";
      return kExitConfigError;
    }
    std::ostringstream text;
    text << in.rdbuf();
    tbsim_config* raw = nullptr;
    if (tbsim_config_parse(text.str().c_str(), &raw) != TBSIM_OK) {
      std::cerr << "error: " << tbsim_last_error() << "\n";
      return kExitConfigError;
    }
    config.reset(raw);
    if (kind != tbsim_config_kind(config.get())) {
      std::cerr << "error: config kind '" << tbsim_config_kind(config.get())
                << "' does not match subcommand '" << kind << "'\n";
      return kExitConfigError;
    }
  } else {
    tbsim_config* raw = nullptr;
    if (tbsim_config_default(kind.c_str(), &raw) != TBSIM_OK) {
      std::cerr << "error: " << tbsim_last_error() << "\n";
      return kExitConfigError;
    }
    config.reset(raw);
  }

  if (opts.trials_opt->count() > 0 &&
      tbsim_config_set_trials(config.get(), opts.trials) != TBSIM_OK) {
    std::cerr << "error: " << tbsim_last_error() << "\n";
    return kExitConfigError;
  }
  if (opts.seed_opt->count() > 0 && tbsim_config_set_seed(config.get(), opts.seed) != TBSIM_OK) {
    std::cerr << "error: " << tbsim_last_error() << "\n";
    return kExitConfigError;
  }
  if (opts.format_opt->count() > 0 &&
      tbsim_config_set_format(config.get(), opts.format.c_str()) != TBSIM_OK) {
    std::cerr << "error: " << tbsim_last_error() << "\n";
    return kExitConfigError;
  }

  tbsim_result* raw_result = nullptr;
  tbsim_status status = tbsim_run(config.get(), &raw_result);
  if (status != TBSIM_OK) {
    std::cerr << "error: " << tbsim_last_error() << "\n";
    return status == TBSIM_ERROR_PARSE ? kExitConfigError : kExitIoError;
  }
  ResultPtr result(raw_result);

  char* rendered_raw = nullptr;
  std::string fmt = tbsim_config_format(config.get());
  status = fmt == "json" ? tbsim_result_json(result.get(), &rendered_raw)
                         : tbsim_result_csv(result.get(), &rendered_raw);
  if (status != TBSIM_OK) {
    std::cerr << "error: " << tbsim_last_error() << "\n";
    return kExitIoError;
  }
  std::string rendered = take_string(rendered_raw);

  if (opts.out_path.empty()) {
    std::cout << rendered;
    if (!rendered.empty() && rendered.back() != '\n') {
      std::cout << '\n';
    }
  } else {
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot open output file '" << opts.out_path << "'\n";
      return kExitIoError;
    }
    out << rendered;
    if (!rendered.empty() && rendered.back() != '\n') {
      out << '\n';
    }
    if (!out) {
      std::cerr << "error: failed writing '" << opts.out_path << "'\n";
      return kExitIoError;
    }
  }

  if (opts.check && tbsim_result_check(result.get()) != 1) {
    char* messages_raw = nullptr;
    if (tbsim_result_check_messages(result.get(), &messages_raw) == TBSIM_OK) {
      std::string messages = take_string(messages_raw);
      if (!messages.empty()) {
        std::cerr << "check failed:\n" << messages << "\n";
      } else {
        std::cerr << "check failed\n";
      }
    }
    return kExitCheckFailed;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for error-free Bell-state distribution over birefringent channels"};
  app.set_version_flag("--version", []() { return std::string(tbsim_version()); });
  app.require_subcommand(1);

  const char* kinds[] = {"distribute", "repeater", "sweep", "compare-kwd"};
  const char* descriptions[] = {
      "Monte Carlo run of the two-channel Bell distribution",
      "Monte Carlo run of the two-segment repeater with entanglement swapping",
      "Evaluate a parameter sweep (theta curves or repeater-rate comparison)",
      "Analytic rate comparison against the KWD linear-optical repeater",
  };

  CommonOpts opts[4];
  CLI::App* subs[4];
  for (int i = 0; i < 4; ++i) {
    subs[i] = app.add_subcommand(kinds[i], descriptions[i]);
    add_common_options(subs[i], opts[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfigError;
  }

  for (int i = 0; i < 4; ++i) {
    if (app.got_subcommand(subs[i])) {
      return run_subcommand(kinds[i], opts[i]);
    }
  }
  std::cerr << "error: no subcommand\n";
  return kExitConfigError;
}
