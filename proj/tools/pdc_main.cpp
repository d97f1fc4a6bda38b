// Command line front end; talks to the library through the C API only.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pdc/pdc.h"

namespace {

int run(const std::string& command, const std::string& config_path, bool has_seed,
        unsigned long long seed, const std::vector<std::string>& sets) {
  pdc_pipeline* pipeline = nullptr;
  pdc_status st = pdc_pipeline_open(config_path.c_str(), &pipeline);
  if (st != PDC_OK) {
    std::fprintf(stderr, "pdc: %s: %s\n", pdc_status_name(st), pdc_last_error());
    return int(st);
  }

  for (const auto& kv : sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "pdc: --set needs key=value, got '%s'\n", kv.c_str());
      pdc_pipeline_close(pipeline);
      return int(PDC_ERROR_INVALID_ARGUMENT);
    }
    st = pdc_pipeline_set(pipeline, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
    if (st != PDC_OK) {
      std::fprintf(stderr, "pdc: %s: %s\n", pdc_status_name(st), pdc_pipeline_error(pipeline));
      pdc_pipeline_close(pipeline);
      return int(st);
    }
  }
  if (has_seed) {
    st = pdc_pipeline_set_seed(pipeline, seed);
    if (st != PDC_OK) {
      std::fprintf(stderr, "pdc: %s: %s\n", pdc_status_name(st), pdc_pipeline_error(pipeline));
      pdc_pipeline_close(pipeline);
      return int(st);
    }
  }

  st = pdc_pipeline_run(pipeline, command.c_str());
  if (st != PDC_OK)
    std::fprintf(stderr, "pdc: %s: %s\n", pdc_status_name(st), pdc_pipeline_error(pipeline));
  else
    std::printf("%s done (config %s)\n", command.c_str(), pdc_pipeline_config_hash(pipeline));
  pdc_pipeline_close(pipeline);
  return int(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zone demand forecasting, clustering, and fleet simulation"};
  app.set_version_flag("--version", pdc_version());
  app.require_subcommand(1);

  static const char* kCommands[] = {"generate", "train",    "predict", "cluster",
                                    "evaluate", "simulate", "pipeline"};
  static const char* kHelp[] = {
      "Write synthetic orders from the configured demand profile",
      "Fit per-zone forecasting models (tuning first when a grid is set)",
      "Forecast the test window with the trained models",
      "Cluster zones per interval from the predictions",
      "Score forecasts and clusterings against realized demand",
      "Run the fleet simulation and compare relocation policies",
      "All of the above in order",
  };

  struct Args {
    std::string config;
    unsigned long long seed = 0;
    bool has_seed = false;
    std::vector<std::string> sets;
  };
  Args args;

  for (std::size_t i = 0; i < std::size(kCommands); ++i) {
    CLI::App* sub = app.add_subcommand(kCommands[i], kHelp[i]);
    sub->add_option("--config", args.config, "JSON config file")->required();
    sub->add_option("--seed", args.seed, "Override the config seed")
        ->each([&](const std::string&) { args.has_seed = true; });
    sub->add_option("--set", args.sets, "Override a config entry, dotted key=value");
  }

  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), args.config, args.has_seed, args.seed,
             args.sets);
}
