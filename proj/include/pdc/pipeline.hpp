#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pdc/clustering.hpp"
#include "pdc/ingest.hpp"
#include "pdc/tuning.hpp"

namespace pdc {

// Everything a run needs, parsed and validated from one JSON config.
// Relative paths resolve against the config file's directory.
struct PipelineConfig {
  nlohmann::json doc;  // effective config (file plus overrides)
  std::string base_dir;
  std::uint64_t seed = 0;

  std::string zones_path;
  std::string orders_path;
  std::string weather_path;    // empty = no weather features
  std::string holidays_path;   // empty = no holidays
  std::string output_dir;

  BusinessHours hours;
  Date train_start, train_end, test_start, test_end;

  ModelFamily family = ModelFamily::Qrf;
  bool lagged = true;
  nlohmann::json model_params;  // direct parameters
  nlohmann::json model_grid;    // non-null = tune first
  int cv_folds = 10;

  std::string cluster_method = "cchc_ice";  // ckmc | cchc_ice | threshold
  std::string cluster_input = "point";      // point | quantiles
  int k_lo = 3, k_hi = 6;
  int min_cluster_size = 3;
  CchcConstraints cchc;
  std::vector<double> cuts = {0.25, 0.5, 0.75};

  int fleet_size = 30;
  int service_minutes = 3;
  int idle_threshold = 5;
  double minutes_per_hop = 4.0;
  std::string sim_policy = "forward_looking";
  std::string sim_oracle = "predicted";  // predicted | actual
  int repetitions = 5;

  bool has_synthetic = false;
  SynthProfile synthetic;

  // Orders come from the generator when a synthetic profile is present.
  std::string effective_orders_path() const;
};

// Dotted-path override; the value is parsed as JSON when it parses, and
// kept as a string otherwise.
void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value);

PipelineConfig config_from_json(nlohmann::json doc, std::string base_dir);
PipelineConfig load_config(const std::string& path);

// FNV-1a over the canonical dump; embedded in every artifact.
std::string config_hash(const PipelineConfig& config);

// generate | train | predict | cluster | evaluate | simulate | pipeline
void run_command(const PipelineConfig& config, const std::string& command);

// Quantile levels written to predictions.csv for quantile families; the
// union of the scoring levels and the clustering levels.
const std::vector<double>& prediction_levels();

}  // namespace pdc
