#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>

#include "pdc/benchmarks.hpp"
#include "pdc/csv.hpp"
#include "pdc/metrics.hpp"
#include "pdc/pipeline.hpp"
#include "pdc/sim.hpp"
#include "pdc/version.hpp"

namespace pdc {

namespace {

namespace fs = std::filesystem;

std::string artifact(const PipelineConfig& c, const std::string& name) {
  fs::create_directories(c.output_dir);
  return (fs::path(c.output_dir) / name).string();
}

void write_json_artifact(const PipelineConfig& c, const std::string& name, nlohmann::json body) {
  body["tool_version"] = kVersion;
  body["config_hash"] = config_hash(c);
  std::ofstream out(artifact(c, name));
  if (!out) throw IoError("cannot write " + name + " in " + c.output_dir);
  out << body.dump(2) << '\n';
  if (!out) throw IoError("write failed on " + name);
}

nlohmann::json read_json_artifact(const PipelineConfig& c, const std::string& name,
                                  const std::string& producer) {
  std::string path = (fs::path(c.output_dir) / name).string();
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path + " (run '" + producer + "' first)");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
  return doc;
}

struct LoadedData {
  ZoneRegistry registry;
  std::vector<int> pickups;
  IntervalGrid grid;  // train_start .. test_end
  AggregateResult agg;
  std::vector<WeatherRecord> weather;
  bool use_weather = false;
  std::set<Date> holidays;
};

LoadedData load_data(const PipelineConfig& c, bool with_orders = true) {
  LoadedData d;
  d.registry = load_zones(c.zones_path);
  d.pickups = d.registry.pickup_zones();
  d.grid = IntervalGrid(c.hours, c.train_start, c.test_end);
  if (with_orders) {
    auto orders = load_orders(c.effective_orders_path(), d.registry);
    d.agg = aggregate_orders(orders, d.registry, d.grid);
  }
  if (!c.weather_path.empty()) {
    d.weather = load_weather(c.weather_path);
    d.use_weather = true;
  }
  if (!c.holidays_path.empty()) d.holidays = load_holidays(c.holidays_path);
  return d;
}

struct ZoneRows {
  int zone = 0;
  FeatureTable table;
  std::vector<std::size_t> train_rows, test_rows;
};

std::vector<ZoneRows> build_rows(const PipelineConfig& c, const LoadedData& d) {
  std::vector<ZoneRows> out;
  for (int z : d.pickups) {
    ZoneRows zr;
    zr.zone = z;
    zr.table = assemble_features(d.agg.series.at(z), c.hours,
                                 d.use_weather ? &d.weather : nullptr, d.holidays, c.lagged);
    for (std::size_t r = 0; r < zr.table.rows(); ++r) {
      Date day = zr.table.row_interval[r].day;
      if (day >= c.train_start && day <= c.train_end) zr.train_rows.push_back(r);
      if (day >= c.test_start && day <= c.test_end) zr.test_rows.push_back(r);
    }
    if (zr.train_rows.empty())
      throw InvalidArgument("zone " + std::to_string(z) + " has no training rows");
    out.push_back(std::move(zr));
  }
  return out;
}

// Rows of one zone packed into an owned training view.
struct OwnedTable {
  std::vector<double> values;
  std::vector<double> targets;
  std::size_t cols = 0;

  DataView view() const { return DataView{values, cols, targets}; }
};

OwnedTable pack(const FeatureTable& t, const std::vector<std::size_t>& rows) {
  OwnedTable o;
  o.cols = t.cols();
  o.values.reserve(rows.size() * o.cols);
  o.targets.reserve(rows.size());
  for (std::size_t r : rows) {
    auto row = t.row(r);
    o.values.insert(o.values.end(), row.begin(), row.end());
    o.targets.push_back(t.targets[r]);
  }
  return o;
}

DemandSeries slice_series(const DemandSeries& s, Date from, Date to) {
  DemandSeries out;
  out.zone = s.zone;
  for (std::size_t i = 0; i < s.intervals.size(); ++i)
    if (s.intervals[i].day >= from && s.intervals[i].day <= to) {
      out.intervals.push_back(s.intervals[i]);
      out.counts.push_back(s.counts[i]);
    }
  return out;
}

std::string quote_csv(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

std::uint64_t zone_seed(const PipelineConfig& c, int zone) {
  return c.seed + std::uint64_t(zone);
}

void cmd_generate(const PipelineConfig& c) {
  if (!c.has_synthetic)
    throw ConfigError("synthetic", "generate needs a synthetic profile in the config");
  LoadedData d = load_data(c, false);
  auto orders = generate_synthetic(d.registry, d.grid, c.synthetic, c.seed);
  write_orders(artifact(c, "orders.csv"), orders);
}

void cmd_train(const PipelineConfig& c) {
  LoadedData d = load_data(c);
  auto zones = build_rows(c, d);

  nlohmann::json models = nlohmann::json::object();
  for (auto& zr : zones) {
    if (c.family == ModelFamily::Myopic) {
      models[std::to_string(zr.zone)] = nlohmann::json::object();
      continue;
    }
    if (c.family == ModelFamily::SeasonalAverage || c.family == ModelFamily::SeasonalQuantile) {
      DemandSeries train = slice_series(d.agg.series.at(zr.zone), c.train_start, c.train_end);
      models[std::to_string(zr.zone)] = SeasonalIndex(train, c.hours).to_json();
      continue;
    }

    OwnedTable train = pack(zr.table, zr.train_rows);
    nlohmann::json params = c.model_params.is_null() ? nlohmann::json::object() : c.model_params;
    if (!c.model_grid.is_null()) {
      Grid grid;
      grid.axes = c.model_grid;
      TuneResult tuned =
          grid_search_cv(train.view(), c.family, grid, c.cv_folds, zone_seed(c, zr.zone));
      CsvWriter w(artifact(c, "tuning_zone" + std::to_string(zr.zone) + ".csv"));
      w.row({"candidate_id", "params_json", "mean_cv_mse"});
      for (std::size_t i = 0; i < tuned.candidates.size(); ++i)
        w.row({std::to_string(i), quote_csv(tuned.candidates[i].params.dump()),
               fmt_num(tuned.candidates[i].mean_mse)});
      w.close();
      params = tuned.candidates[tuned.best_index].params;
    }

    if (c.family == ModelFamily::Boost) {
      BoostModel model = fit_boost(train.view(), boost_params_from_json(params, zone_seed(c, zr.zone)));
      models[std::to_string(zr.zone)] = boost_to_json(model);
    } else {
      ForestKind kind = c.family == ModelFamily::Qrf ? ForestKind::Qrf : ForestKind::Rf;
      ForestModel model =
          fit_forest(train.view(), forest_params_from_json(params, zone_seed(c, zr.zone)), kind);
      models[std::to_string(zr.zone)] = forest_to_json(model);
    }
  }

  nlohmann::json body;
  body["family"] = model_family_name(c.family);
  body["lagged"] = c.lagged;
  body["schema"] = zones.empty() ? nlohmann::json::array() : nlohmann::json(zones[0].table.schema);
  body["zones"] = std::move(models);
  write_json_artifact(c, "models.json", std::move(body));
}

std::vector<std::string> prediction_header(const PipelineConfig& c) {
  std::vector<std::string> h = {"zone", "date", "slot", "actual", "predicted"};
  if (family_has_quantiles(c.family))
    for (double q : prediction_levels())
      h.push_back("q" + std::to_string(int(std::lround(q * 100))));
  return h;
}

void cmd_predict(const PipelineConfig& c) {
  LoadedData d = load_data(c);
  auto zones = build_rows(c, d);
  nlohmann::json models = read_json_artifact(c, "models.json", "train");
  std::string family = models.at("family").get<std::string>();
  if (family != model_family_name(c.family))
    throw InvalidArgument("models.json was trained for family '" + family +
                          "', config now says '" + std::string(model_family_name(c.family)) + "'");

  const auto& levels = prediction_levels();
  CsvWriter w(artifact(c, "predictions.csv"));
  w.row(prediction_header(c));

  for (auto& zr : zones) {
    const nlohmann::json& mj = models.at("zones").at(std::to_string(zr.zone));
    const DemandSeries& series = d.agg.series.at(zr.zone);

    ForestModel forest;
    BoostModel boost;
    SeasonalIndex seasonal;
    if (c.family == ModelFamily::Rf || c.family == ModelFamily::Qrf) forest = forest_from_json(mj);
    if (c.family == ModelFamily::Boost) boost = boost_from_json(mj);
    if (c.family == ModelFamily::SeasonalAverage || c.family == ModelFamily::SeasonalQuantile)
      seasonal = SeasonalIndex::from_json(mj);

    for (std::size_t r : zr.test_rows) {
      IntervalIndex iv = zr.table.row_interval[r];
      double actual = zr.table.targets[r];
      double point = 0.0;
      std::vector<double> qs;

      switch (c.family) {
        case ModelFamily::Myopic: {
          int pos = d.grid.position_of(iv);
          point = pos > 0 ? series.counts[std::size_t(pos - 1)] : 0.0;
          break;
        }
        case ModelFamily::SeasonalAverage:
          point = seasonal.average(c.hours.hour_of_slot(iv.slot), iv.day.weekday());
          break;
        case ModelFamily::SeasonalQuantile: {
          int hour = c.hours.hour_of_slot(iv.slot);
          int dow = iv.day.weekday();
          for (double q : levels) qs.push_back(seasonal.quantile(hour, dow, q));
          point = seasonal.quantile(hour, dow, 0.5);
          break;
        }
        case ModelFamily::Rf:
          point = forest_point(forest, zr.table.row(r));
          break;
        case ModelFamily::Qrf: {
          qs = forest_quantiles(forest, zr.table.row(r), levels);
          point = forest_quantile(forest, zr.table.row(r), 0.5);
          break;
        }
        case ModelFamily::Boost:
          point = boost_predict(boost, zr.table.row(r));
          break;
      }

      std::vector<std::string> cells = {std::to_string(zr.zone), iv.day.iso(),
                                        std::to_string(iv.slot), fmt_num(actual), fmt_num(point)};
      for (double q : qs) cells.push_back(fmt_num(q));
      w.row(cells);
    }
  }
  w.close();
}

// predictions.csv pulled back into per-interval, per-zone form.
struct PredictionRow {
  double actual = 0.0;
  double point = 0.0;
  std::vector<double> quantiles;  // prediction_levels() order, maybe empty
};

struct Predictions {
  std::vector<int> zones;
  std::map<IntervalIndex, std::map<int, PredictionRow>> by_interval;
  bool has_quantiles = false;
};

Predictions load_predictions(const PipelineConfig& c) {
  std::string path = (fs::path(c.output_dir) / "predictions.csv").string();
  if (!fs::exists(path)) throw IoError("cannot open " + path + " (run 'predict' first)");
  CsvTable t = read_csv(path);
  int c_zone = t.require_column("zone", path);
  int c_date = t.require_column("date", path);
  int c_slot = t.require_column("slot", path);
  int c_actual = t.require_column("actual", path);
  int c_point = t.require_column("predicted", path);

  const auto& levels = prediction_levels();
  std::vector<int> qcols;
  for (double q : levels) {
    int col = t.column("q" + std::to_string(int(std::lround(q * 100))));
    if (col >= 0) qcols.push_back(col);
  }
  bool has_q = qcols.size() == levels.size();

  Predictions p;
  p.has_quantiles = has_q;
  std::set<int> zone_set;
  for (const auto& row : t.rows) {
    int zone = int(parse_int(row[std::size_t(c_zone)], path));
    IntervalIndex iv{Date::parse(row[std::size_t(c_date)]),
                     int(parse_int(row[std::size_t(c_slot)], path))};
    PredictionRow pr;
    pr.actual = parse_num(row[std::size_t(c_actual)], path);
    pr.point = parse_num(row[std::size_t(c_point)], path);
    if (has_q)
      for (int qc : qcols) pr.quantiles.push_back(parse_num(row[std::size_t(qc)], path));
    p.by_interval[iv][zone] = std::move(pr);
    zone_set.insert(zone);
  }
  p.zones.assign(zone_set.begin(), zone_set.end());
  if (p.zones.empty()) throw InvalidArgument(path + ": no prediction rows");
  return p;
}

double quantile_at(const PredictionRow& pr, double level) {
  const auto& levels = prediction_levels();
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == level) return pr.quantiles[i];
  throw InvariantError("prediction level missing");
}

// One interval's clustering over the pickup zones.
ClusterSet cluster_interval(const PipelineConfig& c, const std::vector<int>& zones,
                            const ZoneRegistry& registry, const Adjacency& sub,
                            const std::vector<double>& demand_point,
                            const std::vector<std::vector<double>>& demand_quantiles,
                            bool use_quantiles, std::uint64_t seed_offset) {
  std::size_t n = zones.size();
  if (c.cluster_method == "ckmc") {
    ClusterInput in;
    in.n_cols = use_quantiles ? 5 : 3;
    for (std::size_t i = 0; i < n; ++i) {
      const ZoneInfo& z = registry.zone(zones[i]);
      in.values.push_back(z.lat);
      in.values.push_back(z.lng);
      if (use_quantiles)
        for (double q : demand_quantiles[i]) in.values.push_back(q);
      else
        in.values.push_back(demand_point[i]);
    }
    // Point demand gets triple weight against the two coordinates; the
    // three quantile columns already outvote them unweighted.
    in.weights = use_quantiles ? std::vector<double>{1, 1, 1, 1, 1}
                               : std::vector<double>{1, 1, 3};
    return ckmc(in, c.k_lo, c.k_hi, c.min_cluster_size, c.seed + seed_offset);
  }
  if (c.cluster_method == "cchc_ice") {
    ClusterInput in;
    in.n_cols = use_quantiles ? 3 : 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (use_quantiles)
        for (double q : demand_quantiles[i]) in.values.push_back(q);
      else
        in.values.push_back(demand_point[i]);
    }
    in.weights.assign(in.n_cols, 1.0);
    return cchc_ice(in, sub, c.cchc);
  }
  std::vector<double> demand = demand_point;
  if (use_quantiles)
    for (std::size_t i = 0; i < n; ++i) demand[i] = demand_quantiles[i][1];  // the median
  return threshold_clusters(demand, c.cuts);
}

void cmd_cluster(const PipelineConfig& c) {
  LoadedData d = load_data(c, false);
  Predictions p = load_predictions(c);
  bool use_q = c.cluster_input == "quantiles";
  if (use_q && !p.has_quantiles)
    throw InvalidArgument("clustering.input is 'quantiles' but predictions.csv has no quantile columns");
  for (int z : p.zones)
    if (!d.registry.zone(z).is_pickup)
      throw InvalidArgument("predictions.csv mentions non-pickup zone " + std::to_string(z));

  Adjacency sub = d.registry.pickup_subgraph(p.zones);

  CsvWriter w(artifact(c, "clusters.csv"));
  w.row({"interval", "zone", "cluster_id", "within_cluster_median"});
  nlohmann::json intervals = nlohmann::json::array();

  std::uint64_t pos = 0;
  for (const auto& [iv, rows] : p.by_interval) {
    std::vector<double> point;
    std::vector<std::vector<double>> quantiles;
    for (int z : p.zones) {
      auto it = rows.find(z);
      if (it == rows.end())
        throw InvalidArgument("predictions.csv misses zone " + std::to_string(z) + " at " +
                              Timestamp{iv.day, c.hours.open_minute + iv.slot * 15}.iso());
      point.push_back(it->second.point);
      if (use_q)
        quantiles.push_back({quantile_at(it->second, 0.25), quantile_at(it->second, 0.5),
                             quantile_at(it->second, 0.75)});
    }
    ClusterSet cs =
        cluster_interval(c, p.zones, d.registry, sub, point, quantiles, use_q, pos);

    std::vector<double> scalar(p.zones.size());
    for (std::size_t i = 0; i < p.zones.size(); ++i)
      scalar[i] = use_q ? quantiles[i][1] : point[i];
    std::vector<double> med(p.zones.size());
    for (const auto& group : cs.groups()) {
      if (group.empty()) continue;
      std::vector<double> vals;
      for (int i : group) vals.push_back(scalar[std::size_t(i)]);
      double m = median(vals);
      for (int i : group) med[std::size_t(i)] = m;
    }

    std::string iso = Timestamp{iv.day, c.hours.open_minute + iv.slot * 15}.iso();
    nlohmann::json zone_entries = nlohmann::json::array();
    for (std::size_t i = 0; i < p.zones.size(); ++i) {
      w.row({iso, std::to_string(p.zones[i]), std::to_string(cs.labels[i]), fmt_num(med[i])});
      const ZoneInfo& z = d.registry.zone(p.zones[i]);
      zone_entries.push_back(nlohmann::json{{"zone", z.id},
                                            {"lat", z.lat},
                                            {"lng", z.lng},
                                            {"cluster_id", cs.labels[i]},
                                            {"median_value", med[i]}});
    }
    intervals.push_back(nlohmann::json{{"interval", iso},
                                       {"k", cs.k},
                                       {"stop_reason", stop_reason_name(cs.stop_reason)},
                                       {"zones", std::move(zone_entries)}});
    ++pos;
  }
  w.close();
  write_json_artifact(c, "heatmap.json", nlohmann::json{{"intervals", std::move(intervals)}});
}

void write_metric_table(const PipelineConfig& c, const std::string& name,
                        const std::vector<int>& zones, const std::vector<PointMetrics>& rows,
                        const std::vector<double>* mcrps_col) {
  CsvWriter w(artifact(c, name));
  std::vector<std::string> header = {"zone", "mae", "rmse", "rmsle", "resid_std"};
  if (mcrps_col) header.push_back("mcrps");
  w.row(header);

  auto emit = [&](const std::string& label, const PointMetrics& m, double extra, bool has_extra) {
    std::vector<std::string> cells = {label, fmt_num(m.mae), fmt_num(m.rmse), fmt_num(m.rmsle),
                                      fmt_num(m.resid_std)};
    if (mcrps_col) cells.push_back(has_extra ? fmt_num(extra) : "");
    w.row(cells);
  };

  for (std::size_t i = 0; i < zones.size(); ++i)
    emit(std::to_string(zones[i]), rows[i], mcrps_col ? (*mcrps_col)[i] : 0.0, mcrps_col != nullptr);

  // Cross-zone mean and population spread per metric.
  auto field = [](const PointMetrics& m, int f) {
    switch (f) {
      case 0: return m.mae;
      case 1: return m.rmse;
      case 2: return m.rmsle;
      default: return m.resid_std;
    }
  };
  PointMetrics mean, stddev;
  double mean_extra = 0.0, std_extra = 0.0;
  double n = double(rows.size());
  double acc[4] = {0, 0, 0, 0};
  for (const auto& m : rows)
    for (int f = 0; f < 4; ++f) acc[f] += field(m, f);
  mean.mae = acc[0] / n;
  mean.rmse = acc[1] / n;
  mean.rmsle = acc[2] / n;
  mean.resid_std = acc[3] / n;
  double var[4] = {0, 0, 0, 0};
  for (const auto& m : rows)
    for (int f = 0; f < 4; ++f) {
      double d = field(m, f) - acc[f] / n;
      var[f] += d * d;
    }
  stddev.mae = std::sqrt(var[0] / n);
  stddev.rmse = std::sqrt(var[1] / n);
  stddev.rmsle = std::sqrt(var[2] / n);
  stddev.resid_std = std::sqrt(var[3] / n);
  if (mcrps_col) {
    for (double v : *mcrps_col) mean_extra += v;
    mean_extra /= n;
    for (double v : *mcrps_col) std_extra += (v - mean_extra) * (v - mean_extra);
    std_extra = std::sqrt(std_extra / n);
  }
  emit("mean", mean, mean_extra, mcrps_col != nullptr);
  emit("std", stddev, std_extra, mcrps_col != nullptr);
  w.close();
}

void cmd_evaluate(const PipelineConfig& c) {
  LoadedData d = load_data(c, false);
  Predictions p = load_predictions(c);
  bool use_q = c.cluster_input == "quantiles";
  if (use_q && !p.has_quantiles)
    throw InvalidArgument("clustering.input is 'quantiles' but predictions.csv has no quantile columns");

  // Forecast accuracy per zone.
  std::vector<PointMetrics> zone_metrics;
  std::vector<double> zone_mcrps;
  const auto& crps_levels = default_crps_levels();
  for (int z : p.zones) {
    std::vector<double> actual, predicted;
    std::vector<QuantileForecast> forecasts;
    for (const auto& [iv, rows] : p.by_interval) {
      auto it = rows.find(z);
      if (it == rows.end()) continue;
      actual.push_back(it->second.actual);
      predicted.push_back(it->second.point);
      if (p.has_quantiles) {
        std::vector<double> values;
        for (double q : crps_levels) values.push_back(quantile_at(it->second, q));
        forecasts.push_back(QuantileForecast::make(crps_levels, std::move(values)));
      }
    }
    zone_metrics.push_back(point_metrics(actual, predicted));
    if (p.has_quantiles) zone_mcrps.push_back(mcrps(forecasts, actual));
  }
  write_metric_table(c, "forecast_metrics.csv", p.zones, zone_metrics,
                     p.has_quantiles ? &zone_mcrps : nullptr);

  // Clustering quality: medians within predicted clusters against medians
  // within the clusters the realized demand would have produced.
  Adjacency sub = d.registry.pickup_subgraph(p.zones);
  std::vector<std::vector<double>> actual_medians(p.zones.size()), pred_medians(p.zones.size());
  std::uint64_t pos = 0;
  for (const auto& [iv, rows] : p.by_interval) {
    std::vector<double> actual, point;
    std::vector<std::vector<double>> quantiles;
    for (int z : p.zones) {
      auto it = rows.find(z);
      if (it == rows.end())
        throw InvalidArgument("predictions.csv misses zone " + std::to_string(z) +
                              " in some interval");
      actual.push_back(it->second.actual);
      point.push_back(it->second.point);
      if (use_q)
        quantiles.push_back({quantile_at(it->second, 0.25), quantile_at(it->second, 0.5),
                             quantile_at(it->second, 0.75)});
    }
    ClusterSet actual_cs = cluster_interval(c, p.zones, d.registry, sub, actual, {}, false, pos);
    ClusterSet pred_cs = cluster_interval(c, p.zones, d.registry, sub, point, quantiles, use_q, pos);

    std::vector<double> pred_scalar(p.zones.size());
    for (std::size_t i = 0; i < p.zones.size(); ++i)
      pred_scalar[i] = use_q ? quantiles[i][1] : point[i];
    ClusterMedianEval ev = within_cluster_median_eval(actual, actual_cs, pred_scalar, pred_cs);
    for (std::size_t i = 0; i < p.zones.size(); ++i) {
      actual_medians[i].push_back(ev.actual_median[i]);
      pred_medians[i].push_back(ev.predicted_median[i]);
    }
    ++pos;
  }
  std::vector<PointMetrics> cluster_metrics;
  for (std::size_t i = 0; i < p.zones.size(); ++i)
    cluster_metrics.push_back(point_metrics(actual_medians[i], pred_medians[i]));
  write_metric_table(c, "cluster_eval.csv", p.zones, cluster_metrics, nullptr);
}

void cmd_simulate(const PipelineConfig& c) {
  LoadedData d = load_data(c);

  std::vector<Order> test_orders;
  {
    auto all = load_orders(c.effective_orders_path(), d.registry);
    for (auto& o : all)
      if (o.at.day >= c.test_start && o.at.day <= c.test_end) test_orders.push_back(std::move(o));
  }

  SimConfig sim;
  sim.fleet_size = c.fleet_size;
  sim.service_minutes = c.service_minutes;
  sim.idle_threshold = c.idle_threshold;
  sim.minutes_per_hop = c.minutes_per_hop;
  sim.hours = c.hours;
  sim.seed = c.seed;

  // d(z): forecast for the interval after the current minute, zero at the
  // end of the horizon and for zones without predictions.
  IntervalGrid test_grid(c.hours, c.test_start, c.test_end);
  DemandOracle oracle;
  if (c.sim_oracle == "actual") {
    auto series = std::make_shared<std::map<int, DemandSeries>>();
    for (const auto& [z, s] : d.agg.series) (*series)[z] = slice_series(s, c.test_start, c.test_end);
    oracle = [series, test_grid](int zone, Date day, int minute) {
      auto it = series->find(zone);
      if (it == series->end()) return 0.0;
      int pos = test_grid.position(day, minute);
      if (pos < 0) return 0.0;
      int slot = pos % test_grid.slots_per_day();
      if (slot + 1 >= test_grid.slots_per_day()) return 0.0;
      return it->second.counts[std::size_t(pos + 1)];
    };
  } else {
    Predictions p = load_predictions(c);
    auto table = std::make_shared<std::map<std::pair<int, int>, double>>();
    bool use_q = p.has_quantiles;
    for (const auto& [iv, rows] : p.by_interval) {
      int pos = test_grid.position_of(iv);
      if (pos < 0) continue;
      for (const auto& [zone, pr] : rows)
        (*table)[{zone, pos}] = use_q ? quantile_at(pr, 0.5) : pr.point;
    }
    oracle = [table, test_grid](int zone, Date day, int minute) {
      int pos = test_grid.position(day, minute);
      if (pos < 0) return 0.0;
      int slot = pos % test_grid.slots_per_day();
      if (slot + 1 >= test_grid.slots_per_day()) return 0.0;
      auto it = table->find({zone, pos + 1});
      return it == table->end() ? 0.0 : it->second;
    };
  }

  std::vector<RelocationPolicy> policies = {RelocationPolicy{PolicyKind::None, nullptr},
                                            RelocationPolicy{PolicyKind::NearestPickup, nullptr},
                                            RelocationPolicy{PolicyKind::ForwardLooking, oracle}};
  auto stats = compare_policies(test_orders, d.registry, sim, policies, c.repetitions, c.seed);

  CsvWriter w(artifact(c, "policies.csv"));
  w.row({"policy", "mean_delivery_min", "rejection_rate", "reduction_vs_none_pct"});
  for (const auto& s : stats)
    w.row({s.label, fmt_num(s.mean_delivery_minutes), fmt_num(s.rejection_rate),
           fmt_num(s.reduction_vs_none_pct)});
  w.close();

  RelocationPolicy configured;
  configured.kind = policy_from_name(c.sim_policy);
  if (configured.kind == PolicyKind::ForwardLooking) configured.oracle = oracle;
  SimResult run = run_simulation(test_orders, d.registry, sim, configured);

  nlohmann::json per_order = nlohmann::json::array();
  for (const auto& o : run.orders) {
    nlohmann::json entry{{"order_id", o.order_id}, {"rejected", o.rejected}};
    if (!o.rejected) {
      entry["courier"] = o.courier;
      entry["delivery_minutes"] = o.delivery_minutes;
    }
    per_order.push_back(std::move(entry));
  }
  nlohmann::json body{
      {"config",
       {{"fleet_size", sim.fleet_size},
        {"service_minutes", sim.service_minutes},
        {"idle_threshold", sim.idle_threshold},
        {"minutes_per_hop", sim.minutes_per_hop},
        {"policy", c.sim_policy},
        {"oracle", c.sim_oracle},
        {"repetitions", c.repetitions},
        {"seed", c.seed}}},
      {"kpis",
       {{"arrived", run.kpis.arrived},
        {"delivered", run.kpis.delivered},
        {"rejected", run.kpis.rejected},
        {"skipped", run.kpis.skipped},
        {"relocations", run.kpis.relocations},
        {"mean_delivery_minutes", run.kpis.mean_delivery_minutes},
        {"rejection_rate", run.kpis.rejection_rate}}},
      {"per_order", std::move(per_order)}};
  write_json_artifact(c, "simulation.json", std::move(body));
}

}  // namespace

void run_command(const PipelineConfig& config, const std::string& command) {
  if (command == "generate") return cmd_generate(config);
  if (command == "train") return cmd_train(config);
  if (command == "predict") return cmd_predict(config);
  if (command == "cluster") return cmd_cluster(config);
  if (command == "evaluate") return cmd_evaluate(config);
  if (command == "simulate") return cmd_simulate(config);
  if (command == "pipeline") {
    if (config.has_synthetic) cmd_generate(config);
    cmd_train(config);
    cmd_predict(config);
    cmd_cluster(config);
    cmd_evaluate(config);
    cmd_simulate(config);
    return;
  }
  throw InvalidArgument("unknown command '" + command + "'");
}

}  // namespace pdc
