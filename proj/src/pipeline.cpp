#include "pdc/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <limits>

#include "pdc/sim.hpp"

namespace pdc {

namespace {

namespace fs = std::filesystem;

std::string resolve(const std::string& base, const std::string& path) {
  if (path.empty()) return path;
  fs::path p(path);
  if (p.is_absolute() || base.empty()) return p.lexically_normal().string();
  return (fs::path(base) / p).lexically_normal().string();
}

const nlohmann::json* find(const nlohmann::json& doc, const std::string& section,
                           const std::string& key) {
  if (!doc.contains(section)) return nullptr;
  const auto& s = doc.at(section);
  if (!s.is_object()) throw ConfigError(section, "must be an object");
  if (!s.contains(key)) return nullptr;
  return &s.at(key);
}

std::string get_string(const nlohmann::json& doc, const std::string& section,
                       const std::string& key, const std::string& fallback) {
  const auto* v = find(doc, section, key);
  if (!v) return fallback;
  if (!v->is_string()) throw ConfigError(section + "." + key, "must be a string");
  return v->get<std::string>();
}

std::string need_string(const nlohmann::json& doc, const std::string& section,
                        const std::string& key) {
  const auto* v = find(doc, section, key);
  if (!v || !v->is_string() || v->get<std::string>().empty())
    throw ConfigError(section + "." + key, "required");
  return v->get<std::string>();
}

long get_int(const nlohmann::json& doc, const std::string& section, const std::string& key,
             long fallback) {
  const auto* v = find(doc, section, key);
  if (!v) return fallback;
  if (!v->is_number_integer()) throw ConfigError(section + "." + key, "must be an integer");
  return v->get<long>();
}

double get_number(const nlohmann::json& doc, const std::string& section, const std::string& key,
                  double fallback) {
  const auto* v = find(doc, section, key);
  if (!v) return fallback;
  if (!v->is_number()) throw ConfigError(section + "." + key, "must be a number");
  return v->get<double>();
}

bool get_bool(const nlohmann::json& doc, const std::string& section, const std::string& key,
              bool fallback) {
  const auto* v = find(doc, section, key);
  if (!v) return fallback;
  if (!v->is_boolean()) throw ConfigError(section + "." + key, "must be a boolean");
  return v->get<bool>();
}

Date need_date(const nlohmann::json& doc, const std::string& section, const std::string& key) {
  std::string s = need_string(doc, section, key);
  try {
    return Date::parse(s);
  } catch (const InvalidArgument& e) {
    throw ConfigError(section + "." + key, e.what());
  }
}

IntervalIndex event_bound(const std::string& value, const BusinessHours& hours,
                          const std::string& field) {
  Timestamp ts;
  try {
    ts = Timestamp::parse(value);
  } catch (const InvalidArgument& e) {
    throw ConfigError(field, e.what());
  }
  if (!hours.contains_minute(ts.minute))
    throw ConfigError(field, "falls outside business hours");
  return IntervalIndex{ts.day, hours.slot_of_minute(ts.minute)};
}

}  // namespace

std::string PipelineConfig::effective_orders_path() const {
  if (has_synthetic) return (fs::path(output_dir) / "orders.csv").string();
  return orders_path;
}

void apply_override(nlohmann::json& doc, const std::string& key, const std::string& value) {
  if (key.empty()) throw InvalidArgument("empty override key");
  nlohmann::json* node = &doc;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = key.find('.', start);
    std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
    if (part.empty()) throw InvalidArgument("bad override key '" + key + "'");
    if (dot == std::string::npos) {
      nlohmann::json parsed = nlohmann::json::parse(value, nullptr, false);
      (*node)[part] = parsed.is_discarded() ? nlohmann::json(value) : parsed;
      return;
    }
    if (!node->contains(part) || !(*node)[part].is_object()) (*node)[part] = nlohmann::json::object();
    node = &(*node)[part];
    start = dot + 1;
  }
}

PipelineConfig config_from_json(nlohmann::json doc, std::string base_dir) {
  if (!doc.is_object()) throw ConfigError("", "config must be a JSON object");
  PipelineConfig c;
  c.doc = doc;
  c.base_dir = std::move(base_dir);

  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_integer() || doc.at("seed").get<long long>() < 0)
      throw ConfigError("seed", "must be a nonnegative integer");
    c.seed = doc.at("seed").get<std::uint64_t>();
  }

  c.zones_path = resolve(c.base_dir, need_string(doc, "paths", "zones"));
  c.output_dir = resolve(c.base_dir, need_string(doc, "paths", "output_dir"));
  c.weather_path = resolve(c.base_dir, get_string(doc, "paths", "weather", ""));
  c.holidays_path = resolve(c.base_dir, get_string(doc, "paths", "holidays", ""));

  c.has_synthetic = doc.contains("synthetic");
  if (!c.has_synthetic)
    c.orders_path = resolve(c.base_dir, need_string(doc, "paths", "orders"));
  else
    c.orders_path = resolve(c.base_dir, get_string(doc, "paths", "orders", ""));

  try {
    c.hours.open_minute = parse_minute_of_day(get_string(doc, "data", "open", "10:30"));
    c.hours.close_minute = parse_minute_of_day(get_string(doc, "data", "close", "21:30"));
    c.hours.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError("data.open", e.what());
  }
  c.train_start = need_date(doc, "data", "train_start");
  c.train_end = need_date(doc, "data", "train_end");
  c.test_start = need_date(doc, "data", "test_start");
  c.test_end = need_date(doc, "data", "test_end");
  if (c.train_end < c.train_start) throw ConfigError("data.train_end", "before train_start");
  if (c.test_end < c.test_start) throw ConfigError("data.test_end", "before test_start");
  if (!(c.train_end < c.test_start))
    throw ConfigError("data.test_start", "must come after train_end");

  std::string family = get_string(doc, "model", "family", "qrf");
  try {
    c.family = model_family_from_name(family);
  } catch (const InvalidArgument& e) {
    throw ConfigError("model.family", e.what());
  }
  c.lagged = get_bool(doc, "model", "lagged", true);
  c.cv_folds = int(get_int(doc, "model", "cv_folds", 10));
  if (c.cv_folds < 2) throw ConfigError("model.cv_folds", "needs at least 2 folds");
  if (const auto* p = find(doc, "model", "params")) {
    if (!p->is_object()) throw ConfigError("model.params", "must be an object");
    c.model_params = *p;
  }
  if (const auto* g = find(doc, "model", "grid")) {
    if (!g->is_object()) throw ConfigError("model.grid", "must be an object");
    c.model_grid = *g;
    if (!family_is_tunable(c.family))
      throw ConfigError("model.grid", "family '" + family + "' has nothing to tune");
  }
  if (family_is_tunable(c.family) && !c.model_params.is_null()) {
    try {
      if (c.family == ModelFamily::Boost)
        boost_params_from_json(c.model_params, 0);
      else
        forest_params_from_json(c.model_params, 0);
    } catch (const InvalidArgument& e) {
      throw ConfigError("model.params", e.what());
    }
  }

  c.cluster_method = get_string(doc, "clustering", "method", "cchc_ice");
  if (c.cluster_method != "ckmc" && c.cluster_method != "cchc_ice" &&
      c.cluster_method != "threshold")
    throw ConfigError("clustering.method", "unknown method '" + c.cluster_method + "'");
  c.cluster_input = get_string(doc, "clustering", "input", "point");
  if (c.cluster_input != "point" && c.cluster_input != "quantiles")
    throw ConfigError("clustering.input", "must be 'point' or 'quantiles'");
  if (c.cluster_input == "quantiles" && !family_has_quantiles(c.family))
    throw ConfigError("clustering.input",
                      "family '" + family + "' makes no quantile predictions");
  if (const auto* kr = find(doc, "clustering", "k_range")) {
    if (!kr->is_array() || kr->size() != 2 || !(*kr)[0].is_number_integer() ||
        !(*kr)[1].is_number_integer())
      throw ConfigError("clustering.k_range", "must be [k_lo, k_hi]");
    c.k_lo = (*kr)[0].get<int>();
    c.k_hi = (*kr)[1].get<int>();
  }
  if (c.k_lo < 1 || c.k_hi < c.k_lo)
    throw ConfigError("clustering.k_range", "inverted or empty range [" + std::to_string(c.k_lo) +
                                                "," + std::to_string(c.k_hi) + "]");
  c.min_cluster_size = int(get_int(doc, "clustering", "min_cluster_size", 3));
  if (c.min_cluster_size < 1) throw ConfigError("clustering.min_cluster_size", "must be positive");
  c.cchc.k_min = int(get_int(doc, "clustering", "k_min", 3));
  if (c.cchc.k_min < 1) throw ConfigError("clustering.k_min", "must be positive");
  c.cchc.s_max = int(get_int(doc, "clustering", "s_max", 9));
  if (c.cchc.s_max < 1) throw ConfigError("clustering.s_max", "must be positive");
  if (const auto* dm = find(doc, "clustering", "d_max")) {
    if (dm->is_string()) {
      std::string s = dm->get<std::string>();
      if (s != "inf" && s != "infinity") throw ConfigError("clustering.d_max", "bad value '" + s + "'");
      c.cchc.d_max = std::numeric_limits<double>::infinity();
    } else if (dm->is_number()) {
      c.cchc.d_max = dm->get<double>();
    } else {
      throw ConfigError("clustering.d_max", "must be a number or 'inf'");
    }
  }
  if (!(c.cchc.d_max > 0.0)) throw ConfigError("clustering.d_max", "must be positive");
  if (const auto* cuts = find(doc, "clustering", "cuts")) {
    if (!cuts->is_array() || cuts->empty()) throw ConfigError("clustering.cuts", "must be a nonempty array");
    c.cuts.clear();
    for (const auto& v : *cuts) {
      if (!v.is_number()) throw ConfigError("clustering.cuts", "must hold numbers");
      c.cuts.push_back(v.get<double>());
    }
    for (double v : c.cuts)
      if (!(v > 0.0 && v < 1.0)) throw ConfigError("clustering.cuts", "cuts must lie in (0,1)");
  }

  c.fleet_size = int(get_int(doc, "simulation", "fleet_size", 30));
  if (c.fleet_size < 1) throw ConfigError("simulation.fleet_size", "must be positive");
  c.service_minutes = int(get_int(doc, "simulation", "service_minutes", 3));
  if (c.service_minutes < 0) throw ConfigError("simulation.service_minutes", "must not be negative");
  c.idle_threshold = int(get_int(doc, "simulation", "idle_threshold", 5));
  if (c.idle_threshold < 1) throw ConfigError("simulation.idle_threshold", "must be positive");
  c.minutes_per_hop = get_number(doc, "simulation", "minutes_per_hop", 4.0);
  if (!(c.minutes_per_hop > 0.0)) throw ConfigError("simulation.minutes_per_hop", "must be positive");
  c.sim_policy = get_string(doc, "simulation", "policy", "forward_looking");
  try {
    policy_from_name(c.sim_policy);
  } catch (const InvalidArgument& e) {
    throw ConfigError("simulation.policy", e.what());
  }
  c.sim_oracle = get_string(doc, "simulation", "oracle", "predicted");
  if (c.sim_oracle != "predicted" && c.sim_oracle != "actual")
    throw ConfigError("simulation.oracle", "must be 'predicted' or 'actual'");
  c.repetitions = int(get_int(doc, "simulation", "repetitions", 5));
  if (c.repetitions < 1) throw ConfigError("simulation.repetitions", "must be positive");

  if (c.has_synthetic) {
    const auto& s = doc.at("synthetic");
    if (!s.is_object()) throw ConfigError("synthetic", "must be an object");
    if (!s.contains("hourly_base") || !s.at("hourly_base").is_array() ||
        s.at("hourly_base").size() != 24)
      throw ConfigError("synthetic.hourly_base", "must be an array of 24 rates");
    c.synthetic.hourly_base = s.at("hourly_base").get<std::vector<double>>();
    if (s.contains("dow_multiplier")) {
      if (!s.at("dow_multiplier").is_array() || s.at("dow_multiplier").size() != 7)
        throw ConfigError("synthetic.dow_multiplier", "must be an array of 7 multipliers");
      c.synthetic.dow_multiplier = s.at("dow_multiplier").get<std::vector<double>>();
    } else {
      c.synthetic.dow_multiplier.assign(7, 1.0);
    }
    if (s.contains("zone_scale")) {
      if (!s.at("zone_scale").is_object())
        throw ConfigError("synthetic.zone_scale", "must map zone ids to factors");
      for (const auto& [zk, zv] : s.at("zone_scale").items()) {
        try {
          c.synthetic.zone_scale[std::stoi(zk)] = zv.get<double>();
        } catch (const std::exception&) {
          throw ConfigError("synthetic.zone_scale", "bad zone id '" + zk + "'");
        }
      }
    }
    if (s.contains("events")) {
      if (!s.at("events").is_array()) throw ConfigError("synthetic.events", "must be an array");
      for (const auto& ej : s.at("events")) {
        LevelShiftEvent ev;
        if (ej.contains("zones")) ev.zones = ej.at("zones").get<std::vector<int>>();
        if (!ej.contains("from") || !ej.contains("to") || !ej.contains("multiplier"))
          throw ConfigError("synthetic.events", "each event needs from, to, multiplier");
        ev.from = event_bound(ej.at("from").get<std::string>(), c.hours, "synthetic.events.from");
        ev.to = event_bound(ej.at("to").get<std::string>(), c.hours, "synthetic.events.to");
        if (ev.to < ev.from) throw ConfigError("synthetic.events", "event ends before it starts");
        ev.multiplier = ej.at("multiplier").get<double>();
        if (ev.multiplier < 0) throw ConfigError("synthetic.events", "negative multiplier");
        c.synthetic.events.push_back(std::move(ev));
      }
    }
  }

  return c;
}

PipelineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("", path + ": " + e.what());
  }
  return config_from_json(std::move(doc), fs::path(path).parent_path().string());
}

std::string config_hash(const PipelineConfig& config) {
  nlohmann::json effective = config.doc;
  effective["seed"] = config.seed;
  std::string dump = effective.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return buf;
}

const std::vector<double>& prediction_levels() {
  static const std::vector<double> levels = {0.10, 0.20, 0.25, 0.30, 0.40, 0.50,
                                             0.60, 0.70, 0.75, 0.80, 0.90};
  return levels;
}

}  // namespace pdc
