#include "pdc/pdc.h"

#include <string>

#include "pdc/pipeline.hpp"
#include "pdc/version.hpp"

struct pdc_pipeline {
  nlohmann::json doc;
  std::string base_dir;
  std::string last_error;
  std::string hash;  // storage for pdc_pipeline_config_hash
};

namespace {

thread_local std::string g_last_error;

pdc_status classify(const std::exception& e) {
  if (dynamic_cast<const pdc::ConfigError*>(&e)) return PDC_ERROR_CONFIG;
  if (dynamic_cast<const pdc::IoError*>(&e)) return PDC_ERROR_IO;
  if (dynamic_cast<const pdc::InvariantError*>(&e)) return PDC_ERROR_INVARIANT;
  if (dynamic_cast<const std::invalid_argument*>(&e)) return PDC_ERROR_INVALID_ARGUMENT;
  return PDC_ERROR_INTERNAL;
}

template <typename Fn>
pdc_status guarded(pdc_pipeline* p, Fn&& fn) {
  if (!p) {
    g_last_error = "null pipeline handle";
    return PDC_ERROR_INVALID_ARGUMENT;
  }
  try {
    fn();
    p->last_error.clear();
    return PDC_OK;
  } catch (const std::exception& e) {
    p->last_error = e.what();
    return classify(e);
  } catch (...) {
    p->last_error = "unknown error";
    return PDC_ERROR_INTERNAL;
  }
}

}  // namespace

extern "C" {

const char* pdc_version(void) { return pdc::kVersion; }

const char* pdc_status_name(pdc_status status) {
  switch (status) {
    case PDC_OK: return "ok";
    case PDC_ERROR_INVALID_ARGUMENT: return "invalid_argument";
    case PDC_ERROR_CONFIG: return "config";
    case PDC_ERROR_IO: return "io";
    case PDC_ERROR_INVARIANT: return "invariant";
    case PDC_ERROR_INTERNAL: return "internal";
  }
  return "unknown";
}

pdc_status pdc_pipeline_open(const char* config_path, pdc_pipeline** out) {
  if (out) *out = nullptr;
  if (!config_path || !out) {
    g_last_error = "config_path and out must not be NULL";
    return PDC_ERROR_INVALID_ARGUMENT;
  }
  try {
    pdc::PipelineConfig config = pdc::load_config(config_path);
    auto* p = new pdc_pipeline;
    p->doc = std::move(config.doc);
    p->base_dir = std::move(config.base_dir);
    *out = p;
    g_last_error.clear();
    return PDC_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return classify(e);
  } catch (...) {
    g_last_error = "unknown error";
    return PDC_ERROR_INTERNAL;
  }
}

pdc_status pdc_pipeline_set(pdc_pipeline* p, const char* key, const char* value) {
  return guarded(p, [&] {
    if (!key || !value) throw pdc::InvalidArgument("key and value must not be NULL");
    nlohmann::json doc = p->doc;
    pdc::apply_override(doc, key, value);
    pdc::config_from_json(doc, p->base_dir);  // validate before committing
    p->doc = std::move(doc);
  });
}

pdc_status pdc_pipeline_set_seed(pdc_pipeline* p, unsigned long long seed) {
  return guarded(p, [&] { p->doc["seed"] = seed; });
}

pdc_status pdc_pipeline_run(pdc_pipeline* p, const char* command) {
  return guarded(p, [&] {
    if (!command) throw pdc::InvalidArgument("command must not be NULL");
    pdc::PipelineConfig config = pdc::config_from_json(p->doc, p->base_dir);
    pdc::run_command(config, command);
  });
}

const char* pdc_pipeline_config_hash(pdc_pipeline* p) {
  if (!p) return "";
  try {
    pdc::PipelineConfig config = pdc::config_from_json(p->doc, p->base_dir);
    p->hash = pdc::config_hash(config);
    return p->hash.c_str();
  } catch (const std::exception& e) {
    p->last_error = e.what();
    return "";
  }
}

const char* pdc_pipeline_error(const pdc_pipeline* p) {
  return p ? p->last_error.c_str() : g_last_error.c_str();
}

const char* pdc_last_error(void) { return g_last_error.c_str(); }

void pdc_pipeline_close(pdc_pipeline* p) { delete p; }

}  // extern "C"
