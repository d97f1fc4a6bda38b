/* C interface to the forecasting / clustering / simulation pipeline.
 *
 * Usage: open a pipeline from a JSON config file, optionally override
 * settings, run commands, close. All functions returning pdc_status report
 * failure details through pdc_pipeline_error (or pdc_last_error when there
 * is no pipeline yet). Handles are not thread-safe; use one per thread.
 */
#ifndef PDC_H
#define PDC_H

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pdc_status {
  PDC_OK = 0,
  PDC_ERROR_INVALID_ARGUMENT = 1,
  PDC_ERROR_CONFIG = 2,
  PDC_ERROR_IO = 3,
  PDC_ERROR_INVARIANT = 4,
  PDC_ERROR_INTERNAL = 5,
} pdc_status;

typedef struct pdc_pipeline pdc_pipeline;

/* Library version, e.g. "0.1.0". Static storage. */
const char* pdc_version(void);

/* Short name for a status code, e.g. "invalid_argument". Static storage. */
const char* pdc_status_name(pdc_status status);

/* Parse and validate a JSON config file. On success *out owns a pipeline
 * that must be released with pdc_pipeline_close. On failure *out is NULL
 * and pdc_last_error describes the problem. */
pdc_status pdc_pipeline_open(const char* config_path, pdc_pipeline** out);

/* Override one config entry by dotted path, e.g. ("model.family", "rf")
 * or ("clustering.k_range", "[2,4]"). Values parse as JSON when possible,
 * otherwise they are taken as strings. Revalidates the whole config. */
pdc_status pdc_pipeline_set(pdc_pipeline* p, const char* key, const char* value);

/* Shorthand for overriding the top-level seed. */
pdc_status pdc_pipeline_set_seed(pdc_pipeline* p, unsigned long long seed);

/* Run one command: generate | train | predict | cluster | evaluate |
 * simulate | pipeline. Artifacts land in the configured output dir. */
pdc_status pdc_pipeline_run(pdc_pipeline* p, const char* command);

/* Hash of the effective config (after overrides); the same value is
 * embedded in every artifact. Owned by the pipeline, valid until the next
 * call on it. */
const char* pdc_pipeline_config_hash(pdc_pipeline* p);

/* Message for the most recent failure on this pipeline, "" if none.
 * Owned by the pipeline, valid until the next call on it. */
const char* pdc_pipeline_error(const pdc_pipeline* p);

/* Message for the most recent failure without a pipeline (open), "" if
 * none. Thread-local static storage. */
const char* pdc_last_error(void);

void pdc_pipeline_close(pdc_pipeline* p);

#ifdef __cplusplus
}
#endif

#endif /* PDC_H */
