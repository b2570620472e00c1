#ifndef REEBFORGE_H
#define REEBFORGE_H

#include <stdint.h>

#if defined(_WIN32)
#  define RF_API __declspec(dllexport)
#elif defined(__GNUC__)
#  define RF_API __attribute__((visibility("default")))
#else
#  define RF_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rf_status {
  RF_OK = 0,
  RF_ERR_VALIDATION = 2,
  RF_ERR_PACKING = 3,
  RF_ERR_CERTIFICATION = 4,
  RF_ERR_PARSE = 5,
  RF_ERR_EXPANSION_TOO_LARGE = 6,
  RF_ERR_INVALID_ARGUMENT = 7,
  RF_ERR_INTERNAL = 8
} rf_status;

typedef enum rf_artifact {
  RF_MODEL_JSON = 0,
  RF_ARRANGEMENT_JSON,
  RF_REEB_JSON,
  RF_POLY_JSON,
  RF_POLY_EXPANDED_JSON,
  RF_POLY_TEXT,
  RF_EXTENSION_JSON,
  RF_SVG
} rf_artifact;

typedef struct rf_model rf_model;

typedef struct rf_options {
  int precision_bits;  /* 0: spec field, then REEBFORGE_PRECISION, then 128 */
  int oracle_radial;
  int oracle_angular;
  uint64_t seed;
  long region_samples;
  long staged_samples;
  int zero_samples;
} rf_options;

RF_API void rf_options_init(rf_options* opts);

/* report: {"valid": bool, "violations": [...]} */
RF_API rf_status rf_validate_spec(const char* spec_json, char** report);

RF_API rf_status rf_synthesize(const char* spec_json, const rf_options* opts, rf_model** out);
RF_API rf_status rf_model_load(const char* model_json, const char* arrangement_json, const rf_options* opts,
                               rf_model** out);

/* Runs every check. RF_OK with *passed = 0 means the certificate was produced
   but some check failed. */
RF_API rf_status rf_model_certify(const rf_model* model, const rf_options* opts, char** certificate,
                                  int* passed);
RF_API rf_status rf_model_render(const rf_model* model, rf_artifact what, char** out);

RF_API int rf_model_degree(const rf_model* model);
RF_API int rf_model_variables(const rf_model* model);
RF_API int rf_model_precision(const rf_model* model);
RF_API void rf_model_free(rf_model* model);

/* SVG straight from an arrangement document. */
RF_API rf_status rf_arrangement_svg(const char* arrangement_json, const rf_options* opts, char** svg);

RF_API rf_status rf_check_graph(const char* graph_json, char** report, int* passed);

/* Message of the last failure on this thread; "" after success. */
RF_API const char* rf_last_error(void);
RF_API const char* rf_status_string(rf_status status);
RF_API void rf_free_string(char* s);
RF_API const char* rf_version(void);

#ifdef __cplusplus
}
#endif

#endif
