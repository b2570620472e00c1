/* Exercises the shared library through its C header only. */
#include "reebforge/reebforge.h"

#include <stdio.h>
#include <stdlib.h>
#include <string.h>

static int failures = 0;

#define EXPECT(cond)                                               \
  do {                                                             \
    if (!(cond)) {                                                 \
      fprintf(stderr, "%s:%d: failed: %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                  \
    }                                                              \
  } while (0)

static const char* k222 = "{\"mode\": \"circle\", \"vertices\": 3, \"multiplicities\": [2, 2, 2], \"dimension\": 2}";
static const char* k121 = "{\"mode\": \"circle\", \"vertices\": 3, \"multiplicities\": [1, 2, 1]}";
static const char* khandle =
    "{\"vertices\": 3, \"multiplicities\": [2, 1, 2], \"dimension\": 5,"
    " \"handles\": [{\"edge\": [2, 1], \"sequence\": [1, 0]}]}";

static rf_options quick(void) {
  rf_options o;
  rf_options_init(&o);
  o.oracle_radial = 512;
  o.oracle_angular = 256;
  o.region_samples = 2000;
  o.staged_samples = 500;
  o.zero_samples = 100;
  return o;
}

static void test_validate(void) {
  char* report = NULL;
  EXPECT(rf_validate_spec(k222, &report) == RF_OK);
  EXPECT(report && strstr(report, "\"valid\": true"));
  rf_free_string(report);
  report = NULL;
  EXPECT(rf_validate_spec(k121, &report) == RF_OK);
  EXPECT(report && strstr(report, "AdjacentUnitPair"));
  rf_free_string(report);
  report = NULL;
  EXPECT(rf_validate_spec("{", &report) == RF_ERR_PARSE);
  EXPECT(report == NULL);
  EXPECT(strlen(rf_last_error()) > 0);
  EXPECT(rf_validate_spec(NULL, &report) == RF_ERR_INVALID_ARGUMENT);
}

static void test_synthesize(void) {
  rf_options o = quick();
  rf_model* m = NULL;
  EXPECT(rf_synthesize(k222, &o, &m) == RF_OK);
  EXPECT(m != NULL);
  EXPECT(strcmp(rf_last_error(), "") == 0);
  EXPECT(rf_model_degree(m) == 10);
  EXPECT(rf_model_variables(m) == 3);
  EXPECT(rf_model_precision(m) == 128);

  char* cert = NULL;
  int passed = 0;
  EXPECT(rf_model_certify(m, &o, &cert, &passed) == RF_OK);
  EXPECT(passed == 1);
  EXPECT(cert && strstr(cert, "\"oracle_equivalence\""));
  rf_free_string(cert);

  char* model_json = NULL;
  char* arr_json = NULL;
  EXPECT(rf_model_render(m, RF_MODEL_JSON, &model_json) == RF_OK);
  EXPECT(rf_model_render(m, RF_ARRANGEMENT_JSON, &arr_json) == RF_OK);
  rf_model* back = NULL;
  EXPECT(rf_model_load(model_json, arr_json, &o, &back) == RF_OK);
  EXPECT(rf_model_degree(back) == 10);
  char* again = NULL;
  EXPECT(rf_model_render(back, RF_MODEL_JSON, &again) == RF_OK);
  EXPECT(again && strcmp(again, model_json) == 0);
  rf_free_string(again);

  char* svg = NULL;
  EXPECT(rf_arrangement_svg(arr_json, &o, &svg) == RF_OK);
  EXPECT(svg && strncmp(svg, "<svg", 4) == 0);
  rf_free_string(svg);

  const rf_artifact all[] = {RF_REEB_JSON, RF_POLY_JSON, RF_POLY_EXPANDED_JSON, RF_POLY_TEXT, RF_EXTENSION_JSON, RF_SVG};
  for (size_t i = 0; i < sizeof all / sizeof all[0]; ++i) {
    char* out = NULL;
    EXPECT(rf_model_render(m, all[i], &out) == RF_OK);
    EXPECT(out && strlen(out) > 0);
    rf_free_string(out);
  }
  char* out = NULL;
  EXPECT(rf_model_render(m, (rf_artifact)99, &out) == RF_ERR_INVALID_ARGUMENT);

  rf_free_string(model_json);
  rf_free_string(arr_json);
  rf_model_free(back);
  rf_model_free(m);
}

static void test_errors(void) {
  rf_options o = quick();
  rf_model* m = NULL;
  EXPECT(rf_synthesize(k121, &o, &m) == RF_ERR_VALIDATION);
  EXPECT(m == NULL);
  EXPECT(strstr(rf_last_error(), "AdjacentUnitPair") != NULL);

  EXPECT(rf_synthesize("{\"vertices\": 3, \"multiplicities\": [2, 2, 2], \"annulus_halfwidth\": \"1/16\"}", &o, &m) ==
         RF_ERR_PACKING);
  EXPECT(rf_synthesize("not json", &o, &m) == RF_ERR_PARSE);

  o.precision_bits = 20;
  EXPECT(rf_synthesize(k222, &o, &m) == RF_ERR_INVALID_ARGUMENT);
  o = quick();
  o.oracle_radial = 8;
  EXPECT(rf_synthesize(k222, &o, &m) == RF_OK);
  char* cert = NULL;
  EXPECT(rf_model_certify(m, &o, &cert, NULL) == RF_ERR_INVALID_ARGUMENT);
  rf_model_free(m);

  EXPECT(rf_model_degree(NULL) == -1);
  rf_model_free(NULL);
  rf_free_string(NULL);
  EXPECT(strcmp(rf_status_string(RF_ERR_CERTIFICATION), "certification error") == 0);
  EXPECT(strlen(rf_version()) > 0);
}

static void test_precision_sources(void) {
  rf_options o = quick();
  rf_model* m = NULL;
  EXPECT(rf_synthesize("{\"vertices\": 3, \"multiplicities\": [2, 2, 2], \"precision_bits\": 192}", &o, &m) == RF_OK);
  EXPECT(rf_model_precision(m) == 192);
  rf_model_free(m);
  o.precision_bits = 256;
  EXPECT(rf_synthesize("{\"vertices\": 3, \"multiplicities\": [2, 2, 2], \"precision_bits\": 192}", &o, &m) == RF_OK);
  EXPECT(rf_model_precision(m) == 256);
  rf_model_free(m);
}

static void test_handles(void) {
  rf_options o = quick();
  rf_model* m = NULL;
  EXPECT(rf_synthesize(khandle, &o, &m) == RF_OK);
  EXPECT(rf_model_degree(m) == 10);
  EXPECT(rf_model_variables(m) == 6);
  char* reeb = NULL;
  EXPECT(rf_model_render(m, RF_REEB_JSON, &reeb) == RF_OK);
  EXPECT(reeb && strstr(reeb, "S^1xS^3"));
  rf_free_string(reeb);
  rf_model_free(m);
}

static void test_check_graph(void) {
  char* report = NULL;
  int passed = -1;
  EXPECT(rf_check_graph("{\"vertices\": [{\"angle\": \"1/4\"}, {\"angle\": \"1/2\"}], \"edges\": [{\"from\": 0, \"to\": 1}]}",
                        &report, &passed) == RF_OK);
  EXPECT(passed == 1);
  rf_free_string(report);
  report = NULL;
  EXPECT(rf_check_graph("{\"vertices\": [{\"angle\": \"1/4\"}, {\"angle\": \"1/4\"}], \"edges\": [{\"from\": 0, \"to\": 1}]}",
                        &report, &passed) == RF_OK);
  EXPECT(passed == 0);
  rf_free_string(report);
  EXPECT(rf_check_graph("{\"vertices\": 3}", &report, &passed) == RF_ERR_PARSE);
}

int main(void) {
  test_validate();
  test_synthesize();
  test_errors();
  test_precision_sources();
  test_handles();
  test_check_graph();
  if (failures) {
    fprintf(stderr, "%d failure(s)\n", failures);
    return 1;
  }
  printf("capi: all checks passed\n");
  return 0;
}
