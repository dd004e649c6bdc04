#ifndef ANNULUS_H
#define ANNULUS_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ANNULUS_API __declspec(dllexport)
#else
#define ANNULUS_API __attribute__((visibility("default")))
#endif

typedef enum annulus_status {
  ANNULUS_OK = 0,
  ANNULUS_ERR_NULL = 1,         /* a required pointer argument was NULL */
  ANNULUS_ERR_PRECONDITION = 2, /* inputs violate the operation's contract */
  ANNULUS_ERR_DOMAIN = 3,       /* point outside the chart, or a map left its domain */
  ANNULUS_ERR_INTEGRATION = 4,  /* an integrated orbit left the chart interior */
  ANNULUS_ERR_CONVERGENCE = 5,  /* refinement or a consistency check failed */
  ANNULUS_ERR_PARSE = 6,        /* malformed JSON or descriptor */
  ANNULUS_ERR_IO = 7,
  ANNULUS_ERR_INTERNAL = 99
} annulus_status;

typedef struct annulus_field annulus_field;
typedef struct annulus_tree annulus_tree;
typedef struct annulus_map annulus_map;
typedef struct annulus_result annulus_result;

/* Message of the last failing call on this thread; empty after a success. */
ANNULUS_API const char* annulus_last_error(void);
ANNULUS_API const char* annulus_status_name(annulus_status status);
ANNULUS_API const char* annulus_version(void);
/* Releases strings returned through char** out-parameters. */
ANNULUS_API void annulus_string_free(char* s);

/* ---- fields ---- */

/* chart: "unit_area" or "wide_strip". values are s-rows: values[j * ntheta + i]. */
ANNULUS_API annulus_status annulus_field_from_values(const char* chart, size_t ntheta, size_t ns,
                                                     const double* values, annulus_field** out);
/* Built-in fields sampled on the named chart, multiplied by scale:
   "height", "compact_height", "psi" (unit_area only), "lamination" (wide_strip only). */
ANNULUS_API annulus_status annulus_field_builtin(const char* name, const char* chart, size_t ntheta, size_t ns,
                                                 double scale, annulus_field** out);
ANNULUS_API annulus_status annulus_field_from_json(const char* text, annulus_field** out);
ANNULUS_API annulus_status annulus_field_load(const char* path, annulus_field** out);
ANNULUS_API annulus_status annulus_field_to_json(const annulus_field* field, char** out);
ANNULUS_API annulus_status annulus_field_save(const annulus_field* field, const char* path);
ANNULUS_API annulus_status annulus_field_shape(const annulus_field* field, size_t* ntheta, size_t* ns);
ANNULUS_API annulus_status annulus_field_scaled(const annulus_field* field, double factor, annulus_field** out);
ANNULUS_API annulus_status annulus_field_eval(const annulus_field* field, double theta, double s, double* out);
ANNULUS_API annulus_status annulus_field_integrate(const annulus_field* field, double* out);
ANNULUS_API void annulus_field_free(annulus_field* field);

/* ---- Calabi values ---- */

ANNULUS_API annulus_status annulus_calabi(const annulus_field* field, double* out);
ANNULUS_API annulus_status annulus_calabi_sphere(const annulus_field* field, double cap_a, double cap_b, double* out);

typedef struct annulus_rab {
  double value;           /* normalized Calabi difference, always set */
  double h;               /* percentile picked by the caps */
  double median_value;    /* field at the median of the capped tree */
  int percentile_present; /* 1 when the h-percentile exists */
  double percentile_value;
  int gap_present; /* 1 when h falls in a gap; the gap fields are then set */
  double gap_start;
  double gap_end;
  double gap_measure;
  int at_attachment; /* h on a gap boundary; the stem-side limit was used */
} annulus_rab;

/* tree may be NULL, in which case it is built from the field. */
ANNULUS_API annulus_status annulus_r_ab(const annulus_field* field, const annulus_tree* tree, double cap_a,
                                        double cap_b, double tol, annulus_rab* out);

/* ---- Reeb trees ---- */

typedef struct annulus_percentile {
  int present;
  double value;
  int at_attachment;
  int gap_present;
  double gap_start;
  double gap_end;
  double gap_measure;
} annulus_percentile;

ANNULUS_API annulus_status annulus_tree_build(const annulus_field* field, annulus_tree** out);
/* One node at stem position attach with a branch leaf of the given measure; total measure 1. */
ANNULUS_API annulus_status annulus_tree_synthetic(double attach, double branch, annulus_tree** out);
ANNULUS_API annulus_status annulus_tree_counts(const annulus_tree* tree, size_t* nodes, size_t* arcs);
ANNULUS_API annulus_status annulus_tree_total_measure(const annulus_tree* tree, double* out);
ANNULUS_API annulus_status annulus_tree_median(const annulus_tree* tree, double* value);
ANNULUS_API annulus_status annulus_tree_percentile(const annulus_tree* tree, double h, annulus_percentile* out);
ANNULUS_API annulus_status annulus_tree_to_json(const annulus_tree* tree, char** out);
ANNULUS_API annulus_status annulus_tree_to_dot(const annulus_tree* tree, char** out);
ANNULUS_API void annulus_tree_free(annulus_tree* tree);

/* ---- maps and dynamics ---- */

ANNULUS_API annulus_status annulus_map_from_json(const char* descriptor, annulus_map** out);
ANNULUS_API annulus_status annulus_map_descriptor(const annulus_map* map, char** out);
ANNULUS_API annulus_status annulus_map_compose(const annulus_map* f, const annulus_map* g, annulus_map** out);
ANNULUS_API annulus_status annulus_map_iterate(const annulus_map* f, int n, annulus_map** out);
ANNULUS_API annulus_status annulus_map_apply(const annulus_map* map, double theta, double s, double* theta_out,
                                             double* s_out, double* lift_out);
ANNULUS_API void annulus_map_free(annulus_map* map);

ANNULUS_API annulus_status annulus_rotation_number(const annulus_map* map, double theta, double s, int iterates,
                                                   double* out);
ANNULUS_API annulus_status annulus_winding_number(const annulus_map* map, double center_theta, double center_s,
                                                  double radius, size_t samples, int* out);
ANNULUS_API annulus_status annulus_displaces(const annulus_map* map, double center_theta, double center_s,
                                             double radius, size_t samples, int* displaced, double* min_distance);
/* Certificate as JSON text. */
ANNULUS_API annulus_status annulus_fixed_point(const annulus_map* map, double center_theta, double center_s,
                                               double radius, double tol, char** certificate_json);

/* ---- scenarios ---- */

/* config_json: see docs/formats.md; missing keys take defaults. */
ANNULUS_API annulus_status annulus_scenario_run(const char* config_json, annulus_result** out);
/* format: "json", "csv", "plotdata" or "dot". */
ANNULUS_API annulus_status annulus_result_emit(const annulus_result* result, const char* format, char** out);
ANNULUS_API annulus_status annulus_result_counts(const annulus_result* result, size_t* total, size_t* failures);
ANNULUS_API annulus_status annulus_output_file_name(const char* format, char** out);
ANNULUS_API void annulus_result_free(annulus_result* result);

#ifdef __cplusplus
}
#endif

#endif
