/* Exercises the shared library through its C header only. */
#include <math.h>
#include <stdio.h>
#include <string.h>

#include "annulus.h"

static int failures = 0;

#define EXPECT(cond)                                                \
  do {                                                              \
    if (!(cond)) {                                                  \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                   \
    }                                                               \
  } while (0)

#define OK(call) EXPECT((call) == ANNULUS_OK)

static void fields_and_trees(void) {
  annulus_field* k = NULL;
  annulus_field* copy = NULL;
  annulus_tree* tree = NULL;
  char* text = NULL;
  double v = 0.0;
  size_t nt = 0, ns = 0, nodes = 0, arcs = 0;
  annulus_percentile p;

  OK(annulus_field_builtin("compact_height", "unit_area", 128, 128, 3.0, &k));
  OK(annulus_field_shape(k, &nt, &ns));
  EXPECT(nt == 128 && ns == 128);
  OK(annulus_field_eval(k, 1.0, 0.5, &v));
  EXPECT(fabs(v - 1.5) < 1e-12);

  OK(annulus_field_to_json(k, &text));
  OK(annulus_field_from_json(text, &copy));
  annulus_string_free(text);
  OK(annulus_field_eval(copy, 2.0, 0.25, &v));
  EXPECT(fabs(v - 0.75) < 1e-12);

  OK(annulus_tree_build(k, &tree));
  OK(annulus_tree_counts(tree, &nodes, &arcs));
  EXPECT(arcs >= 1);
  OK(annulus_tree_total_measure(tree, &v));
  EXPECT(fabs(v - 1.0) < 1e-9);
  OK(annulus_tree_percentile(tree, 0.37, &p));
  EXPECT(p.present && fabs(p.value - 3 * 0.37) < 1e-3);

  {
    annulus_rab r;
    OK(annulus_r_ab(k, tree, 1.0, 2 * 0.6, 1e-3, &r));
    EXPECT(fabs(r.value - 1.8) < 3e-3);
    EXPECT(r.percentile_present);
  }

  OK(annulus_tree_to_dot(tree, &text));
  EXPECT(strncmp(text, "graph", 5) == 0);
  annulus_string_free(text);

  annulus_tree_free(tree);
  annulus_field_free(copy);
  annulus_field_free(k);
}

static void synthetic_gap(void) {
  annulus_tree* t = NULL;
  annulus_percentile p;
  OK(annulus_tree_synthetic(0.2, 0.6, &t));
  OK(annulus_tree_percentile(t, 0.5, &p));
  EXPECT(!p.present && p.gap_present);
  EXPECT(fabs(p.gap_end - p.gap_start - 0.6) < 1e-9);
  annulus_tree_free(t);
}

static void maps_and_dynamics(void) {
  annulus_map* phi = NULL;
  annulus_map* phi2 = NULL;
  annulus_map* shift = NULL;
  double th = 0, s = 0, lift = 0, rho = 0, dist = 0;
  int displaced = 0, w = 0;
  char* cert = NULL;

  OK(annulus_map_from_json("{\"kind\":\"rotation\",\"chart\":\"wide_strip\",\"t\":3.141592653589793}", &phi));
  OK(annulus_displaces(phi, 0.0, 0.0, 1.0, 10000, &displaced, &dist));
  EXPECT(displaced && dist > 1.14);
  OK(annulus_map_iterate(phi, 2, &phi2));
  OK(annulus_map_apply(phi2, 0.3, 0.5, &th, &s, &lift));
  EXPECT(fabs(th - 0.3) < 1e-12 && fabs(s - 0.5) < 1e-12);
  OK(annulus_rotation_number(phi2, 0.3, 0.5, 4, &rho));
  EXPECT(fabs(rho - 1.0) < 1e-12);

  /* A translation has no fixed point: winding 0 and no conclusion. */
  OK(annulus_map_from_json("{\"kind\":\"translation\",\"chart\":\"wide_strip\",\"dtheta\":0.3,\"ds\":0}", &shift));
  OK(annulus_winding_number(shift, 0.0, 0.0, 0.5, 256, &w));
  EXPECT(w == 0);
  OK(annulus_fixed_point(shift, 0.0, 0.0, 0.5, 1e-8, &cert));
  EXPECT(strstr(cert, "no conclusion") != NULL);
  annulus_string_free(cert);
  annulus_map_free(shift);

  annulus_map_free(phi2);
  annulus_map_free(phi);
}

static void errors(void) {
  annulus_field* f = NULL;
  annulus_map* m = NULL;
  double v = 0;
  EXPECT(annulus_field_builtin("nope", "unit_area", 128, 128, 1.0, &f) == ANNULUS_ERR_PRECONDITION);
  EXPECT(strlen(annulus_last_error()) > 0);
  EXPECT(annulus_field_eval(NULL, 0, 0, &v) == ANNULUS_ERR_NULL);
  EXPECT(annulus_map_from_json("{not json", &m) == ANNULUS_ERR_PARSE);
  OK(annulus_field_builtin("height", "unit_area", 16, 16, 1.0, &f));
  EXPECT(annulus_field_eval(f, 0.0, 2.0, &v) == ANNULUS_ERR_DOMAIN);
  EXPECT(annulus_calabi(f, &v) == ANNULUS_ERR_PRECONDITION);
  OK(annulus_field_eval(f, 0.0, 0.5, &v));
  EXPECT(annulus_last_error()[0] == '\0');
  annulus_field_free(f);
  EXPECT(strcmp(annulus_status_name(ANNULUS_ERR_DOMAIN), "ANNULUS_ERR_DOMAIN") == 0 ||
         strlen(annulus_status_name(ANNULUS_ERR_DOMAIN)) > 0);
}

static void scenario(void) {
  annulus_result* r = NULL;
  size_t total = 0, failed = 1;
  char* out = NULL;
  OK(annulus_scenario_run("{\"scenario\":\"surface\",\"grid\":[128,128]}", &r));
  OK(annulus_result_counts(r, &total, &failed));
  EXPECT(total > 10 && failed == 0);
  OK(annulus_result_emit(r, "csv", &out));
  EXPECT(strncmp(out, "h,r_value,expected,pass", 23) == 0);
  annulus_string_free(out);
  annulus_result_free(r);
  EXPECT(annulus_scenario_run("{\"scenario\":\"annulus\",\"grid\":[64,64]}", &r) == ANNULUS_ERR_PRECONDITION);
}

int main(void) {
  printf("annulus %s\n", annulus_version());
  fields_and_trees();
  synthetic_gap();
  maps_and_dynamics();
  errors();
  scenario();
  if (failures) {
    fprintf(stderr, "%d failed expectations\n", failures);
    return 1;
  }
  printf("all C API checks passed\n");
  return 0;
}
