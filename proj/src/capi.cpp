#include "annulus.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "annulus/calabi.hpp"
#include "annulus/dynamics.hpp"
#include "annulus/errors.hpp"
#include "annulus/fields.hpp"
#include "annulus/flows.hpp"
#include "annulus/reeb.hpp"
#include "annulus/scenario.hpp"
#include "json.hpp"

struct annulus_field {
  annulus::ScalarField field;
};
struct annulus_tree {
  annulus::ReebTree tree;
};
struct annulus_map {
  annulus::SurfaceMap map;
};
struct annulus_result {
  annulus::ScenarioResult result;
};

namespace {

thread_local std::string last_error;

class NullArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

template <class Fn>
annulus_status guarded(Fn&& fn) {
  try {
    fn();
    last_error.clear();
    return ANNULUS_OK;
  } catch (const NullArgument& e) {
    last_error = e.what();
    return ANNULUS_ERR_NULL;
  } catch (const annulus::PreconditionError& e) {
    last_error = e.what();
    return ANNULUS_ERR_PRECONDITION;
  } catch (const annulus::DomainError& e) {
    last_error = e.what();
    return ANNULUS_ERR_DOMAIN;
  } catch (const annulus::IntegrationError& e) {
    last_error = std::string(e.what()) + " at (" + std::to_string(e.theta()) + ", " + std::to_string(e.s()) + ")";
    return ANNULUS_ERR_INTEGRATION;
  } catch (const annulus::ConvergenceError& e) {
    last_error = e.what();
    return ANNULUS_ERR_CONVERGENCE;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return ANNULUS_ERR_PARSE;
  } catch (const IoError& e) {
    last_error = e.what();
    return ANNULUS_ERR_IO;
  } catch (const std::exception& e) {
    last_error = e.what();
    return ANNULUS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return ANNULUS_ERR_INTERNAL;
  }
}

template <class T>
void require(const T* p, const char* what) {
  if (p == nullptr) throw NullArgument(std::string(what) + " is NULL");
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

annulus::AnnulusChart chart_named(const char* name) {
  require(name, "chart");
  const std::string n(name);
  if (n == "unit_area") return annulus::AnnulusChart::unit_area();
  if (n == "wide_strip") return annulus::AnnulusChart::wide_strip();
  throw annulus::PreconditionError("unknown chart \"" + n + "\" (expected unit_area or wide_strip)");
}

std::string read_file(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(std::string("cannot open ") + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

extern "C" {

const char* annulus_last_error(void) { return last_error.c_str(); }

const char* annulus_status_name(annulus_status status) {
  switch (status) {
    case ANNULUS_OK: return "ok";
    case ANNULUS_ERR_NULL: return "null argument";
    case ANNULUS_ERR_PRECONDITION: return "precondition violated";
    case ANNULUS_ERR_DOMAIN: return "domain error";
    case ANNULUS_ERR_INTEGRATION: return "integration error";
    case ANNULUS_ERR_CONVERGENCE: return "convergence error";
    case ANNULUS_ERR_PARSE: return "parse error";
    case ANNULUS_ERR_IO: return "i/o error";
    case ANNULUS_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* annulus_version(void) { return "1.0.0"; }

void annulus_string_free(char* s) { std::free(s); }

annulus_status annulus_field_from_values(const char* chart, size_t ntheta, size_t ns, const double* values,
                                         annulus_field** out) {
  return guarded([&] {
    require(values, "values");
    require(out, "out");
    std::vector<double> v(values, values + ntheta * ns);
    *out = new annulus_field{annulus::ScalarField(chart_named(chart), ntheta, ns, std::move(v))};
  });
}

annulus_status annulus_field_builtin(const char* name, const char* chart, size_t ntheta, size_t ns, double scale,
                                     annulus_field** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    const annulus::AnnulusChart c = chart_named(chart);
    const std::string n(name);
    annulus::ScalarField f;
    if (n == "height") {
      f = annulus::height_field(c, ntheta, ns);
    } else if (n == "compact_height") {
      f = annulus::compact_height_field(c, ntheta, ns);
    } else if (n == "psi") {
      if (!(c == annulus::AnnulusChart::unit_area())) throw annulus::PreconditionError("psi lives on unit_area");
      const annulus::RegionBump bump = annulus::region_bump(c);
      f = annulus::bump_field(c, ntheta, ns, bump.support, bump.generator);
    } else if (n == "lamination") {
      if (!(c == annulus::AnnulusChart::wide_strip()))
        throw annulus::PreconditionError("lamination lives on wide_strip");
      f = annulus::lamination_field(c, ntheta, ns, {{0.0, 0.0}, 1.0});
    } else {
      throw annulus::PreconditionError("unknown field \"" + n + "\"");
    }
    *out = new annulus_field{f.scaled(scale)};
  });
}

annulus_status annulus_field_from_json(const char* text, annulus_field** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new annulus_field{annulus::field_from_json(text)};
  });
}

annulus_status annulus_field_load(const char* path, annulus_field** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new annulus_field{annulus::field_from_json(read_file(path))};
  });
}

annulus_status annulus_field_to_json(const annulus_field* field, char** out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = copy_string(annulus::field_to_json(field->field));
  });
}

annulus_status annulus_field_save(const annulus_field* field, const char* path) {
  return guarded([&] {
    require(field, "field");
    require(path, "path");
    std::ofstream o(path, std::ios::binary);
    if (!o) throw IoError(std::string("cannot write ") + path);
    o << annulus::field_to_json(field->field);
    if (!o) throw IoError(std::string("write failed: ") + path);
  });
}

annulus_status annulus_field_shape(const annulus_field* field, size_t* ntheta, size_t* ns) {
  return guarded([&] {
    require(field, "field");
    require(ntheta, "ntheta");
    require(ns, "ns");
    *ntheta = field->field.ntheta();
    *ns = field->field.ns();
  });
}

annulus_status annulus_field_scaled(const annulus_field* field, double factor, annulus_field** out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = new annulus_field{field->field.scaled(factor)};
  });
}

annulus_status annulus_field_eval(const annulus_field* field, double theta, double s, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = field->field.eval({theta, s});
  });
}

annulus_status annulus_field_integrate(const annulus_field* field, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = annulus::integrate(field->field);
  });
}

void annulus_field_free(annulus_field* field) { delete field; }

annulus_status annulus_calabi(const annulus_field* field, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = annulus::calabi(field->field);
  });
}

annulus_status annulus_calabi_sphere(const annulus_field* field, double cap_a, double cap_b, double* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = annulus::calabi_sphere_autonomous(field->field, annulus::CapSpec{cap_a, cap_b});
  });
}

annulus_status annulus_r_ab(const annulus_field* field, const annulus_tree* tree, double cap_a, double cap_b,
                            double tol, annulus_rab* out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    const annulus::CapSpec caps{cap_a, cap_b};
    const annulus::RabResult r = tree ? annulus::r_ab_autonomous(field->field, tree->tree, caps, tol)
                                      : annulus::r_ab_autonomous(field->field, caps, tol);
    annulus_rab o{};
    o.value = r.value;
    o.h = r.h;
    o.median_value = r.median_value;
    o.percentile_present = r.percentile_value.has_value();
    o.percentile_value = r.percentile_value.value_or(0.0);
    o.gap_present = r.gap.has_value();
    if (r.gap) {
      o.gap_start = r.gap->h_start;
      o.gap_end = r.gap->h_end;
      o.gap_measure = r.gap->measure;
    }
    o.at_attachment = r.at_attachment;
    *out = o;
  });
}

annulus_status annulus_tree_build(const annulus_field* field, annulus_tree** out) {
  return guarded([&] {
    require(field, "field");
    require(out, "out");
    *out = new annulus_tree{annulus::build_reeb_tree(field->field)};
  });
}

annulus_status annulus_tree_synthetic(double attach, double branch, annulus_tree** out) {
  return guarded([&] {
    require(out, "out");
    *out = new annulus_tree{annulus::synthetic_branch_tree(attach, branch, attach, 1.0, attach + 1.0)};
  });
}

annulus_status annulus_tree_counts(const annulus_tree* tree, size_t* nodes, size_t* arcs) {
  return guarded([&] {
    require(tree, "tree");
    require(nodes, "nodes");
    require(arcs, "arcs");
    *nodes = tree->tree.nodes().size();
    *arcs = tree->tree.arcs().size();
  });
}

annulus_status annulus_tree_total_measure(const annulus_tree* tree, double* out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = tree->tree.total_measure();
  });
}

annulus_status annulus_tree_median(const annulus_tree* tree, double* value) {
  return guarded([&] {
    require(tree, "tree");
    require(value, "value");
    *value = annulus::median(tree->tree).value;
  });
}

annulus_status annulus_tree_percentile(const annulus_tree* tree, double h, annulus_percentile* out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    const annulus::PercentileResult p = annulus::percentile(tree->tree, h);
    annulus_percentile o{};
    o.present = p.location.has_value();
    if (p.location) o.value = p.location->value;
    o.at_attachment = p.at_attachment;
    o.gap_present = p.gap.has_value();
    if (p.gap) {
      o.gap_start = p.gap->h_start;
      o.gap_end = p.gap->h_end;
      o.gap_measure = p.gap->measure;
    }
    *out = o;
  });
}

annulus_status annulus_tree_to_json(const annulus_tree* tree, char** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = copy_string(annulus::tree_to_json(tree->tree));
  });
}

annulus_status annulus_tree_to_dot(const annulus_tree* tree, char** out) {
  return guarded([&] {
    require(tree, "tree");
    require(out, "out");
    *out = copy_string(annulus::tree_to_dot(tree->tree));
  });
}

void annulus_tree_free(annulus_tree* tree) { delete tree; }

annulus_status annulus_map_from_json(const char* descriptor, annulus_map** out) {
  return guarded([&] {
    require(descriptor, "descriptor");
    require(out, "out");
    *out = new annulus_map{annulus::map_from_descriptor(nlohmann::json::parse(descriptor))};
  });
}

annulus_status annulus_map_descriptor(const annulus_map* map, char** out) {
  return guarded([&] {
    require(map, "map");
    require(out, "out");
    *out = copy_string(map->map.descriptor().dump());
  });
}

annulus_status annulus_map_compose(const annulus_map* f, const annulus_map* g, annulus_map** out) {
  return guarded([&] {
    require(f, "f");
    require(g, "g");
    require(out, "out");
    *out = new annulus_map{annulus::compose(f->map, g->map)};
  });
}

annulus_status annulus_map_iterate(const annulus_map* f, int n, annulus_map** out) {
  return guarded([&] {
    require(f, "f");
    require(out, "out");
    *out = new annulus_map{annulus::iterate(f->map, n)};
  });
}

annulus_status annulus_map_apply(const annulus_map* map, double theta, double s, double* theta_out, double* s_out,
                                 double* lift_out) {
  return guarded([&] {
    require(map, "map");
    const annulus::MapImage img = map->map.apply({theta, s});
    if (theta_out) *theta_out = img.point.theta;
    if (s_out) *s_out = img.point.s;
    if (lift_out) *lift_out = img.lift;
  });
}

void annulus_map_free(annulus_map* map) { delete map; }

annulus_status annulus_rotation_number(const annulus_map* map, double theta, double s, int iterates, double* out) {
  return guarded([&] {
    require(map, "map");
    require(out, "out");
    *out = annulus::rotation_number(map->map, {theta, s}, iterates);
  });
}

annulus_status annulus_winding_number(const annulus_map* map, double center_theta, double center_s, double radius,
                                      size_t samples, int* out) {
  return guarded([&] {
    require(map, "map");
    require(out, "out");
    *out = annulus::winding_number(map->map, {{center_theta, center_s}, radius}, samples);
  });
}

annulus_status annulus_displaces(const annulus_map* map, double center_theta, double center_s, double radius,
                                 size_t samples, int* displaced, double* min_distance) {
  return guarded([&] {
    require(map, "map");
    const annulus::Displacement d = annulus::displaces(map->map, {{center_theta, center_s}, radius}, samples);
    if (displaced) *displaced = d.displaced;
    if (min_distance) *min_distance = d.min_distance;
  });
}

annulus_status annulus_fixed_point(const annulus_map* map, double center_theta, double center_s, double radius,
                                   double tol, char** certificate_json) {
  return guarded([&] {
    require(map, "map");
    require(certificate_json, "certificate_json");
    const annulus::Certificate c =
        annulus::fixed_point_certificate(map->map, {{center_theta, center_s}, radius}, tol);
    *certificate_json = copy_string(c.to_json().dump());
  });
}

annulus_status annulus_scenario_run(const char* config_json, annulus_result** out) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out, "out");
    const auto cfg = annulus::ScenarioConfig::from_json(nlohmann::json::parse(config_json));
    *out = new annulus_result{annulus::run_scenario(cfg)};
  });
}

annulus_status annulus_result_emit(const annulus_result* result, const char* format, char** out) {
  return guarded([&] {
    require(result, "result");
    require(format, "format");
    require(out, "out");
    *out = copy_string(annulus::emit(result->result, format));
  });
}

annulus_status annulus_result_counts(const annulus_result* result, size_t* total, size_t* failures) {
  return guarded([&] {
    require(result, "result");
    if (total) *total = result->result.certificates.size();
    if (failures) *failures = result->result.failures();
  });
}

annulus_status annulus_output_file_name(const char* format, char** out) {
  return guarded([&] {
    require(format, "format");
    require(out, "out");
    *out = copy_string(annulus::output_file_name(format));
  });
}

void annulus_result_free(annulus_result* result) { delete result; }

}  // extern "C"
