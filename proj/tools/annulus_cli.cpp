// Command-line front end. Talks to the library only through annulus.h.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "annulus.h"
#include "json.hpp"

namespace {

constexpr int kExitFailedCertificate = 1;
constexpr int kExitError = 2;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(annulus_status st, const char* what) {
  if (st != ANNULUS_OK)
    throw Failure(std::string(what) + ": " + annulus_status_name(st) + ": " + annulus_last_error());
}

// Owns a string returned by the library.
std::string take(char* s) {
  std::string out(s ? s : "");
  annulus_string_free(s);
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& out_dir, const std::string& file, const std::string& text) {
  if (out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::filesystem::create_directories(out_dir);
  const auto path = std::filesystem::path(out_dir) / file;
  std::ofstream o(path, std::ios::binary);
  if (!o) throw Failure("cannot write " + path.string());
  o << text;
  std::cerr << "wrote " << path.string() << '\n';
}

struct FieldSource {
  std::string file;
  std::string builtin = "compact_height";
  std::string chart = "unit_area";
  std::vector<std::size_t> grid{512, 512};
  double scale = 1.0;

  void attach(CLI::App* app) {
    app->add_option("--field", file, "field JSON file (see docs/formats.md)");
    app->add_option("--builtin", builtin, "built-in field: height, compact_height, psi, lamination")
        ->capture_default_str();
    app->add_option("--chart", chart, "chart for --builtin: unit_area or wide_strip")->capture_default_str();
    app->add_option("--grid", grid, "ntheta ns for --builtin")->expected(2)->capture_default_str();
    app->add_option("--scale", scale, "multiply the field by this factor")->capture_default_str();
  }

  annulus_field* load() const {
    annulus_field* f = nullptr;
    if (!file.empty()) {
      check(annulus_field_load(file.c_str(), &f), "load field");
      if (scale != 1.0) {
        annulus_field* g = nullptr;
        const annulus_status st = annulus_field_scaled(f, scale, &g);
        annulus_field_free(f);
        check(st, "scale field");
        f = g;
      }
      return f;
    }
    check(annulus_field_builtin(builtin.c_str(), chart.c_str(), grid[0], grid[1], scale, &f), "builtin field");
    return f;
  }
};

std::string map_text(const std::string& arg) {
  // Accept inline JSON or a path.
  const auto first = arg.find_first_not_of(" \t\n");
  if (first != std::string::npos && arg[first] == '{') return arg;
  return slurp(arg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Annulus dynamics toolkit: Reeb trees, Calabi values, rotation numbers, fixed-point certificates"};
  app.require_subcommand(1);

  // reeb
  FieldSource reeb_src;
  std::string reeb_format = "json", reeb_out;
  auto* reeb = app.add_subcommand("reeb", "build the measured Reeb tree of a field");
  reeb_src.attach(reeb);
  reeb->add_option("--format", reeb_format, "json or dot")->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
  reeb->add_option("--out", reeb_out, "output directory (stdout when omitted)");

  // calabi
  FieldSource cal_src;
  std::vector<double> cal_caps;
  auto* cal = app.add_subcommand("calabi", "Calabi value of the time-1 map of a field");
  cal_src.attach(cal);
  cal->add_option("--caps", cal_caps, "cap areas a b; also prints the capped-sphere value")->expected(2);

  // percentile
  FieldSource pct_src;
  double pct_h = 0.5, pct_tol = 1e-3;
  std::vector<double> pct_caps;
  auto* pct = app.add_subcommand("percentile", "h-percentile of a field's tree and the r value for caps (1, 2h)");
  pct->set_help_flag("--help", "Print this help message and exit");
  pct_src.attach(pct);
  pct->add_option("--h", pct_h, "percentile in [0, 1]")->capture_default_str();
  pct->add_option("--caps", pct_caps, "explicit cap areas a b instead of (1, 2h)")->expected(2);
  pct->add_option("--tol", pct_tol, "relative cross-check tolerance")->capture_default_str();

  // rotation
  std::string rot_map;
  double rot_theta = 0.0, rot_s = 0.5;
  int rot_n = 100;
  auto* rot = app.add_subcommand("rotation", "rotation number of a point under a map");
  rot->add_option("--map", rot_map, "map descriptor: JSON file or inline JSON")->required();
  rot->add_option("--theta", rot_theta)->capture_default_str();
  rot->add_option("--s", rot_s)->capture_default_str();
  rot->add_option("--iterates", rot_n)->capture_default_str();

  // winding
  std::string win_map;
  std::vector<double> win_center{0.0, 0.0};
  double win_radius = 0.5, win_tol = 1e-8;
  std::size_t win_samples = 1000;
  bool win_fixed = false;
  auto* win = app.add_subcommand("winding", "winding number of p -> map(p) - p on a circle");
  win->add_option("--map", win_map, "map descriptor: JSON file or inline JSON")->required();
  win->add_option("--center", win_center, "theta s")->expected(2)->capture_default_str();
  win->add_option("--radius", win_radius)->capture_default_str();
  win->add_option("--samples", win_samples)->capture_default_str();
  win->add_flag("--fixed-point", win_fixed, "also run the quadtree fixed-point certificate");
  win->add_option("--tol", win_tol, "fixed-point residual tolerance")->capture_default_str();

  // scenario
  std::string sc_name, sc_config, sc_out, sc_format;
  std::optional<int> sc_T, sc_tau;
  std::vector<std::size_t> sc_grid;
  std::optional<double> sc_tol;
  std::optional<std::uint64_t> sc_seed;
  auto* sc = app.add_subcommand("scenario", "run every certificate of a construction");
  sc->add_option("name", sc_name, "annulus or surface; defaults to the config's \"scenario\"")->check(CLI::IsMember({"annulus", "surface"}));
  sc->add_option("--config", sc_config, "JSON config file; flags override it");
  sc->add_option("--T", sc_T, "full turns of the rotation factor");
  sc->add_option("--tau", sc_tau, "time of the disk flow");
  sc->add_option("--grid", sc_grid, "ntheta ns")->expected(2);
  sc->add_option("--tol", sc_tol, "base relative tolerance");
  sc->add_option("--out", sc_out, "output directory (stdout when omitted)");
  sc->add_option("--format", sc_format, "json, csv, plotdata or dot")
      ->check(CLI::IsMember({"json", "csv", "plotdata", "dot"}));
  sc->add_option("--seed", sc_seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*reeb) {
      annulus_field* f = reeb_src.load();
      annulus_tree* t = nullptr;
      const annulus_status st = annulus_tree_build(f, &t);
      annulus_field_free(f);
      check(st, "build tree");
      char* s = nullptr;
      const annulus_status st2 = reeb_format == "dot" ? annulus_tree_to_dot(t, &s) : annulus_tree_to_json(t, &s);
      annulus_tree_free(t);
      check(st2, "serialize tree");
      write_output(reeb_out, reeb_format == "dot" ? "tree.dot" : "tree.json", take(s));
      return 0;
    }
    if (*cal) {
      annulus_field* f = cal_src.load();
      nlohmann::json out;
      double v = 0.0;
      annulus_status st = annulus_calabi(f, &v);
      if (st == ANNULUS_OK) out["calabi"] = v;
      if (st == ANNULUS_OK && cal_caps.size() == 2) {
        double w = 0.0;
        st = annulus_calabi_sphere(f, cal_caps[0], cal_caps[1], &w);
        out["caps"] = cal_caps;
        out["calabi_sphere"] = w;
      }
      annulus_field_free(f);
      check(st, "calabi");
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*pct) {
      annulus_field* f = pct_src.load();
      annulus_tree* t = nullptr;
      annulus_status st = annulus_tree_build(f, &t);
      nlohmann::json out;
      if (st == ANNULUS_OK) {
        annulus_percentile p{};
        st = annulus_tree_percentile(t, pct_h, &p);
        out["h"] = pct_h;
        out["percentile"] = p.present ? nlohmann::json(p.value) : nlohmann::json(nullptr);
        out["at_attachment"] = static_cast<bool>(p.at_attachment);
        if (p.gap_present) out["gap"] = {{"h_start", p.gap_start}, {"h_end", p.gap_end}, {"measure", p.gap_measure}};
      }
      if (st == ANNULUS_OK) {
        const double a = pct_caps.size() == 2 ? pct_caps[0] : 1.0;
        const double b = pct_caps.size() == 2 ? pct_caps[1] : 2.0 * pct_h;
        annulus_rab r{};
        st = annulus_r_ab(f, t, a, b, pct_tol, &r);
        out["caps"] = {a, b};
        out["r_ab"] = r.value;
        out["caps_percentile"] = r.h;
      }
      annulus_tree_free(t);
      annulus_field_free(f);
      check(st, "percentile");
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*rot) {
      annulus_map* m = nullptr;
      check(annulus_map_from_json(map_text(rot_map).c_str(), &m), "map");
      double r = 0.0;
      const annulus_status st = annulus_rotation_number(m, rot_theta, rot_s, rot_n, &r);
      annulus_map_free(m);
      check(st, "rotation number");
      std::cout << nlohmann::json{{"rotation_number", r}, {"iterates", rot_n}}.dump(2) << '\n';
      return 0;
    }
    if (*win) {
      annulus_map* m = nullptr;
      check(annulus_map_from_json(map_text(win_map).c_str(), &m), "map");
      int w = 0;
      annulus_status st = annulus_winding_number(m, win_center[0], win_center[1], win_radius, win_samples, &w);
      nlohmann::json out;
      if (st == ANNULUS_OK) out["winding"] = w;
      if (st == ANNULUS_OK && win_fixed) {
        char* cert = nullptr;
        st = annulus_fixed_point(m, win_center[0], win_center[1], win_radius, win_tol, &cert);
        if (st == ANNULUS_OK) out["fixed_point"] = nlohmann::json::parse(take(cert));
      }
      annulus_map_free(m);
      check(st, "winding");
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*sc) {
      nlohmann::json cfg = sc_config.empty() ? nlohmann::json::object() : nlohmann::json::parse(slurp(sc_config));
      if (!sc_name.empty()) cfg["scenario"] = sc_name;
      if (sc_T) cfg["T"] = *sc_T;
      if (sc_tau) cfg["tau"] = *sc_tau;
      if (sc_grid.size() == 2) cfg["grid"] = sc_grid;
      if (sc_tol) cfg["tol"] = *sc_tol;
      if (!sc_out.empty()) cfg["out"] = sc_out;
      if (!sc_format.empty()) cfg["format"] = sc_format;
      if (sc_seed) cfg["seed"] = *sc_seed;
      const std::string format = cfg.value("format", std::string("json"));
      const std::string out_dir = cfg.value("out", std::string());

      annulus_result* res = nullptr;
      check(annulus_scenario_run(cfg.dump().c_str(), &res), "scenario");
      char* text = nullptr;
      char* fname = nullptr;
      char* table = nullptr;
      annulus_status st = annulus_result_emit(res, format.c_str(), &text);
      if (st == ANNULUS_OK) st = annulus_output_file_name(format.c_str(), &fname);
      if (st == ANNULUS_OK) st = annulus_result_emit(res, "json", &table);
      std::size_t total = 0, failures = 0;
      annulus_result_counts(res, &total, &failures);
      annulus_result_free(res);
      check(st, "emit");
      write_output(out_dir, take(fname), take(text));

      // Pass/fail table: stdout when the payload went to a file, stderr otherwise.
      std::ostream& tab = out_dir.empty() ? std::cerr : std::cout;
      for (const auto& c : nlohmann::json::parse(take(table))) {
        std::string verdict = c["verdict"].get<std::string>();
        for (auto& ch : verdict) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        tab << verdict << "  " << c["quantity"].get<std::string>() << '\n';
      }
      tab << (failures == 0 ? "ALL PASS" : "FAILURES") << ": " << total - failures << "/" << total << '\n';
      return failures == 0 ? 0 : kExitFailedCertificate;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
