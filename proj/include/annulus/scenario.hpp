#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "annulus/dynamics.hpp"
#include "annulus/reeb.hpp"
#include "json.hpp"

namespace annulus {

struct ScenarioConfig {
  std::string scenario = "annulus";  // "annulus" or "surface"
  int T = 3;
  int tau = 5;
  std::size_t ntheta = 512;
  std::size_t ns = 512;
  double tol = 1e-3;
  std::string out;  // output directory; empty writes to stdout
  std::string format = "json";
  std::uint64_t seed = 1;
  // Twist angle profile of the surface scenario.
  double alpha_amplitude = 0.5;
  double alpha_inner = 0.5;
  double alpha_outer = 0.9;

  /// Throws PreconditionError on an invalid combination.
  void validate() const;

  /// Missing keys keep their defaults.
  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ScenarioResult {
  std::string scenario;
  std::vector<Certificate> certificates;  // sorted by name
  nlohmann::json plot = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> dots;  // (name, dot text)

  bool all_pass() const;
  std::size_t failures() const;
};

ScenarioResult run_scenario_annulus(const ScenarioConfig& config);
ScenarioResult run_scenario_surface(const ScenarioConfig& config);
/// Dispatches on config.scenario.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Serializes a result: "json", "csv", "plotdata" or "dot".
std::string emit(const ScenarioResult& result, const std::string& format);
/// File name used when writing `format` into an output directory.
std::string output_file_name(const std::string& format);

/// Tree with bottom root, one interior node at stem position `attach`, top root,
/// and a branch leaf of measure `branch` hung at that node. Total measure 1.
/// A zero branch gives a plain stem.
ReebTree synthetic_branch_tree(double attach, double branch, double stem_low, double stem_high,
                               double branch_tip);

/// True when no h in the grid has a percentile off a gap boundary.
bool percentile_absent_on(const ReebTree& tree, const std::vector<double>& hs);

}  // namespace annulus
