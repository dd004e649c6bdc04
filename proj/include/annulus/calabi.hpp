#pragma once

#include <optional>
#include <vector>

#include "annulus/reeb.hpp"
#include "annulus/surface.hpp"

namespace annulus {

/// Areas of the disks glued to the bottom (a) and top (b) boundary circles.
struct CapSpec {
  double a = 0.0;
  double b = 0.0;

  /// Caps (1, 2h), which put the h-percentile at the sphere's median.
  static CapSpec for_percentile(double h) { return {1.0, 2.0 * h}; }

  double sphere_area(double annulus_area) const { return annulus_area + a + b; }
  /// (annulus_area + b - a) / (2 annulus_area); in [0, 1] when |b - a| <= annulus_area.
  double percentile(double annulus_area) const { return 0.5 * (annulus_area + b - a) / annulus_area; }
};

/// Calabi value of the time-1 map of an autonomous F supported in the interior.
/// Throws PreconditionError if a boundary row is nonzero.
double calabi(const ScalarField& F);

/// Integral of F minus sphere area times F at the median of the capped tree.
double calabi_sphere_autonomous(const ScalarField& F, const CapSpec& caps);
/// Same, reusing a tree already built from F.
double calabi_sphere_autonomous(const ScalarField& F, const ReebTree& tree, const CapSpec& caps);

struct RabResult {
  /// (Cal - Cal_sphere) / sphere area; always defined.
  double value = 0.0;
  /// F at the h-percentile of the uncapped tree, when it exists.
  std::optional<double> percentile_value;
  /// Covering gap when the h-percentile does not exist.
  std::optional<Gap> gap;
  /// h lies on a gap boundary; the stem-side limit was used.
  bool at_attachment = false;
  double h = 0.0;
  double median_value = 0.0;
};

/// Normalized difference between the annulus Calabi value and the pulled-back
/// sphere value. When the h-percentile exists the two routes must agree to
/// `tolerance * sup|F|`, else ConvergenceError.
RabResult r_ab_autonomous(const ScalarField& F, const CapSpec& caps, double tolerance = 1e-3);
RabResult r_ab_autonomous(const ScalarField& F, const ReebTree& tree, const CapSpec& caps,
                          double tolerance = 1e-3);

/// r on a product of pairwise commuting autonomous factors: the sum of the parts.
double r_ab_sum_commuting(const std::vector<double>& values);
double r_ab_sum_commuting(const std::vector<RabResult>& values);

}  // namespace annulus
