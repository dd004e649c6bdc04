#include "annulus/calabi.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "annulus/errors.hpp"

namespace annulus {

double calabi(const ScalarField& F) {
  if (!F.boundary_rows_zero()) throw PreconditionError("calabi: F must vanish on the boundary rows");
  return integrate(F);
}

double calabi_sphere_autonomous(const ScalarField& F, const CapSpec& caps) {
  return calabi_sphere_autonomous(F, build_reeb_tree(F), caps);
}

double calabi_sphere_autonomous(const ScalarField& F, const ReebTree& tree, const CapSpec& caps) {
  if (!F.boundary_rows_zero())
    throw PreconditionError("calabi sphere: F must vanish on the boundary rows to extend by zero");
  const ReebTree capped = tree.with_caps(caps.a, caps.b);
  const TreeLocation m = median(capped);
  return integrate(F) - caps.sphere_area(F.chart().total_area()) * m.value;
}

RabResult r_ab_autonomous(const ScalarField& F, const CapSpec& caps, double tolerance) {
  return r_ab_autonomous(F, build_reeb_tree(F), caps, tolerance);
}

RabResult r_ab_autonomous(const ScalarField& F, const ReebTree& tree, const CapSpec& caps, double tolerance) {
  const double area = F.chart().total_area();
  const double sphere = caps.sphere_area(area);
  RabResult out;
  out.h = caps.percentile(area);
  if (!(out.h >= -1e-12 && out.h <= 1.0 + 1e-12))
    throw PreconditionError("r_ab: caps must satisfy |b - a| <= annulus area");
  out.h = std::clamp(out.h, 0.0, 1.0);

  const double cal = calabi(F);
  const ReebTree capped = tree.with_caps(caps.a, caps.b);
  out.median_value = median(capped).value;
  const double cal_sphere = cal - sphere * out.median_value;
  out.value = (cal - cal_sphere) / sphere;

  const PercentileResult p = percentile(tree, out.h);
  out.at_attachment = p.at_attachment;
  if (p.location) {
    out.percentile_value = p.location->value;
    const double scale = std::max(std::abs(F.min()), std::abs(F.max()));
    if (std::abs(*out.percentile_value - out.value) > tolerance * std::max(scale, 1e-300) && !p.at_attachment)
      throw ConvergenceError("r_ab: median and percentile evaluations disagree");
  } else {
    out.gap = p.gap;
  }
  return out;
}

double r_ab_sum_commuting(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0);
}

double r_ab_sum_commuting(const std::vector<RabResult>& values) {
  double sum = 0.0;
  for (const auto& v : values) sum += v.value;
  return sum;
}

}  // namespace annulus
