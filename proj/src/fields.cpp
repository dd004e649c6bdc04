#include "annulus/fields.hpp"

#include <algorithm>
#include <cmath>

#include "annulus/errors.hpp"

namespace annulus {

ScalarField height_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns) {
  return ScalarField::sample(chart, ntheta, ns, [](const Point& p) { return p.s; });
}

double compact_height(double s, const AnnulusChart& chart, double lo, double hi) {
  const double x = s - chart.s_min;
  const double x_lo = lo - chart.s_min;
  if (x <= 0.0 || s >= chart.s_max) return 0.0;
  if (x < x_lo) {
    // c(x) = A x^2 + B x^3 with c(0) = c'(0) = 0, c(x_lo) = lo, c'(x_lo) = 1
    const double A = (3.0 * lo - x_lo) / (x_lo * x_lo);
    const double B = (x_lo - 2.0 * lo) / (x_lo * x_lo * x_lo);
    return A * x * x + B * x * x * x;
  }
  if (s <= hi) return s;
  return hi * (1.0 - smoothstep((s - hi) / (chart.s_max - hi)));
}

ScalarField compact_height_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns, double lo,
                                 double hi) {
  if (!(chart.s_min < lo && lo < hi && hi < chart.s_max))
    throw PreconditionError("compact height: need s_min < lo < hi < s_max");
  return ScalarField::sample(chart, ntheta, ns,
                             [&](const Point& p) { return compact_height(p.s, chart, lo, hi); });
}

ScalarField bump_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns, const Region& region,
                       const PlateauProfile& generator) {
  return ScalarField::sample(chart, ntheta, ns, [&](const Point& p) {
    const double rho = region.gauge(p);
    return rho >= generator.outer ? 0.0 : generator(rho);
  });
}

RegionBump region_bump(const AnnulusChart& chart, double core_area, double plateau_area, double support_area) {
  if (!(0.0 < core_area && core_area <= plateau_area && plateau_area < support_area))
    throw PreconditionError("region bump: need 0 < core <= plateau < support");
  const double half = 0.5 * chart.width();
  const Point center{0.5 * chart.circumference, chart.s_min + half};
  // Wide in theta, leaving a thin margin to the boundary circles and the seam.
  const Region support = Region::with_area(center, (3.1 / kTwoPi) * chart.circumference, 0.96 * half, support_area, chart);
  return {support, support.scaled(std::sqrt(core_area / support_area)),
          PlateauProfile{1.0, std::sqrt(plateau_area / support_area), 1.0}, support_area};
}

double lamination_value(const Point& p, const AnnulusChart& chart, const DiskSpec& disk, double blend_inner,
                        double blend_outer) {
  const Point mirror{disk.center.theta + 0.5 * chart.circumference, disk.center.s};
  const double r = std::min(chart.distance(p, disk.center), chart.distance(p, mirror)) / disk.radius;
  const double w = 1.0 - smoothstep((r - blend_inner) / (blend_outer - blend_inner));
  return w * r * r + (1.0 - w) * p.s;
}

ScalarField lamination_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns, const DiskSpec& disk,
                             double blend_inner, double blend_outer) {
  return ScalarField::sample(chart, ntheta, ns, [&](const Point& p) {
    return lamination_value(p, chart, disk, blend_inner, blend_outer);
  });
}

}  // namespace annulus
