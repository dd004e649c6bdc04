#pragma once

#include <cstddef>

#include "annulus/regions.hpp"
#include "annulus/surface.hpp"

namespace annulus {

/// K(theta, s) = s.
ScalarField height_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns);

/// s on [lo, hi], falling to zero at both boundary circles: a C^1 cubic below
/// lo and a smoothstep down from hi to the top circle.
double compact_height(double s, const AnnulusChart& chart, double lo, double hi);
ScalarField compact_height_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns,
                                 double lo = 0.005, double hi = 0.995);

/// generator(gauge) inside the region, zero outside.
ScalarField bump_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns, const Region& region,
                       const PlateauProfile& generator);

/// Radial bump on a superellipse centered in the chart: `core` is the invariant
/// region of area core_area, the generator equals 1 up to plateau_area and
/// falls to 0 at the support boundary (area support_area).
struct RegionBump {
  Region support;
  Region core;
  PlateauProfile generator;
  double support_area;
};
RegionBump region_bump(const AnnulusChart& chart, double core_area = 0.8, double plateau_area = 0.82,
                       double support_area = 0.9);

/// First integral shared by the half-turn and a twist supported in `disk`:
/// r^2 around the disk center and its half-turn image, blended into the
/// height s between radii blend_inner and blend_outer.
double lamination_value(const Point& p, const AnnulusChart& chart, const DiskSpec& disk, double blend_inner,
                        double blend_outer);
ScalarField lamination_field(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns, const DiskSpec& disk,
                             double blend_inner = 0.92, double blend_outer = 1.0);

}  // namespace annulus
