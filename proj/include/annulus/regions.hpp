#pragma once

#include <memory>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/surface.hpp"

namespace annulus {

/// Superellipse {|x|^p + |y|^p < 1} in normalized coordinates
/// x = (theta - center.theta) / semi_theta, y = (s - center.s) / semi_s.
///
/// Exponent 2 with equal semi-axes is a round disk. Points are addressed by a
/// gauge rho (1 on the boundary, homogeneous of degree one) and an area angle
/// in [0, 2pi): the fraction of the region's area swept counterclockwise from
/// the positive theta axis, times 2pi. A Hamiltonian that depends only on rho
/// advances the area angle at a constant rate on each level curve.
class Region {
public:
  Region(Point center, double semi_theta, double semi_s, double exponent, double circumference);

  static Region disk(const DiskSpec& disk, double circumference);
  /// Superellipse with the given semi-axes whose area under the chart's form is `area`.
  static Region with_area(Point center, double semi_theta, double semi_s, double area,
                          const AnnulusChart& chart);

  const Point& center() const { return center_; }
  double semi_theta() const { return semi_theta_; }
  double semi_s() const { return semi_s_; }
  double exponent() const { return exponent_; }
  bool is_round() const { return exponent_ == 2.0 && semi_theta_ == semi_s_; }

  /// Same shape with both semi-axes multiplied by factor.
  Region scaled(double factor) const;

  /// Area under area form scale * dtheta ^ ds.
  double area(double area_scale) const;

  Vec2 normalized(const Point& p) const;
  double gauge(const Point& p) const;
  /// (d gauge / d theta, d gauge / d s); zero at the center.
  Vec2 gauge_gradient(const Point& p) const;
  double area_angle(const Point& p) const;
  /// Inverse of (gauge, area_angle); theta is returned unwrapped around the center.
  Point from_polar(double gauge, double area_angle) const;

  bool contains(const Point& p) const { return gauge(p) < 1.0; }

private:
  double angle_to_area_angle(double phi) const;
  double area_angle_to_angle(double sigma) const;
  double unit_radius(double phi) const;

  Point center_;
  double semi_theta_;
  double semi_s_;
  double exponent_;
  double circumference_;
  // Cumulative area angle at uniformly spaced polar angles (superellipse only).
  std::shared_ptr<const std::vector<double>> table_;
};

/// Monotone non-increasing angle (radians per unit time) as a function of gauge.
/// Full `amplitude` for gauge <= inner, smoothstep down to zero at `outer`.
struct PlateauProfile {
  double amplitude = 0.5;
  double inner = 0.5;
  double outer = 0.9;

  double operator()(double rho) const {
    return amplitude * (1.0 - smoothstep((rho - inner) / (outer - inner)));
  }
  double derivative(double rho) const {
    return -amplitude * smoothstep_derivative((rho - inner) / (outer - inner)) / (outer - inner);
  }
  /// Gauge where the profile equals `angle`, by bisection; requires 0 < angle < amplitude.
  double radius_for(double angle) const;
};

/// Area-angle advance per unit time for the flow of a radial Hamiltonian.
///
/// Either a prescribed plateau (the twist itself is the object) or derived from
/// a generating profile f(gauge): the flow of f traverses the level curve at
/// gauge rho with area-angle speed -pi f'(rho) / (region_area * rho).
class AngleProfile {
public:
  static AngleProfile plateau(PlateauProfile p);
  static AngleProfile from_generator(PlateauProfile generator, double region_area);

  double operator()(double rho) const;
  bool from_hamiltonian() const { return derived_; }
  const PlateauProfile& shape() const { return shape_; }
  double region_area() const { return region_area_; }

private:
  PlateauProfile shape_;
  bool derived_ = false;
  double region_area_ = 1.0;
};

}  // namespace annulus
