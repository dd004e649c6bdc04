#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"

namespace annulus {

/// The strip S^1 x [s_min, s_max] with area form area_scale * dtheta ^ ds.
struct AnnulusChart {
  double s_min = 0.0;
  double s_max = 1.0;
  double circumference = kTwoPi;
  double area_scale = 1.0 / kTwoPi;

  /// Throws PreconditionError unless the chart is non-degenerate.
  void validate() const;

  double total_area() const { return area_scale * circumference * (s_max - s_min); }
  double width() const { return s_max - s_min; }

  /// Rate at which the flow of K(theta, s) = s advances theta.
  double height_flow_speed() const { return 1.0 / area_scale; }

  bool contains(const Point& p) const { return p.s >= s_min && p.s <= s_max; }
  bool interior(const Point& p) const { return p.s > s_min && p.s < s_max; }

  /// Flat displacement b - a with the theta difference wrapped to |dtheta| <= circumference / 2.
  Vec2 displacement(const Point& a, const Point& b) const {
    return {wrap_difference(b.theta - a.theta, circumference), b.s - a.s};
  }
  double distance(const Point& a, const Point& b) const { return displacement(a, b).norm(); }

  Point wrap(const Point& p) const { return {wrap_periodic(p.theta, circumference), p.s}; }

  bool operator==(const AnnulusChart&) const = default;

  /// S^1 x [0, 1] with area form dtheta ^ ds / 2pi (total area 1).
  static AnnulusChart unit_area();
  /// S^1 x [-2, 2] with area form dtheta ^ ds (total area 8 pi).
  static AnnulusChart wide_strip();
};

/// Round disk in chart coordinates.
struct DiskSpec {
  Point center;
  double radius = 1.0;
};

/// Sampled real function on the chart, theta-periodic, bilinear between nodes.
///
/// Nodes sit at theta_i = i * circumference / ntheta (i < ntheta) and
/// s_j = s_min + j * (s_max - s_min) / (ns - 1) (j < ns). Storage is one
/// s-row after another: value(i, j) = values[j * ntheta + i].
class ScalarField {
public:
  ScalarField() = default;
  ScalarField(AnnulusChart chart, std::size_t ntheta, std::size_t ns, std::vector<double> values);

  /// Samples fn at every grid node.
  static ScalarField sample(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns,
                            const std::function<double(const Point&)>& fn);
  static ScalarField constant(const AnnulusChart& chart, std::size_t ntheta, std::size_t ns,
                              double value);

  const AnnulusChart& chart() const { return chart_; }
  std::size_t ntheta() const { return ntheta_; }
  std::size_t ns() const { return ns_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

  double at(std::size_t i, std::size_t j) const { return values_[j * ntheta_ + i]; }
  double theta_step() const { return chart_.circumference / static_cast<double>(ntheta_); }
  double s_step() const { return chart_.width() / static_cast<double>(ns_ - 1); }
  Point node(std::size_t i, std::size_t j) const {
    return {theta_step() * static_cast<double>(i), chart_.s_min + s_step() * static_cast<double>(j)};
  }
  /// Area of one grid cell under the chart's area form.
  double cell_area() const { return chart_.area_scale * theta_step() * s_step(); }

  /// Bilinear interpolation; theta is wrapped, s outside the strip throws DomainError.
  double eval(const Point& p) const;

  double min() const;
  double max() const;
  double oscillation() const { return max() - min(); }

  /// True when each boundary row holds a single value.
  bool boundary_rows_constant() const;
  bool boundary_rows_zero() const;

  ScalarField scaled(double factor) const;
  /// alpha * this + beta * other; grids must match.
  ScalarField combined(double alpha, const ScalarField& other, double beta) const;

private:
  AnnulusChart chart_;
  std::size_t ntheta_ = 0;
  std::size_t ns_ = 0;
  std::vector<double> values_;
};

/// Integral of the bilinear interpolant against the area form.
double integrate(const ScalarField& field);

/// Area of {field < level}, splitting each cell along its (i,j)-(i+1,j+1)
/// diagonal and treating the field as linear on each triangle.
double sublevel_area(const ScalarField& field, double level);

/// Area of {f < level} inside a triangle of the given area with linear f and
/// vertex values a, b, c (any order).
double triangle_sublevel_area(double a, double b, double c, double area, double level);

/// JSON text with header fields and a base64 little-endian float64 payload.
std::string field_to_json(const ScalarField& field);
ScalarField field_from_json(const std::string& text);

}  // namespace annulus
