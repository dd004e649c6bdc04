#include "annulus/regions.hpp"

#include <algorithm>
#include <cmath>

#include "annulus/errors.hpp"

namespace annulus {

namespace {

constexpr std::size_t kTableIntervals = 8192;

// Area of the unit superellipse divided by semi_theta * semi_s.
double shape_factor(double p) {
  if (p == 2.0) return kPi;
  const double g = std::tgamma(1.0 + 1.0 / p);
  return 4.0 * g * g / std::tgamma(1.0 + 2.0 / p);
}

double unit_radius_for(double phi, double p) {
  const double c = std::abs(std::cos(phi)), s = std::abs(std::sin(phi));
  return std::pow(std::pow(c, p) + std::pow(s, p), -1.0 / p);
}

}  // namespace

Region::Region(Point center, double semi_theta, double semi_s, double exponent, double circumference)
    : center_(center), semi_theta_(semi_theta), semi_s_(semi_s), exponent_(exponent),
      circumference_(circumference) {
  if (!(semi_theta > 0.0) || !(semi_s > 0.0)) throw PreconditionError("region: semi-axes must be positive");
  if (!(exponent >= 1.0)) throw PreconditionError("region: exponent must be at least 1");
  if (!(2.0 * semi_theta < circumference)) throw PreconditionError("region: wraps around the annulus");
  if (exponent_ == 2.0) return;

  // sigma(phi) = 2pi * int_0^phi r(u)^2 du / int_0^2pi r(u)^2 du, Simpson per interval.
  auto table = std::make_shared<std::vector<double>>(kTableIntervals + 1, 0.0);
  const double h = kTwoPi / static_cast<double>(kTableIntervals);
  for (std::size_t k = 0; k < kTableIntervals; ++k) {
    const double a = h * static_cast<double>(k);
    const double ra = unit_radius_for(a, exponent_), rm = unit_radius_for(a + 0.5 * h, exponent_),
                 rb = unit_radius_for(a + h, exponent_);
    (*table)[k + 1] = (*table)[k] + h / 6.0 * (ra * ra + 4.0 * rm * rm + rb * rb);
  }
  const double total = table->back();
  for (double& v : *table) v *= kTwoPi / total;
  table->back() = kTwoPi;
  table_ = std::move(table);
}

Region Region::disk(const DiskSpec& disk, double circumference) {
  return Region(disk.center, disk.radius, disk.radius, 2.0, circumference);
}

Region Region::with_area(Point center, double semi_theta, double semi_s, double area,
                         const AnnulusChart& chart) {
  const double target = area / (chart.area_scale * semi_theta * semi_s);
  if (!(target > shape_factor(1.0) && target < 4.0))
    throw PreconditionError("region: requested area is not reachable by a superellipse with these axes");
  double lo = 1.0, hi = 400.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (shape_factor(mid) < target ? lo : hi) = mid;
  }
  return Region(center, semi_theta, semi_s, 0.5 * (lo + hi), chart.circumference);
}

Region Region::scaled(double factor) const {
  Region r = *this;
  r.semi_theta_ *= factor;
  r.semi_s_ *= factor;
  return r;
}

double Region::area(double area_scale) const {
  return area_scale * semi_theta_ * semi_s_ * shape_factor(exponent_);
}

Vec2 Region::normalized(const Point& p) const {
  return {wrap_difference(p.theta - center_.theta, circumference_) / semi_theta_,
          (p.s - center_.s) / semi_s_};
}

double Region::gauge(const Point& p) const {
  const Vec2 v = normalized(p);
  if (exponent_ == 2.0) return std::hypot(v.x, v.y);
  const double m = std::max(std::abs(v.x), std::abs(v.y));
  if (m == 0.0) return 0.0;
  return m * std::pow(std::pow(std::abs(v.x) / m, exponent_) + std::pow(std::abs(v.y) / m, exponent_),
                      1.0 / exponent_);
}

Vec2 Region::gauge_gradient(const Point& p) const {
  const Vec2 v = normalized(p);
  const double rho = gauge(p);
  if (rho == 0.0) return {0.0, 0.0};
  if (exponent_ == 2.0) return {v.x / rho / semi_theta_, v.y / rho / semi_s_};
  const double q = exponent_ - 1.0;
  const double scale = std::pow(rho, -q);
  const double gx = std::copysign(std::pow(std::abs(v.x), q), v.x) * scale;
  const double gy = std::copysign(std::pow(std::abs(v.y), q), v.y) * scale;
  return {gx / semi_theta_, gy / semi_s_};
}

double Region::unit_radius(double phi) const { return unit_radius_for(phi, exponent_); }

double Region::angle_to_area_angle(double phi) const {
  if (!table_) return phi;
  const double h = kTwoPi / static_cast<double>(kTableIntervals);
  const double x = phi / h;
  auto k = static_cast<std::size_t>(x);
  if (k >= kTableIntervals) k = kTableIntervals - 1;
  const double f = x - static_cast<double>(k);
  return (*table_)[k] + f * ((*table_)[k + 1] - (*table_)[k]);
}

double Region::area_angle_to_angle(double sigma) const {
  if (!table_) return sigma;
  const auto& t = *table_;
  auto it = std::upper_bound(t.begin(), t.end(), sigma);
  std::size_t k = (it == t.begin()) ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  if (k >= kTableIntervals) k = kTableIntervals - 1;
  const double h = kTwoPi / static_cast<double>(kTableIntervals);
  const double f = (sigma - t[k]) / (t[k + 1] - t[k]);
  return h * (static_cast<double>(k) + f);
}

double Region::area_angle(const Point& p) const {
  const Vec2 v = normalized(p);
  const double phi = wrap_periodic(std::atan2(v.y, v.x), kTwoPi);
  return angle_to_area_angle(phi);
}

Point Region::from_polar(double gauge, double area_angle) const {
  const double phi = area_angle_to_angle(wrap_periodic(area_angle, kTwoPi));
  const double r = (exponent_ == 2.0) ? gauge : gauge * unit_radius(phi);
  return {center_.theta + r * std::cos(phi) * semi_theta_, center_.s + r * std::sin(phi) * semi_s_};
}

double PlateauProfile::radius_for(double angle) const {
  if (!(angle > 0.0 && angle < amplitude)) throw PreconditionError("profile: angle outside (0, amplitude)");
  double lo = inner, hi = outer;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    ((*this)(mid) > angle ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

AngleProfile AngleProfile::plateau(PlateauProfile p) {
  AngleProfile a;
  a.shape_ = p;
  return a;
}

AngleProfile AngleProfile::from_generator(PlateauProfile generator, double region_area) {
  AngleProfile a;
  a.shape_ = generator;
  a.derived_ = true;
  a.region_area_ = region_area;
  return a;
}

double AngleProfile::operator()(double rho) const {
  if (!derived_) return shape_(rho);
  if (rho >= shape_.outer || rho <= shape_.inner) return 0.0;
  return -kPi * shape_.derivative(rho) / (region_area_ * rho);
}

}  // namespace annulus
