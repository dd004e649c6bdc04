#pragma once

#include <cmath>
#include <numbers>

namespace annulus {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// A point in chart coordinates: theta is periodic, s is the strip coordinate.
struct Point {
  double theta = 0.0;
  double s = 0.0;
};

/// Plane vector in chart coordinates (d_theta, d_s).
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  double norm() const { return std::hypot(x, y); }
};

/// Wraps x into [0, period).
inline double wrap_periodic(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r -= period;
  return r;
}

/// Wraps a difference into (-period/2, period/2].
inline double wrap_difference(double d, double period) {
  double r = std::remainder(d, period);
  if (r <= -0.5 * period) r += period;
  return r;
}

/// C^1 cubic smoothstep on [0, 1], clamped outside.
inline double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  return u * u * (3.0 - 2.0 * u);
}

inline double smoothstep_derivative(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 6.0 * u * (1.0 - u);
}

}  // namespace annulus
