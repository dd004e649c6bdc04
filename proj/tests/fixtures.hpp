#pragma once

#include <cmath>
#include <random>

#include "annulus/surface.hpp"

namespace annulus::testing {

// Height on the unit-area chart plus a random theta-dependent term small
// enough that dF/ds > 0 everywhere: each level set is one circle, so the tree
// is a bare stem.
inline ScalarField stem_only_field(std::uint64_t seed, std::size_t n) {
  const AnnulusChart chart = AnnulusChart::unit_area();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double a[3], b[3];
  for (int k = 0; k < 3; ++k) {
    a[k] = u(rng);
    b[k] = u(rng);
  }
  const double bend = 0.3 * u(rng);
  return ScalarField::sample(chart, n, n, [&](const Point& p) {
    double wave = 0.0;
    for (int k = 0; k < 3; ++k) wave += a[k] * std::cos((k + 1) * p.theta) + b[k] * std::sin((k + 1) * p.theta);
    return p.s + bend * p.s * p.s + 0.02 * std::sin(kPi * p.s) * wave;
  });
}

}  // namespace annulus::testing
