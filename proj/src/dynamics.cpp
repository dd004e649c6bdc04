#include "annulus/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>

#include "annulus/errors.hpp"

namespace annulus {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::AbsentAsExpected: return "absent-as-expected";
    case Verdict::NoConclusion: return "no conclusion";
  }
  return "fail";
}

Verdict Certificate::verdict() const {
  if (!conclusive) return Verdict::NoConclusion;
  if (!computed && !expected) return Verdict::AbsentAsExpected;
  if (!computed || !expected) return Verdict::Fail;
  if (!std::isfinite(*computed)) return Verdict::Fail;
  return std::abs(*computed - *expected) <= tolerance ? Verdict::Pass : Verdict::Fail;
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json j;
  j["quantity"] = name;
  j["computed"] = computed ? nlohmann::json(*computed) : nlohmann::json(nullptr);
  j["expected"] = expected ? nlohmann::json(*expected) : nlohmann::json(nullptr);
  j["tolerance"] = tolerance;
  j["verdict"] = to_string(verdict());
  j["reference"] = reference;
  if (!detail.empty()) j["detail"] = detail;
  return j;
}

Certificate Certificate::compare(std::string name, double computed, double expected, double tolerance,
                                 std::string reference) {
  Certificate c;
  c.name = std::move(name);
  c.computed = computed;
  c.expected = expected;
  c.tolerance = tolerance;
  c.reference = std::move(reference);
  return c;
}

LiftedOrbit lifted_orbit(const SurfaceMap& map, const Point& p, int n_iterates) {
  if (n_iterates < 1) throw PreconditionError("orbit: need at least one iterate");
  LiftedOrbit orbit;
  orbit.start = p;
  orbit.samples.reserve(static_cast<std::size_t>(n_iterates));
  MapImage cur{p, 0.0};
  for (int k = 0; k < n_iterates; ++k) {
    const MapImage next = map.apply(cur.point);
    cur = {next.point, cur.lift + next.lift};
    orbit.samples.push_back(cur);
  }
  return orbit;
}

double rotation_number(const SurfaceMap& map, const Point& p, int n_iterates) {
  const LiftedOrbit orbit = lifted_orbit(map, p, n_iterates);
  return orbit.samples.back().lift / (static_cast<double>(n_iterates) * map.chart().circumference);
}

double rho_invariant_disk(const SurfaceMap& map, const Region& region, double min_area, int samples,
                          int n_iterates, double tolerance) {
  const AnnulusChart& chart = map.chart();
  if (samples < 4) throw PreconditionError("rho: need at least 4 samples");
  if (region.area(chart.area_scale) < min_area * (1.0 - 1e-12))
    throw PreconditionError("rho: region area below the required minimum");

  for (int k = 0; k < samples; ++k) {
    const double sigma = kTwoPi * (k + 0.5) / samples;
    const Point b = chart.wrap(region.from_polar(1.0, sigma));
    const double g = region.gauge(map(b));
    if (std::abs(g - 1.0) > tolerance) throw DomainError("rho: region boundary is not invariant");
  }

  // Interior points of an invariant disk have lifts that differ by a bounded
  // amount, so their averages agree up to that bound over n iterates.
  std::vector<double> rho;
  const int rings = 4;
  const int per_ring = std::max(1, samples / rings);
  rho.push_back(rotation_number(map, region.center(), n_iterates));
  for (int r = 1; r <= rings; ++r) {
    const double g = 0.95 * r / rings;
    for (int k = 0; k < per_ring; ++k) {
      const double sigma = kTwoPi * (k + 0.25 * r) / per_ring;
      rho.push_back(rotation_number(map, chart.wrap(region.from_polar(g, sigma)), n_iterates));
    }
  }
  const auto [lo, hi] = std::minmax_element(rho.begin(), rho.end());
  const double bound = tolerance + 2.0 * region.semi_theta() / (static_cast<double>(n_iterates) * chart.circumference);
  if (*hi - *lo > bound) throw ConvergenceError("rho: sampled rotation numbers disagree");
  std::nth_element(rho.begin(), rho.begin() + static_cast<std::ptrdiff_t>(rho.size() / 2), rho.end());
  return rho[rho.size() / 2];
}

namespace {

/// Vogel spiral in the unit disk: evenly spread and deterministic.
Point spiral_point(const DiskSpec& disk, std::size_t k, std::size_t n) {
  static const double golden = kPi * (3.0 - std::sqrt(5.0));
  const double r = disk.radius * std::sqrt((static_cast<double>(k) + 0.5) / static_cast<double>(n));
  const double a = golden * static_cast<double>(k);
  return {disk.center.theta + r * std::cos(a), disk.center.s + r * std::sin(a)};
}

}  // namespace

Displacement displaces(const SurfaceMap& map, const DiskSpec& disk, std::size_t samples) {
  if (samples < 8) throw PreconditionError("displaces: need at least 8 samples");
  const AnnulusChart& chart = map.chart();
  const std::size_t boundary = std::max<std::size_t>(8, samples / 10);
  const std::size_t interior = samples - boundary;
  Displacement out;
  out.samples = samples;
  out.min_distance = std::numeric_limits<double>::infinity();
  auto visit = [&](const Point& p) {
    const Point q = map(chart.wrap(p));
    const double d = chart.distance(q, disk.center) - disk.radius;
    out.min_distance = std::min(out.min_distance, std::max(d, 0.0));
    if (d <= 0.0) out.min_distance = 0.0;
  };
  for (std::size_t k = 0; k < interior; ++k) visit(spiral_point(disk, k, interior));
  for (std::size_t k = 0; k < boundary; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(boundary);
    visit({disk.center.theta + disk.radius * std::cos(a), disk.center.s + disk.radius * std::sin(a)});
  }
  out.displaced = out.min_distance > 0.0;
  return out;
}

Vec2 displacement_vector(const SurfaceMap& map, const Point& p) {
  const AnnulusChart& chart = map.chart();
  return chart.displacement(p, map(chart.wrap(p)));
}

namespace {

struct WindingWalk {
  const std::function<Vec2(const Point&)>& field;
  double margin;
  int max_depth = 40;

  Vec2 checked(const Point& p) const {
    const Vec2 v = field(p);
    if (!(v.norm() > margin)) throw ConvergenceError("winding: circle passes near fixed point");
    return v;
  }

  static double turn(const Vec2& a, const Vec2& b) {
    return std::atan2(a.x * b.y - a.y * b.x, a.x * b.x + a.y * b.y);
  }

  // Angle swept from a to b along the straight segment, bisecting until each step turns < pi/4.
  double segment(const Point& pa, const Vec2& va, const Point& pb, const Vec2& vb, int depth) const {
    const double d = turn(va, vb);
    if (std::abs(d) < 0.25 * kPi) return d;
    if (depth >= max_depth) throw ConvergenceError("winding: refinement did not resolve the turn");
    const Point pm{0.5 * (pa.theta + pb.theta), 0.5 * (pa.s + pb.s)};
    const Vec2 vm = checked(pm);
    return segment(pa, va, pm, vm, depth + 1) + segment(pm, vm, pb, vb, depth + 1);
  }
};

}  // namespace

int winding_number(const std::function<Vec2(const Point&)>& field, const std::vector<Point>& polygon,
                   const AnnulusChart& chart, double margin) {
  (void)chart;
  if (polygon.size() < 3) throw PreconditionError("winding: polygon needs at least 3 vertices");
  WindingWalk walk{field, margin};
  std::vector<Vec2> v;
  v.reserve(polygon.size());
  for (const auto& p : polygon) v.push_back(walk.checked(p));
  double total = 0.0;
  for (std::size_t k = 0; k < polygon.size(); ++k) {
    const std::size_t n = (k + 1) % polygon.size();
    total += walk.segment(polygon[k], v[k], polygon[n], v[n], 0);
  }
  return static_cast<int>(std::lround(total / kTwoPi));
}

int winding_number(const SurfaceMap& map, const DiskSpec& circle, std::size_t samples, double margin) {
  if (samples < 8) throw PreconditionError("winding: need at least 8 samples");
  if (!(circle.radius > 0.0)) throw PreconditionError("winding: radius must be positive");
  std::vector<Point> polygon(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double a = kTwoPi * static_cast<double>(k) / static_cast<double>(samples);
    polygon[k] = {circle.center.theta + circle.radius * std::cos(a), circle.center.s + circle.radius * std::sin(a)};
  }
  const std::function<Vec2(const Point&)> field = [&](const Point& p) { return displacement_vector(map, p); };
  return winding_number(field, polygon, map.chart(), margin);
}

namespace {

struct Cell {
  double theta0, s0, size;

  Point center() const { return {theta0 + 0.5 * size, s0 + 0.5 * size}; }
  std::vector<Point> boundary(int per_edge) const {
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(4 * per_edge));
    const std::array<Point, 4> corners{Point{theta0, s0}, Point{theta0 + size, s0},
                                       Point{theta0 + size, s0 + size}, Point{theta0, s0 + size}};
    for (int e = 0; e < 4; ++e) {
      const Point& a = corners[static_cast<std::size_t>(e)];
      const Point& b = corners[static_cast<std::size_t>((e + 1) % 4)];
      for (int k = 0; k < per_edge; ++k) {
        const double u = static_cast<double>(k) / per_edge;
        pts.push_back({a.theta + u * (b.theta - a.theta), a.s + u * (b.s - a.s)});
      }
    }
    return pts;
  }
};

}  // namespace

Certificate fixed_point_certificate(const SurfaceMap& map, const DiskSpec& disk, double tolerance) {
  Certificate cert;
  cert.name = "fixed_point";
  cert.expected = 0.0;
  cert.tolerance = tolerance;
  cert.reference = "nonzero boundary winding of p -> map(p) - p forces a fixed point inside";

  const int w = winding_number(map, disk, 1024);
  cert.detail["boundary_winding"] = w;
  if (w == 0) {
    cert.conclusive = false;
    cert.expected.reset();
    return cert;
  }

  const AnnulusChart& chart = map.chart();
  Point best = disk.center;
  double best_res = std::numeric_limits<double>::infinity();
  // Every evaluation doubles as a candidate, so a near-zero hit on a cell edge is kept.
  const std::function<Vec2(const Point&)> field = [&](const Point& p) {
    const Vec2 v = displacement_vector(map, p);
    if (v.norm() < best_res && chart.distance(p, disk.center) <= disk.radius) {
      best_res = v.norm();
      best = p;
    }
    return v;
  };

  // Inscribed square, nudged off-center so symmetric fixed points avoid cell edges.
  const double side = std::sqrt(2.0) * disk.radius * 0.98;
  Cell cell{disk.center.theta - 0.5 * side + 0.0023 * disk.radius, disk.center.s - 0.5 * side + 0.0011 * disk.radius,
            side};
  const double near = 1e-3 * tolerance;

  int square_winding = 0;
  try {
    square_winding = winding_number(field, cell.boundary(64), chart, near);
  } catch (const ConvergenceError&) {
    square_winding = w;
  }
  cert.detail["square_winding"] = square_winding;
  if (square_winding == 0) {
    // Fixed points between the circle and the inscribed square cancel the index there.
    cert.conclusive = false;
    cert.expected.reset();
    return cert;
  }

  field(cell.center());
  int depth = 0;
  for (; depth < 80 && best_res >= tolerance; ++depth) {
    bool advanced = false;
    const double half = 0.5 * cell.size;
    const std::array<Cell, 4> children{Cell{cell.theta0, cell.s0, half}, Cell{cell.theta0 + half, cell.s0, half},
                                       Cell{cell.theta0 + half, cell.s0 + half, half},
                                       Cell{cell.theta0, cell.s0 + half, half}};
    for (const Cell& child : children) {
      int cw = 0;
      try {
        cw = winding_number(field, child.boundary(8), chart, near);
      } catch (const ConvergenceError&) {
        break;  // the offending point is already recorded as best
      }
      field(child.center());
      if (cw != 0) {
        cell = child;
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  cert.computed = best_res;
  cert.detail["point"] = {{"theta", wrap_periodic(best.theta, chart.circumference)}, {"s", best.s}};
  cert.detail["depth"] = depth;
  cert.detail["inside"] = chart.distance(best, disk.center) <= disk.radius;
  return cert;
}

Certificate check_first_integral(const SurfaceMap& map, const std::function<double(const Point&)>& H,
                                 std::size_t samples, double tolerance, std::uint64_t seed) {
  const AnnulusChart& chart = map.chart();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, chart.circumference);
  std::uniform_real_distribution<double> us(chart.s_min, chart.s_max);
  double worst = 0.0;
  Point worst_p{};
  for (std::size_t k = 0; k < samples; ++k) {
    Point p{ut(rng), us(rng)};
    if (!chart.interior(p)) continue;
    const double d = std::abs(H(map(p)) - H(p));
    if (d > worst) {
      worst = d;
      worst_p = p;
    }
  }
  Certificate c = Certificate::compare("first_integral", worst, 0.0, tolerance, "H o map = H on sampled points");
  c.detail["samples"] = samples;
  c.detail["worst_point"] = {{"theta", worst_p.theta}, {"s", worst_p.s}};
  return c;
}

Certificate check_first_integral(const SurfaceMap& map, const ScalarField& H, std::size_t samples,
                                 double tolerance, std::uint64_t seed) {
  return check_first_integral(map, [&](const Point& p) { return H.eval(map.chart().wrap(p)); }, samples, tolerance,
                              seed);
}

}  // namespace annulus
