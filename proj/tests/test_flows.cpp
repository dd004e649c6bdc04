#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <memory>
#include <random>

#include "annulus/errors.hpp"
#include "annulus/fields.hpp"
#include "annulus/flows.hpp"

using namespace annulus;
using doctest::Approx;

namespace {

const AnnulusChart kUnit = AnnulusChart::unit_area();
const AnnulusChart kWide = AnnulusChart::wide_strip();

std::vector<Point> random_points(const AnnulusChart& chart, std::size_t n, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> th(0.0, chart.circumference);
  std::uniform_real_distribution<double> s(chart.s_min + margin, chart.s_max - margin);
  std::vector<Point> pts;
  for (std::size_t k = 0; k < n; ++k) pts.push_back({th(rng), s(rng)});
  return pts;
}

std::vector<Point> disk_points(const DiskSpec& d, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = d.radius * std::sqrt(u(rng)), a = kTwoPi * u(rng);
    pts.push_back({d.center.theta + r * std::cos(a), d.center.s + r * std::sin(a)});
  }
  return pts;
}

double max_gap(const AnnulusChart& chart, const SurfaceMap& f, const SurfaceMap& g, const std::vector<Point>& pts) {
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, chart.distance(f(p), g(p)));
  return worst;
}

// The surface scenario's twist: unit disk at the origin, angle 0.5 up to r = 0.5.
const Region kUnitDisk = Region::disk({{0.0, 0.0}, 1.0}, kWide.circumference);
const PlateauProfile kAlpha{0.5, 0.5, 0.9};

}  // namespace

TEST_CASE("hamiltonian vector field of the height") {
  const auto Kw = height_hamiltonian(kWide);
  const Vec2 v = hamiltonian_vector_field(Kw, {0.4, 1.3});
  CHECK(v.x == Approx(1.0));
  CHECK(v.y == Approx(0.0));
  const Vec2 u = hamiltonian_vector_field(height_hamiltonian(kUnit), {2.0, 0.5});
  CHECK(u.x == Approx(kTwoPi));
  CHECK(u.y == Approx(0.0));
  const auto c = std::make_shared<const ScalarField>(ScalarField::constant(kWide, 32, 32, 3.0));
  const Vec2 z = hamiltonian_vector_field(*c, {1.0, 0.1});
  CHECK(z.x == 0.0);
  CHECK(z.y == 0.0);
  CHECK_THROWS_AS(hamiltonian_vector_field(Kw, {0.0, 2.0}), DomainError);
}

TEST_CASE("time-1 flow of K on the unit-area chart turns once") {
  const auto f = flow_map(height_hamiltonian(kUnit), 1.0, 1e-3);
  const MapImage m = f.apply({1.0, 0.3});
  CHECK(m.lift / kTwoPi == Approx(1.0).epsilon(1e-10));
  CHECK(kUnit.distance(m.point, {1.0, 0.3}) < 1e-10);
}

TEST_CASE("rotation map examples") {
  const auto half = rotation_map(kWide, kPi);
  const auto full = rotation_map(kWide, kTwoPi);
  const auto pts = random_points(kWide, 500, 3, 0.0);
  CHECK(max_gap(kWide, full, identity_map(kWide), pts) < 1e-12);
  CHECK(max_gap(kWide, rotation_map(kWide, 0.0), identity_map(kWide), pts) == 0.0);
  for (const auto& p : disk_points({{0.0, 0.0}, 1.0}, 2000, 5)) {
    const Point q = half(p);
    CHECK(kWide.distance(q, {0.0, 0.0}) > 1.0);
  }
}

TEST_CASE("twist map examples") {
  const auto psi = disk_twist_map(kWide, {kUnitDisk, AngleProfile::plateau(kAlpha)}, 1.0);
  const Point outside{0.95 * std::cos(0.7), 0.95 * std::sin(0.7)};
  CHECK(kWide.distance(psi(outside), outside) == 0.0);
  const auto still = disk_twist_map(kWide, {kUnitDisk, AngleProfile::plateau(kAlpha)}, 0.0);
  for (const auto& p : disk_points({{0.0, 0.0}, 1.0}, 200, 1)) CHECK(kWide.distance(still(p), p) == 0.0);
  const double r = kAlpha.radius_for(0.2);
  CHECK(kAlpha(r) == Approx(0.2).epsilon(1e-12));
  for (double a : {0.0, 1.0, 2.5, 4.0}) {
    const Point p{r * std::cos(a), r * std::sin(a)};
    CHECK(kWide.distance(psi(p), p) == Approx(2.0 * r * std::sin(0.1)).epsilon(1e-10));
  }
}

TEST_CASE("RK4 matches the rotation closed form") {
  const auto exact = rotation_map(kWide, kPi);
  const auto rk = flow_map(height_hamiltonian(kWide), kPi, 1e-3);
  const auto pts = random_points(kWide, 100, 11, 0.05);
  CHECK(max_gap(kWide, exact, rk, pts) < 1e-8);
  CHECK(max_gap(kWide, flow_map(height_hamiltonian(kWide), 0.0, 1e-3), identity_map(kWide), pts) == 0.0);
}

TEST_CASE("RK4 matches the twist closed form") {
  const double tau = 3.0;
  const auto exact = disk_twist_map(kWide, {kUnitDisk, AngleProfile::plateau(kAlpha)}, tau);
  const auto rk = flow_map(twist_generator(kWide, kUnitDisk, kAlpha), tau, 1e-3);
  CHECK(max_gap(kWide, exact, rk, disk_points({{0.0, 0.0}, 1.0}, 100, 2)) < 1e-6);
}

TEST_CASE("RK4 matches the annulus bump twist for a short time") {
  const auto bump = region_bump(kUnit);
  const auto exact = disk_twist_map(kUnit, {bump.support, AngleProfile::from_generator(bump.generator, 0.9)}, 0.05);
  const auto rk = flow_map(radial_hamiltonian(kUnit, bump.support, bump.generator), 0.05, 1e-5);
  std::vector<Point> pts;
  for (const auto& q : random_points(kUnit, 400, 4, 0.0))
    if (bump.support.contains(q)) pts.push_back(q);
  REQUIRE(pts.size() > 50);
  CHECK(max_gap(kUnit, exact, rk, pts) < 1e-5);
}

TEST_CASE("compose, iterate and inverse") {
  const auto psi = disk_twist_map(kWide, {kUnitDisk, AngleProfile::plateau(kAlpha)}, 1.0);
  const auto phi = rotation_map(kWide, kPi);
  const auto pts = random_points(kWide, 300, 8, 0.0);
  CHECK(max_gap(kWide, iterate(psi, 1), psi, pts) == 0.0);
  CHECK(max_gap(kWide, iterate(psi, 3), compose({psi, psi, psi}), pts) < 1e-12);
  CHECK(max_gap(kWide, compose(psi, psi.inverse()), identity_map(kWide), pts) < 1e-12);
  CHECK(max_gap(kWide, iterate(psi, -2), compose(psi.inverse(), psi.inverse()), pts) < 1e-12);
  const auto g = compose(phi, psi);
  CHECK(max_gap(kWide, compose(g, g), psi, disk_points({{0.0, 0.0}, 1.0}, 1000, 9)) < 1e-9);
  CHECK_THROWS_AS(compose(phi, rotation_map(kUnit, 1.0)), PreconditionError);
}

TEST_CASE("phi^T and psi^tau commute on the unit-area chart") {
  const auto bump = region_bump(kUnit);
  const auto psi = disk_twist_map(kUnit, {bump.support, AngleProfile::from_generator(bump.generator, 0.9)}, 5.0);
  const auto phi = rotation_map(kUnit, 3.0);
  CHECK(max_gap(kUnit, compose(phi, psi), compose(psi, phi), random_points(kUnit, 1000, 12, 0.0)) < 1e-9);
}

TEST_CASE("descriptors round trip") {
  const auto bump = region_bump(kUnit);
  const auto psi = disk_twist_map(kUnit, {bump.support, AngleProfile::from_generator(bump.generator, 0.9)}, 2.0);
  const auto g = iterate(compose(rotation_map(kUnit, 3.0), psi), 2);
  const auto h = map_from_descriptor(nlohmann::json::parse(g.descriptor().dump()));
  CHECK(max_gap(kUnit, g, h, random_points(kUnit, 300, 13, 0.0)) == 0.0);
  CHECK(h.descriptor() == g.descriptor());
  CHECK_THROWS(map_from_descriptor(nlohmann::json{{"kind", "bogus"}}));
}

TEST_CASE("property: conservation along integrated orbits") {
  const auto H = twist_generator(kWide, kUnitDisk, kAlpha);
  const auto f = flow_map(H, 2.0, 1e-3);
  for (const auto& p : disk_points({{0.0, 0.0}, 1.0}, 200, 21)) CHECK(std::abs(H.value(f(p)) - H.value(p)) < 1e-9);
  // Sampled fields use grid differences, so conservation holds to grid accuracy.
  auto field = std::make_shared<const ScalarField>(ScalarField::sample(
      kUnit, 256, 256, [](const Point& p) { return std::sin(p.theta) * std::pow(std::sin(kPi * p.s), 2); }));
  const auto Hf = hamiltonian_from_field(field);
  const auto ff = flow_map(Hf, 0.05, 1e-4);
  for (const auto& p : random_points(kUnit, 200, 22, 0.02))
    CHECK(std::abs(Hf.value(ff(p)) - Hf.value(p)) < 1e-3 * field->oscillation());
}

TEST_CASE("property: group law of integrated flows") {
  const auto H = twist_generator(kWide, kUnitDisk, kAlpha);
  const auto a = flow_map(H, 0.7, 1e-3);
  const auto b = flow_map(H, 1.1, 1e-3);
  const auto ab = flow_map(H, 1.8, 1e-3);
  CHECK(max_gap(kWide, compose(a, b), ab, disk_points({{0.0, 0.0}, 1.0}, 200, 23)) < 1e-8);
}

TEST_CASE("property: images of random disks keep their area") {
  const auto bump = region_bump(kUnit);
  const auto psi = disk_twist_map(kUnit, {bump.support, AngleProfile::from_generator(bump.generator, 0.9)}, 5.0);
  const auto inv = psi.inverse();
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int n = 600;
  for (int trial = 0; trial < 10; ++trial) {
    const DiskSpec B{{kTwoPi * u(rng), 0.3 + 0.4 * u(rng)}, 0.05 + 0.2 * u(rng)};
    long in_b = 0, in_image = 0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const Point q{kTwoPi * (i + 0.5) / n, (j + 0.5) / n};
        if (kUnit.distance(q, B.center) < B.radius) ++in_b;
        if (kUnit.distance(inv(q), B.center) < B.radius) ++in_image;
      }
    }
    REQUIRE(in_b > 0);
    CHECK(static_cast<double>(in_image) == Approx(static_cast<double>(in_b)).epsilon(0.01));
  }
}

TEST_CASE("property: integrated flows have unit Jacobian") {
  const auto f = flow_map(twist_generator(kWide, kUnitDisk, kAlpha), 1.5, 1e-3);
  const double e = 1e-5;
  for (const auto& p : disk_points({{0.0, 0.0}, 0.95}, 50, 41)) {
    const Vec2 dt = kWide.displacement(f({p.theta - e, p.s}), f({p.theta + e, p.s}));
    const Vec2 ds = kWide.displacement(f({p.theta, p.s - e}), f({p.theta, p.s + e}));
    const double det = (dt.x * ds.y - dt.y * ds.x) / (4 * e * e);
    CHECK(det == Approx(1.0).epsilon(1e-4));
  }
}
