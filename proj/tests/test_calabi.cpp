#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "annulus/calabi.hpp"
#include "annulus/errors.hpp"
#include "annulus/fields.hpp"

using namespace annulus;
using doctest::Approx;

namespace {

const AnnulusChart kUnit = AnnulusChart::unit_area();
// Integral of the default Psi bump, from a 1-D quadrature of its radial profile.
constexpr double kPsiIntegral = 0.8596277055;

ScalarField psi_field(std::size_t n) {
  const auto b = region_bump(kUnit);
  return bump_field(kUnit, n, n, b.support, b.generator);
}

CapSpec second_caps(double hp) { return {0.8 - hp, hp - 0.2}; }

}  // namespace

TEST_CASE("zero field") {
  const auto Z = ScalarField::constant(kUnit, 64, 64, 0.0);
  CHECK(calabi(Z) == 0.0);
  CHECK(calabi_sphere_autonomous(Z, {1.0, 0.6}) == 0.0);
  CHECK(r_ab_autonomous(Z, {1.0, 0.6}).value == 0.0);
}

TEST_CASE("golden Calabi value of Psi") {
  CHECK(kPsiIntegral > 0.8);
  CHECK(kPsiIntegral < 0.9);
  CHECK(calabi(psi_field(512)) == Approx(kPsiIntegral).epsilon(1e-5));
  CHECK(calabi(psi_field(256).scaled(5.0)) == Approx(5.0 * kPsiIntegral).epsilon(1e-4));
}

TEST_CASE("calabi needs zero boundary rows") {
  CHECK_THROWS_AS(calabi(height_field(kUnit, 32, 32)), PreconditionError);
}

TEST_CASE("calabi is additive over disjoint supports") {
  const Region left = Region::with_area({1.0, 0.5}, 0.8, 0.3, 0.1, kUnit);
  const Region right = Region::with_area({4.0, 0.5}, 0.8, 0.3, 0.1, kUnit);
  const PlateauProfile prof{1.0, 0.4, 1.0};
  const auto F = bump_field(kUnit, 256, 256, left, prof);
  const auto G = bump_field(kUnit, 256, 256, right, prof).scaled(-2.0);
  CHECK(calabi(F.combined(1.0, G, 1.0)) == Approx(calabi(F) + calabi(G)).epsilon(1e-12));
}

TEST_CASE("capped median of a stem field sits at the h-percentile") {
  const auto K = compact_height_field(kUnit, 256, 256);
  const auto tree = build_reeb_tree(K);
  for (double h : {0.05, 0.3, 0.5, 0.77, 0.95}) {
    const auto caps = CapSpec::for_percentile(h);
    const auto m = median(tree.with_caps(caps.a, caps.b));
    const auto p = percentile(tree, h);
    REQUIRE(p.location);
    CHECK(m.value == Approx(p.location->value).epsilon(1e-9));
  }
}

TEST_CASE("second capping puts the median inside D") {
  const double tau = 5.0;
  const auto F = psi_field(256).scaled(tau);
  for (double hp : {0.2, 0.5, 0.8}) {
    const double cs = calabi_sphere_autonomous(F, second_caps(hp));
    CHECK(cs == Approx(integrate(F) - 1.6 * tau).epsilon(1e-2));
  }
}

TEST_CASE("r on the height is hT") {
  const int T = 3;
  const auto F = compact_height_field(kUnit, 256, 256).scaled(T);
  for (double h : {0.01, 0.2, 0.5, 0.73, 0.99}) {
    const auto r = r_ab_autonomous(F, CapSpec::for_percentile(h));
    CHECK(r.value == Approx(h * T).epsilon(1e-3));
    REQUIRE(r.percentile_value);
    CHECK_FALSE(r.gap);
  }
}

TEST_CASE("r of tau Psi under the two cappings") {
  const double tau = 5.0;
  const auto F = psi_field(256).scaled(tau);
  const auto tree = build_reeb_tree(F);
  for (double h : {0.01, 0.3, 0.5, 0.99}) CHECK(std::abs(r_ab_autonomous(F, tree, CapSpec::for_percentile(h)).value) < 1e-3);
  for (double hp : {0.2, 0.45, 0.8}) {
    const auto r = r_ab_autonomous(F, tree, second_caps(hp));
    CHECK(r.value == Approx(tau).epsilon(1e-2));
    CHECK_FALSE(r.percentile_value);
    CHECK((r.gap || r.at_attachment));
  }
}

TEST_CASE("commuting sums") {
  CHECK(r_ab_sum_commuting(std::vector<double>{}) == 0.0);
  CHECK(r_ab_sum_commuting(std::vector<double>{1.5, 5.0}) == 6.5);
  RabResult a, b;
  a.value = 0.25;
  b.value = -1.0;
  CHECK(r_ab_sum_commuting(std::vector<RabResult>{a, b}) == -0.75);
}

TEST_CASE("property: difference formula agrees with the percentile") {
  for (int m : {1, 2, 7}) {
    const auto F = compact_height_field(kUnit, 128, 128).scaled(m);
    for (double h : {0.1, 0.4, 0.9}) {
      const auto r = r_ab_autonomous(F, CapSpec::for_percentile(h), 1e-3);
      REQUIRE(r.percentile_value);
      CHECK(std::abs(r.value - *r.percentile_value) <= 1e-3 * F.max());
    }
  }
}

TEST_CASE("property: homogeneity in integer multiples") {
  const auto F = psi_field(128);
  const auto tree = build_reeb_tree(F);
  for (double hp : {0.3, 0.6}) {
    const double r1 = r_ab_autonomous(F, tree, second_caps(hp)).value;
    for (int m : {2, 3, 10}) {
      const auto Fm = F.scaled(m);
      CHECK(r_ab_autonomous(Fm, build_reeb_tree(Fm), second_caps(hp)).value == Approx(m * r1).epsilon(1e-12));
    }
  }
}

TEST_CASE("property: vanishing on small supports away from the median") {
  // A bump of area 0.1 low on the annulus; with caps (1, 2h) and h = 0.7 the
  // median sits on the circle s = 0.7, outside the support.
  const Region small = Region::with_area({2.0, 0.2}, 2.0, 0.12, 0.1, kUnit);
  const auto F = bump_field(kUnit, 256, 256, small, PlateauProfile{3.0, 0.5, 1.0});
  const auto r = r_ab_autonomous(F, CapSpec::for_percentile(0.7));
  CHECK(std::abs(r.value) < 1e-12);
  CHECK(r.median_value == 0.0);
}
