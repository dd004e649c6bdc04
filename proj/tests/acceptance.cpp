// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "annulus/calabi.hpp"
#include "annulus/dynamics.hpp"
#include "annulus/fields.hpp"
#include "annulus/scenario.hpp"
#include "fixtures.hpp"

using namespace annulus;
using Clock = std::chrono::steady_clock;

namespace {

const AnnulusChart kUnit = AnnulusChart::unit_area();
const AnnulusChart kWide = AnnulusChart::wide_strip();
constexpr std::size_t kGrid = 512;
constexpr int kT = 3;
constexpr int kTau = 5;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v;
  for (int k = 0; k < n; ++k) v.push_back(a + (b - a) * k / (n - 1));
  return v;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

Outcome percentile_identity() {
  const auto t0 = Clock::now();
  const auto F = compact_height_field(kUnit, kGrid, kGrid).scaled(kT);
  const auto tree = build_reeb_tree(F);
  double worst = 0.0;
  for (double h : linspace(0.01, 0.99, 20))
    worst = std::max(worst, std::abs(r_ab_autonomous(F, tree, CapSpec::for_percentile(h)).value - h * kT));
  const double t = seconds_since(t0);
  return {worst <= 1e-3 * kT && t < 30.0, fmt("max |r - hT| = %.2e (tol %.1e), %.2f s at 512^2", worst, 1e-3 * kT, t)};
}

Outcome second_capping() {
  const auto bump = region_bump(kUnit);
  const auto Fpsi = bump_field(kUnit, kGrid, kGrid, bump.support, bump.generator).scaled(kTau);
  const auto Fphi = compact_height_field(kUnit, kGrid, kGrid).scaled(kT);
  const auto tpsi = build_reeb_tree(Fpsi);
  const auto tphi = build_reeb_tree(Fphi);
  double worst_psi = 0.0, worst_sum = 0.0;
  for (double hp : linspace(0.2, 0.8, 13)) {
    const CapSpec caps{0.8 - hp, hp - 0.2};
    const double rpsi = r_ab_autonomous(Fpsi, tpsi, caps).value;
    const double rphi = r_ab_autonomous(Fphi, tphi, caps).value;
    worst_psi = std::max(worst_psi, std::abs(rpsi - kTau));
    worst_sum = std::max(worst_sum, std::abs(r_ab_sum_commuting(std::vector<double>{rphi, rpsi}) - (hp * kT + kTau)));
  }
  const double tol = 1e-2 * kTau;
  return {worst_psi <= tol && worst_sum <= tol + 1e-3 * kT,
          fmt("max |r(tau Psi) - tau| = %.2e, max |r(g) - (h'T + tau)| = %.2e (tol %.2e)", worst_psi, worst_sum, tol)};
}

Outcome gap_mechanics() {
  const auto tree = synthetic_branch_tree(0.2, 0.6, 0.0, 1.0, 2.0);
  const auto report = stem_report(tree);
  const int n = 100000;
  int absent = 0;
  double lo = 1.0, hi = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double h = static_cast<double>(k) / n;
    if (!percentile(tree, report, h).location) {
      ++absent;
      lo = std::min(lo, h);
      hi = std::max(hi, h);
    }
  }
  const double length = static_cast<double>(absent) / n;
  // The absent set must be one interval: its point count matches its span.
  const bool interval = absent > 0 && std::abs((hi - lo) * n + 1 - absent) < 1.5;
  const bool report_ok = report.gaps.size() == 1 && std::abs(report.gaps[0].measure - 0.6) <= 0.01 &&
                         report.branches.size() == 1 && report.gaps[0].measure == report.branches[0].measure;
  return {interval && std::abs(length - 0.6) <= 0.01 && report_ok,
          fmt("absent on (%.4f, %.4f), length %.4f", lo, hi, length) +
              fmt("; gap report %.4f vs branch %.4f", report.gaps.empty() ? -1.0 : report.gaps[0].measure,
                  report.branches.empty() ? -1.0 : report.branches[0].measure)};
}

Outcome oracle_equivalence() {
  double worst_cells = 0.0;
  bool stem_only = true;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto F = testing::stem_only_field(seed, 128);
    const auto tree = build_reeb_tree(F);
    const auto report = stem_report(tree);
    stem_only = stem_only && report.branches.empty();
    for (double h : linspace(0.02, 0.98, 25)) {
      const auto p = percentile(tree, report, h);
      if (!p.location) {
        stem_only = false;
        continue;
      }
      // Brute-force level sweep: bisection on the sublevel area.
      double a = F.min(), b = F.max();
      for (int it = 0; it < 50; ++it) {
        const double c = 0.5 * (a + b);
        (sublevel_area(F, c) < h ? a : b) = c;
      }
      const double diff = std::abs(sublevel_area(F, p.location->value) - sublevel_area(F, 0.5 * (a + b)));
      worst_cells = std::max(worst_cells, diff / F.cell_area());
    }
  }
  return {stem_only && worst_cells <= 2.0, fmt("max area difference %.3f cells over 10 fields x 25 h", worst_cells)};
}

Outcome displacement_involution() {
  const DiskSpec D{{0.0, 0.0}, 1.0};
  const auto phi = rotation_map(kWide, kPi);
  const auto d = displaces(phi, D, 10000);
  const auto phi2 = compose(phi, phi);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> th(0.0, kTwoPi), s(-2.0, 2.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const Point p{th(rng), s(rng)};
    worst = std::max(worst, kWide.distance(phi2(p), p));
  }
  return {d.displaced && worst <= 1e-12,
          fmt("displaced with min distance %.4f over %.0f samples; |phi^2 - Id| = %.1e", d.min_distance,
              static_cast<double>(d.samples), worst)};
}

struct SurfaceSetup {
  DiskSpec D{{0.0, 0.0}, 1.0};
  PlateauProfile alpha{0.5, 0.5, 0.9};
  SurfaceMap psi = disk_twist_map(kWide, {Region::disk(D, kWide.circumference), AngleProfile::plateau(alpha)}, 1.0);
  SurfaceMap g = compose(rotation_map(kWide, kPi), psi);
  SurfaceMap g2 = compose(g, g);
  double r02 = alpha.radius_for(0.2);
};

Outcome fixed_point(const SurfaceSetup& S) {
  const DiskSpec circle{S.D.center, S.r02};
  const int w3 = winding_number(S.g2, circle, 1000);
  const int w4 = winding_number(S.g2, circle, 10000);
  const auto c = fixed_point_certificate(S.g2, circle, 1e-8);
  const double residual = c.computed.value_or(1e300);
  const bool inside = c.detail.value("inside", false);
  return {w3 == 1 && w4 == 1 && c.verdict() == Verdict::Pass && residual < 1e-8 && inside,
          fmt("winding %g at 10^3, %g at 10^4; residual %.1e inside D'", w3, w4, residual)};
}

Outcome robustness() {
  ScenarioConfig cfg;
  cfg.scenario = "surface";
  cfg.ntheta = cfg.ns = 128;
  const auto res = run_scenario_surface(cfg);
  int probes = 0, windings = 0;
  double worst_sup = 0.0;
  bool ok = true;
  for (const auto& c : res.certificates) {
    if (c.name.rfind("surface.robustness.", 0) != 0) continue;
    if (c.name.find("sup_displacement") != std::string::npos) {
      ++probes;
      worst_sup = std::max(worst_sup, c.computed.value_or(1e300));
      ok = ok && c.computed && *c.computed <= 0.09;
    } else if (c.name.find("winding") != std::string::npos) {
      windings += (c.computed && *c.computed == 1.0) ? 1 : 0;
    }
  }
  return {ok && probes == 5 && windings == 5,
          fmt("%g perturbations, max sup displacement %.4f, winding 1 in %g of them", probes, worst_sup, windings)};
}

Outcome integrability(const SurfaceSetup& S) {
  const auto H = lamination_field(kWide, kGrid, kGrid, S.D);
  const double osc = H.oscillation();
  const auto grid = check_first_integral(S.g, H, 10000, 1e-3 * osc, 1);
  const auto exact = check_first_integral(
      S.g, [&](const Point& p) { return lamination_value(p, kWide, S.D, 0.92, 1.0); }, 10000, 1e-3 * osc, 2);
  return {grid.verdict() == Verdict::Pass && exact.verdict() == Verdict::Pass,
          fmt("max |H o g - H| = %.2e (sampled H), %.2e (closed form); tol %.2e", *grid.computed, *exact.computed,
              1e-3 * osc)};
}

Outcome conservation(Clock::time_point start) {
  // Reeb measures.
  const auto bump = region_bump(kUnit);
  std::vector<ScalarField> fields{compact_height_field(kUnit, 256, 256),
                                  bump_field(kUnit, 256, 256, bump.support, bump.generator),
                                  testing::stem_only_field(42, 256),
                                  lamination_field(kWide, 256, 256, {{0.0, 0.0}, 1.0})};
  double worst_measure = 0.0;
  for (const auto& F : fields) {
    const ReebTree tree = build_reeb_tree(F);
    double sum = 0.0;
    for (const auto& a : tree.arcs()) sum += a.measure;
    worst_measure = std::max(worst_measure, std::abs(sum / F.chart().total_area() - 1.0));
  }

  // Areas of 10 random disks: grid count of f(B) through the inverse map,
  // over a box around the image of the boundary circle. Even trials use the
  // closed-form twist on the unit-area chart, odd ones the integrated flow of
  // the surface twist generator on the wide strip.
  auto image_ratio = [](const AnnulusChart& chart, const SurfaceMap& f, const DiskSpec& B) {
    const SurfaceMap inv = f.inverse();
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    for (int k = 0; k < 720; ++k) {
      const double a = kTwoPi * k / 720;
      const Vec2 d = chart.displacement(B.center, f({B.center.theta + B.radius * std::cos(a),
                                                      B.center.s + B.radius * std::sin(a)}));
      x0 = std::min(x0, d.x), x1 = std::max(x1, d.x), y0 = std::min(y0, d.y), y1 = std::max(y1, d.y);
    }
    const double pad = 0.02;
    x0 -= pad, x1 += pad;
    y0 = std::max(y0 - pad, chart.s_min - B.center.s), y1 = std::min(y1 + pad, chart.s_max - B.center.s);
    // An image smeared once around the circle needs exactly one period of theta.
    const bool wraps = x1 - x0 >= chart.circumference;
    if (wraps) x0 = -0.5 * chart.circumference, x1 = 0.5 * chart.circumference;
    const int nx = wraps ? 2000 : 250, ny = wraps ? 500 : 250;
    const double dx = (x1 - x0) / nx, dy = (y1 - y0) / ny;
    long inside = 0;
    for (int i = 0; i < nx; ++i)
      for (int j = 0; j < ny; ++j) {
        const Point q{B.center.theta + x0 + (i + 0.5) * dx, B.center.s + y0 + (j + 0.5) * dy};
        if (chart.distance(inv(q), B.center) < B.radius) ++inside;
      }
    return inside * dx * dy / (kPi * B.radius * B.radius);
  };
  const auto psi = disk_twist_map(kUnit, {bump.support, AngleProfile::from_generator(bump.generator, 0.9)}, kTau);
  const Region Dr = Region::disk({{0.0, 0.0}, 1.0}, kWide.circumference);
  const auto H = twist_generator(kWide, Dr, {0.5, 0.5, 0.9});
  const auto rk = flow_map(H, 1.0, 1e-2);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_area = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const double ratio =
        trial % 2 == 0
            ? image_ratio(kUnit, psi, {{kTwoPi * u(rng), 0.3 + 0.4 * u(rng)}, 0.05 + 0.2 * u(rng)})
            : image_ratio(kWide, rk, {{0.6 * (u(rng) - 0.5), 0.6 * (u(rng) - 0.5)}, 0.1 + 0.3 * u(rng)});
    worst_area = std::max(worst_area, std::abs(ratio - 1.0));
  }

  // Energy along integrated orbits of a Hamiltonian with exact gradient.
  const auto f = flow_map(H, 5.0, 1e-3);
  double worst_energy = 0.0;
  for (int k = 0; k < 500; ++k) {
    const double r = std::sqrt(u(rng)), a = kTwoPi * u(rng);
    const Point p{r * std::cos(a), r * std::sin(a)};
    worst_energy = std::max(worst_energy, std::abs(H.value(f(p)) - H.value(p)));
  }

  const double total = seconds_since(start);
  return {worst_measure <= 5e-3 && worst_area <= 1e-2 && worst_energy <= 1e-8 && total < 120.0,
          fmt("measure %.1e, disk area %.1e, energy drift %.1e", worst_measure, worst_area, worst_energy) +
              fmt("; whole run %.1f s", total)};
}

}  // namespace

int main() {
  const auto start = Clock::now();
  const SurfaceSetup surface;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"percentile identity", percentile_identity},
      {"second capping", second_capping},
      {"gap mechanics", gap_mechanics},
      {"oracle equivalence", oracle_equivalence},
      {"displacement and involution", displacement_involution},
      {"fixed-point certificate", [&] { return fixed_point(surface); }},
      {"robustness margin", robustness},
      {"integrability witness", [&] { return integrability(surface); }},
      {"conservation suite", [&] { return conservation(start); }},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    const auto t0 = Clock::now();
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first, o.detail.c_str(),
                seconds_since(t0));
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
