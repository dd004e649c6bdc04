#include "annulus/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>
#include <sstream>

#include "annulus/calabi.hpp"
#include "annulus/errors.hpp"
#include "annulus/fields.hpp"
#include "annulus/flows.hpp"

namespace annulus {

void ScenarioConfig::validate() const {
  if (scenario != "annulus" && scenario != "surface")
    throw PreconditionError("config: scenario must be \"annulus\" or \"surface\"");
  if (T < 0 || tau < 0) throw PreconditionError("config: T and tau must be non-negative");
  if (ntheta < 128 || ns < 128) throw PreconditionError("config: grid must be at least 128 x 128");
  if (!(tol > 0.0) || !std::isfinite(tol)) throw PreconditionError("config: tol must be positive");
  static const std::set<std::string> formats{"json", "csv", "plotdata", "dot"};
  if (!formats.count(format)) throw PreconditionError("config: format must be json, csv, plotdata or dot");
  if (!(alpha_amplitude > 0.0 && 0.0 <= alpha_inner && alpha_inner < alpha_outer && alpha_outer < 1.0))
    throw PreconditionError("config: alpha needs amplitude > 0 and 0 <= inner < outer < 1");
}

ScenarioConfig ScenarioConfig::from_json(const nlohmann::json& j) {
  ScenarioConfig c;
  if (!j.is_object()) throw PreconditionError("config: expected a JSON object");
  c.scenario = j.value("scenario", c.scenario);
  c.T = j.value("T", c.T);
  c.tau = j.value("tau", c.tau);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_array() || g.size() != 2) throw PreconditionError("config: grid must be [ntheta, ns]");
    c.ntheta = g[0].get<std::size_t>();
    c.ns = g[1].get<std::size_t>();
  }
  c.tol = j.value("tol", c.tol);
  c.out = j.value("out", c.out);
  c.format = j.value("format", c.format);
  c.seed = j.value("seed", c.seed);
  if (j.contains("alpha")) {
    const auto& a = j.at("alpha");
    c.alpha_amplitude = a.value("amplitude", c.alpha_amplitude);
    c.alpha_inner = a.value("inner", c.alpha_inner);
    c.alpha_outer = a.value("outer", c.alpha_outer);
  }
  return c;
}

nlohmann::json ScenarioConfig::to_json() const {
  return {{"scenario", scenario},
          {"T", T},
          {"tau", tau},
          {"grid", {ntheta, ns}},
          {"tol", tol},
          {"out", out},
          {"format", format},
          {"seed", seed},
          {"alpha", {{"amplitude", alpha_amplitude}, {"inner", alpha_inner}, {"outer", alpha_outer}}}};
}

bool ScenarioResult::all_pass() const { return failures() == 0; }

std::size_t ScenarioResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(certificates.begin(), certificates.end(), [](const Certificate& c) { return !c.ok(); }));
}

ReebTree synthetic_branch_tree(double attach, double branch, double stem_low, double stem_high,
                               double branch_tip) {
  if (!(attach >= 0.0 && branch >= 0.0 && attach + branch <= 1.0))
    throw PreconditionError("synthetic tree: need attach, branch >= 0 and attach + branch <= 1");
  ReebTree t;
  const int bottom = t.add_node(0.0, NodeKind::BottomRoot);
  const int mid = t.add_node(stem_low, branch > 0.0 ? NodeKind::Saddle : NodeKind::Regular);
  const int top = t.add_node(stem_high, NodeKind::TopRoot);
  t.add_arc(bottom, mid, attach);
  t.add_arc(mid, top, 1.0 - branch - attach);
  if (branch > 0.0) {
    const int tip = t.add_node(branch_tip, NodeKind::Maximum);
    t.add_arc(mid, tip, branch);
  }
  t.set_roots(bottom, top);
  return t;
}

bool percentile_absent_on(const ReebTree& tree, const std::vector<double>& hs) {
  const StemReport report = stem_report(tree);
  for (double h : hs) {
    const PercentileResult p = percentile(tree, report, h);
    if (p.location && !p.at_attachment) return false;
  }
  return true;
}

namespace {

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, x);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = a + (b - a) * k / (n - 1);
  return v;
}

void sort_by_name(std::vector<Certificate>& certs) {
  std::stable_sort(certs.begin(), certs.end(),
                   [](const Certificate& a, const Certificate& b) { return a.name < b.name; });
}

Certificate with_caps(Certificate c, const CapSpec& caps, double h) {
  c.detail["caps"] = {caps.a, caps.b};
  c.detail["h"] = h;
  return c;
}

double max_distance(const SurfaceMap& f, const SurfaceMap& g, const std::vector<Point>& pts) {
  const AnnulusChart& chart = f.chart();
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, chart.distance(f(p), g(p)));
  return worst;
}

std::vector<Point> interior_samples(const AnnulusChart& chart, std::size_t n, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, chart.circumference);
  std::uniform_real_distribution<double> us(chart.s_min + margin, chart.s_max - margin);
  std::vector<Point> pts(n);
  for (auto& p : pts) p = {ut(rng), us(rng)};
  return pts;
}

std::vector<Point> disk_samples(const DiskSpec& disk, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Point> pts(n);
  for (auto& p : pts) {
    const double r = disk.radius * std::sqrt(u(rng)), a = kTwoPi * u(rng);
    p = {disk.center.theta + r * std::cos(a), disk.center.s + r * std::sin(a)};
  }
  return pts;
}

// Area under the radial profile: the region inside gauge rho has area region_area * rho^2.
double radial_integral(const PlateauProfile& f, double region_area) {
  const int n = 20000;
  const double h = 1.0 / n;
  double sum = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double rho = k * h;
    const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
    sum += w * f(rho) * 2.0 * region_area * rho;
  }
  return sum * h / 3.0;
}

nlohmann::json gap_rows(const StemReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& g : report.gaps) rows.push_back({g.h_start, g.h_end, g.measure});
  return rows;
}

}  // namespace

ScenarioResult run_scenario_annulus(const ScenarioConfig& config) {
  config.validate();
  const AnnulusChart chart = AnnulusChart::unit_area();
  const double T = config.T, tau = config.tau;
  const double tol_i = config.tol * std::max(T, 1.0);
  const double tol_ii = 10.0 * config.tol * std::max(tau, 1.0);

  // Psi: 1 on a neighbourhood of D (area 0.8), ramp to 0 at the support boundary (area 0.9).
  const RegionBump bump = region_bump(chart);
  const Region& support = bump.support;
  const Region& D = bump.core;
  const PlateauProfile& generator = bump.generator;

  const ScalarField F_phi = compact_height_field(chart, config.ntheta, config.ns).scaled(T);
  const ScalarField F_psi = bump_field(chart, config.ntheta, config.ns, support, generator).scaled(tau);
  const ReebTree tree_phi = build_reeb_tree(F_phi);
  const ReebTree tree_psi = build_reeb_tree(F_psi);

  const SurfaceMap phi = rotation_map(chart, T);
  const SurfaceMap psi = disk_twist_map(chart, {support, AngleProfile::from_generator(generator, bump.support_area)}, tau);
  const SurfaceMap g = compose(phi, psi);

  ScenarioResult res;
  res.scenario = "annulus";
  auto& certs = res.certificates;
  nlohmann::json curve = nlohmann::json::array();

  // (i) caps (1, 2h): r(phi^T) = hT, r(psi^tau) = 0, so r(g) = hT.
  for (double h : linspace(0.01, 0.99, 20)) {
    const CapSpec caps = CapSpec::for_percentile(h);
    const RabResult rp = r_ab_autonomous(F_phi, tree_phi, caps, config.tol);
    const RabResult rq = r_ab_autonomous(F_psi, tree_psi, caps, config.tol);
    const double sum = r_ab_sum_commuting(std::vector<RabResult>{rp, rq});
    const std::string tag = fmt("h=%.4f", h);
    certs.push_back(with_caps(Certificate::compare("annulus.i.r_ab.phi." + tag, rp.value, h * T, tol_i,
                                                   "r_ab(phi^T) = hT with caps (1, 2h)"),
                              caps, h));
    certs.push_back(with_caps(Certificate::compare("annulus.i.r_ab.psi." + tag, rq.value, 0.0, tol_i,
                                                   "r_ab(psi^tau) = 0 with caps (1, 2h)"),
                              caps, h));
    certs.push_back(with_caps(Certificate::compare("annulus.i.r_ab.g." + tag, sum, h * T, tol_i,
                                                   "r_ab(g) = r_ab(phi^T) + r_ab(psi^tau) = hT"),
                              caps, h));
    curve.push_back({"i", h, sum, h * T});
  }

  // (ii) caps (0.8 - h', h' - 0.2): r(psi^tau) = tau, so r(g) = h'T + tau.
  const std::vector<double> hs2 = linspace(0.2, 0.8, 13);
  double disc_sum = 0.0, disc_min = INFINITY, disc_max = -INFINITY;
  for (double h : hs2) {
    const CapSpec caps{0.8 - h, h - 0.2};
    const RabResult rp = r_ab_autonomous(F_phi, tree_phi, caps, config.tol);
    const RabResult rq = r_ab_autonomous(F_psi, tree_psi, caps, config.tol);
    const double sum = r_ab_sum_commuting(std::vector<RabResult>{rp, rq});
    const std::string tag = fmt("h=%.4f", h);
    certs.push_back(with_caps(Certificate::compare("annulus.ii.r_ab.phi." + tag, rp.value, h * T, tol_i,
                                                   "r_ab(phi^T) = h'T with caps (0.8 - h', h' - 0.2)"),
                              caps, h));
    Certificate cq = with_caps(Certificate::compare("annulus.ii.r_ab.psi." + tag, rq.value, tau, tol_ii,
                                                    "r_ab(psi^tau) = tau with caps (0.8 - h', h' - 0.2)"),
                               caps, h);
    cq.detail["percentile_absent"] = !rq.percentile_value.has_value();
    certs.push_back(cq);
    certs.push_back(with_caps(Certificate::compare("annulus.ii.r_ab.g." + tag, sum, h * T + tau, tol_i + tol_ii,
                                                   "r_ab(g) = h'T + tau"),
                              caps, h));
    curve.push_back({"ii", h, sum, h * T + tau});

    // Same percentile h with caps (1, 2h): an autonomous generator would give equal values.
    const CapSpec first = CapSpec::for_percentile(h);
    const double base = r_ab_autonomous(F_phi, tree_phi, first, config.tol).value +
                        r_ab_autonomous(F_psi, tree_psi, first, config.tol).value;
    const double d = sum - base;
    disc_sum += d;
    disc_min = std::min(disc_min, d);
    disc_max = std::max(disc_max, d);
  }

  // (iii) the discrepancy tau forces a percentile gap covering [0.2, 0.8].
  {
    Certificate c = Certificate::compare("annulus.iii.discrepancy", disc_sum / hs2.size(), tau, tol_i + tol_ii,
                                         "r_(a',b')(g) - r_(a,b)(g) at equal percentile = tau");
    c.detail["min"] = disc_min;
    c.detail["max"] = disc_max;
    certs.push_back(c);

    struct Candidate {
      std::string name;
      ReebTree tree;
    };
    const std::vector<Candidate> candidates{
        {"stem_only", synthetic_branch_tree(0.2, 0.0, 0.2 * T, T, 0.0)},
        {"branch_0.5", synthetic_branch_tree(0.2, 0.5, 0.2 * T, T, 0.2 * T + tau)},
        {"branch_0.6", synthetic_branch_tree(0.2, 0.6, 0.2 * T, T, 0.2 * T + tau)},
        {"psi_tree", tree_psi},
    };
    for (const auto& cand : candidates) {
      const bool gap = percentile_absent_on(cand.tree, hs2);
      const bool consistent = tau == 0.0 || gap;
      const bool predicted = tau == 0.0 || (cand.name != "stem_only" && cand.name != "branch_0.5");
      Certificate cc = Certificate::compare("annulus.iii.candidate." + cand.name, consistent ? 1.0 : 0.0,
                                            predicted ? 1.0 : 0.0, 0.0,
                                            "a generator matching both cappings has no percentile on [0.2, 0.8]");
      const StemReport rep = stem_report(cand.tree);
      cc.detail["gaps"] = gap_rows(rep);
      certs.push_back(cc);
    }

    const StemReport rep = stem_report(tree_psi);
    const auto widest = std::max_element(rep.gaps.begin(), rep.gaps.end(),
                                         [](const Gap& a, const Gap& b) { return a.measure < b.measure; });
    // The branch is the piecewise-linear support of tau Psi, which overshoots
    // the smooth support by up to one cell along its boundary.
    const double pl_support = tau > 0.0 ? chart.total_area() - sublevel_area(F_psi, 1e-12 * tau) : 0.0;
    Certificate cg = Certificate::compare("annulus.iii.psi_gap_measure",
                                          widest == rep.gaps.end() ? 0.0 : widest->measure, pl_support, 1e-2,
                                          "gap length of the psi tree = measure of its branch (support of Psi)");
    cg.detail["nominal_support_area"] = tau > 0.0 ? bump.support_area : 0.0;
    if (widest != rep.gaps.end()) cg.detail["interval"] = {widest->h_start, widest->h_end};
    certs.push_back(cg);
    res.plot["gaps"] = gap_rows(rep);
  }

  // Calabi values of the two factors.
  {
    const double expected = tau * radial_integral(generator, bump.support_area);
    certs.push_back(Certificate::compare("annulus.calabi.psi", calabi(F_psi), expected,
                                         config.tol * std::max(expected, 1.0),
                                         "Cal(psi^tau) = integral of tau Psi"));
    certs.push_back(Certificate::compare("annulus.calabi.phi", calabi(F_phi), T * 0.5,
                                         config.tol * std::max(T, 1.0) + T * 0.01,
                                         "Cal(phi^T) = integral of T K, about T/2 for the compactly cut height"));
  }

  // (iv) rotation numbers on the invariant region D (area 0.8 >= 0.6).
  {
    const int iterates = 2000;
    const double r_phi = rho_invariant_disk(phi, D, 0.6, 64, iterates);
    const double r_psi = rho_invariant_disk(psi, D, 0.6, 64, iterates);
    const double r_g = rho_invariant_disk(g, D, 0.6, 64, iterates);
    const double rtol = config.tol * std::max(T, 1.0);
    certs.push_back(Certificate::compare("annulus.iv.rho.phi", r_phi, T, rtol, "rho(phi^T) = T"));
    certs.push_back(Certificate::compare("annulus.iv.rho.psi", r_psi, 0.0, rtol,
                                         "invariant disks of an autonomous flow have rotation number 0"));
    certs.push_back(Certificate::compare("annulus.iv.rho.sum", r_ab_sum_commuting(std::vector<double>{r_phi, r_psi}),
                                         T, rtol, "rho(g) = rho(phi^T) + rho(psi^tau) = T"));
    certs.push_back(Certificate::compare("annulus.iv.rho.g", r_g, T, rtol, "rho(g) evaluated directly = T"));
  }

  // (v) phi^T and psi^tau commute.
  {
    const auto pts = interior_samples(chart, 1000, config.seed, 0.0);
    certs.push_back(Certificate::compare("annulus.v.commutation", max_distance(g, compose(psi, phi), pts), 0.0, 1e-9,
                                         "phi^T o psi^tau = psi^tau o phi^T"));
  }

  res.plot["percentile_curve"] = curve;
  res.dots.emplace_back("phi", tree_to_dot(tree_phi));
  res.dots.emplace_back("psi", tree_to_dot(tree_psi));
  sort_by_name(certs);
  return res;
}

namespace {

// Translation followed by a small twist; sup displacement at most `budget`.
SurfaceMap random_perturbation(const AnnulusChart& chart, std::mt19937_64& rng, double budget) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double shift = budget * (0.5 + 0.2 * u(rng));
  const double dir = kTwoPi * u(rng);
  const double radius = 0.5;
  const double angle = (budget - shift) / radius * (0.9 + 0.1 * u(rng));
  const Point center{kTwoPi * u(rng), -1.0 + 2.0 * u(rng)};
  const Region bump = Region::disk({center, radius}, chart.circumference);
  const SurfaceMap twist =
      disk_twist_map(chart, {bump, AngleProfile::plateau({angle, 0.3, 0.9})}, 1.0);
  return compose(translation_map(chart, shift * std::cos(dir), shift * std::sin(dir)), twist);
}

}  // namespace

ScenarioResult run_scenario_surface(const ScenarioConfig& config) {
  config.validate();
  const AnnulusChart chart = AnnulusChart::wide_strip();
  const DiskSpec D{{0.0, 0.0}, 1.0};
  const PlateauProfile alpha{config.alpha_amplitude, config.alpha_inner, config.alpha_outer};
  const Region disk_region = Region::disk(D, chart.circumference);

  const SurfaceMap phi = rotation_map(chart, kPi);
  const SurfaceMap psi = disk_twist_map(chart, {disk_region, AngleProfile::plateau(alpha)}, 1.0);
  const SurfaceMap g = compose(phi, psi);
  const SurfaceMap g2 = compose(g, g);

  ScenarioResult res;
  res.scenario = "surface";
  auto& certs = res.certificates;

  {
    const Displacement d = displaces(phi, D, 10000);
    Certificate c = Certificate::compare("surface.displaces", d.displaced ? 1.0 : 0.0, 1.0, 0.0,
                                         "phi(D) and D are disjoint");
    c.detail["min_distance"] = d.min_distance;
    c.detail["samples"] = d.samples;
    certs.push_back(c);
  }
  {
    const auto pts = interior_samples(chart, 10000, config.seed, 0.0);
    certs.push_back(Certificate::compare("surface.involution", max_distance(compose(phi, phi), identity_map(chart), pts),
                                         0.0, 1e-12, "phi^2 = Id"));
    const auto in_d = disk_samples(D, 10000, config.seed + 1);
    certs.push_back(Certificate::compare("surface.g2_on_D", max_distance(g2, psi, in_d), 0.0, 1e-12,
                                         "g^2 restricted to D equals psi"));
  }

  const double r02 = alpha.radius_for(std::min(0.2, 0.5 * alpha.amplitude));
  const DiskSpec circle{D.center, r02 * D.radius};
  res.plot["r02"] = circle.radius;
  for (std::size_t n : {std::size_t{1000}, std::size_t{10000}}) {
    Certificate c;
    try {
      c = Certificate::compare("surface.winding.n=" + std::to_string(n), winding_number(g2, circle, n), 1.0, 0.0,
                               "winding of p -> g^2(p) - p on the circle r_0.2 is 1");
    } catch (const ConvergenceError& e) {
      c.name = "surface.winding.n=" + std::to_string(n);
      c.expected = 1.0;
      c.detail["error"] = e.what();
    }
    certs.push_back(c);
  }
  {
    const Region model_region = Region::disk({D.center, 1.0}, chart.circumference);
    const SurfaceMap model = disk_twist_map(chart, {model_region, AngleProfile::plateau({0.2, 0.95, 0.99})}, 1.0);
    certs.push_back(Certificate::compare("surface.winding.rotation_model", winding_number(model, circle, 1000), 1.0,
                                         0.0, "rigid rotation by 0.2 winds once"));
  }
  {
    Certificate c = fixed_point_certificate(g2, circle, 1e-8);
    c.name = "surface.fixed_point";
    certs.push_back(c);
  }

  // First integral: analytic lamination and its sampled grid version.
  {
    const ScalarField H = lamination_field(chart, config.ntheta, config.ns, D);
    const double tol = 1e-3 * H.oscillation();
    Certificate ca = check_first_integral(
        g, [&](const Point& p) { return lamination_value(chart.wrap(p), chart, D, 0.92, 1.0); }, 10000, tol,
        config.seed + 2);
    ca.name = "surface.first_integral.analytic";
    certs.push_back(ca);
    Certificate cg = check_first_integral(g, H, 10000, tol, config.seed + 2);
    cg.name = "surface.first_integral.grid";
    certs.push_back(cg);
    res.dots.emplace_back("lamination", tree_to_dot(build_reeb_tree(H)));
  }

  // Robustness: P o g^2 with sup |P - Id| <= 0.09 keeps winding 1 on r_0.2.
  {
    std::mt19937_64 rng(config.seed + 3);
    const auto probe = interior_samples(chart, 20000, config.seed + 4, 0.1);
    for (int k = 1; k <= 5; ++k) {
      const SurfaceMap P = random_perturbation(chart, rng, 0.09);
      const double sup = max_distance(P, identity_map(chart), probe);
      const std::string name = "surface.robustness." + std::to_string(k);
      Certificate cs = Certificate::compare(name + ".sup_displacement", sup, 0.0, 0.09,
                                            "perturbation moves points by at most 0.09");
      certs.push_back(cs);
      Certificate cw;
      try {
        cw = Certificate::compare(name + ".winding", winding_number(compose(P, g2), circle, 1000), 1.0, 0.0,
                                  "winding 1 survives perturbations below the 0.1 displacement margin");
      } catch (const ConvergenceError& e) {
        cw.name = name + ".winding";
        cw.expected = 1.0;
        cw.detail["error"] = e.what();
      }
      certs.push_back(cw);
    }
  }

  // Orbit traces of g^2 inside D for plotting.
  {
    nlohmann::json orbits = nlohmann::json::array();
    for (double r : {0.2, 0.4, 0.6, r02, 0.8}) {
      const LiftedOrbit orbit = lifted_orbit(g2, {r, 0.0}, 200);
      for (std::size_t k = 0; k < orbit.samples.size(); ++k) {
        const Point& q = orbit.samples[k].point;
        orbits.push_back({r, k + 1, wrap_difference(q.theta, chart.circumference), q.s});
      }
    }
    res.plot["orbits"] = orbits;
  }

  sort_by_name(certs);
  return res;
}

ScenarioResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  return config.scenario == "annulus" ? run_scenario_annulus(config) : run_scenario_surface(config);
}

std::string output_file_name(const std::string& format) {
  if (format == "json") return "certificates.json";
  if (format == "csv") return "certificates.csv";
  if (format == "plotdata") return "plotdata.txt";
  if (format == "dot") return "trees.dot";
  throw PreconditionError("emit: unknown format " + format);
}

namespace {

std::string number(const std::optional<double>& x) {
  if (!x) return "";
  std::ostringstream os;
  os.precision(17);
  os << *x;
  return os.str();
}

}  // namespace

std::string emit(const ScenarioResult& result, const std::string& format) {
  std::ostringstream os;
  os.precision(17);
  if (format == "json") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : result.certificates) arr.push_back(c.to_json());
    os << arr.dump(2) << '\n';
  } else if (format == "csv") {
    os << "h,r_value,expected,pass,quantity\n";
    for (const auto& c : result.certificates) {
      const std::string h = c.detail.contains("h") ? number(c.detail["h"].get<double>()) : "";
      os << h << ',' << number(c.computed) << ',' << number(c.expected) << ',' << (c.ok() ? "true" : "false") << ','
         << c.name << '\n';
    }
  } else if (format == "plotdata") {
    os << "# scenario " << result.scenario << '\n';
    if (result.plot.contains("percentile_curve")) {
      os << "# percentile_curve: family h r_value expected\n";
      for (const auto& row : result.plot["percentile_curve"])
        os << row[0].get<std::string>() << ' ' << row[1].get<double>() << ' ' << row[2].get<double>() << ' '
           << row[3].get<double>() << '\n';
      os << '\n';
    }
    if (result.plot.contains("gaps")) {
      os << "# gaps: h_start h_end measure\n";
      for (const auto& row : result.plot["gaps"])
        os << row[0].get<double>() << ' ' << row[1].get<double>() << ' ' << row[2].get<double>() << '\n';
      os << '\n';
    }
    if (result.plot.contains("orbits")) {
      os << "# orbits: start_radius iterate theta s\n";
      for (const auto& row : result.plot["orbits"])
        os << row[0].get<double>() << ' ' << row[1].get<int>() << ' ' << row[2].get<double>() << ' '
           << row[3].get<double>() << '\n';
      os << '\n';
    }
  } else if (format == "dot") {
    for (const auto& [name, dot] : result.dots) os << "// " << name << '\n' << dot << '\n';
  } else {
    throw PreconditionError("emit: unknown format " + format);
  }
  return os.str();
}

}  // namespace annulus
