#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/scenario.hpp"

using namespace annulus;
using doctest::Approx;

namespace {

ScenarioConfig small(const std::string& scenario) {
  ScenarioConfig c;
  c.scenario = scenario;
  c.ntheta = c.ns = 128;
  return c;
}

const Certificate& find(const ScenarioResult& r, const std::string& name) {
  for (const auto& c : r.certificates)
    if (c.name == name) return c;
  throw std::runtime_error("missing certificate " + name);
}

}  // namespace

TEST_CASE("config validation") {
  CHECK_NOTHROW(ScenarioConfig{}.validate());
  auto c = small("annulus");
  c.ntheta = 64;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = small("torus");
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = small("annulus");
  c.T = -1;
  CHECK_THROWS_AS(c.validate(), PreconditionError);
  c = small("annulus");
  c.format = "xml";
  CHECK_THROWS_AS(c.validate(), PreconditionError);
}

TEST_CASE("config JSON round trip keeps defaults for missing keys") {
  const auto c = ScenarioConfig::from_json(nlohmann::json::parse(R"({"T": 4, "grid": [256, 128]})"));
  CHECK(c.T == 4);
  CHECK(c.tau == 5);
  CHECK(c.ntheta == 256);
  CHECK(c.ns == 128);
  const auto d = ScenarioConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK_THROWS_AS(ScenarioConfig::from_json(nlohmann::json::parse(R"({"grid": [1]})")), PreconditionError);
}

TEST_CASE("empty certificate set emits an empty JSON array") {
  ScenarioResult r;
  CHECK(nlohmann::json::parse(emit(r, "json")) == nlohmann::json::array());
  CHECK(r.all_pass());
  CHECK(output_file_name("csv") == "certificates.csv");
  CHECK_THROWS_AS(output_file_name("xml"), PreconditionError);
}

TEST_CASE("annulus scenario passes and has the documented examples") {
  const auto r = run_scenario(small("annulus"));
  CHECK(r.failures() == 0);
  CHECK(*find(r, "annulus.i.r_ab.g.h=0.4742").computed == Approx(0.4742 * 3).epsilon(3e-3));
  CHECK(*find(r, "annulus.ii.r_ab.g.h=0.5000").computed == Approx(1.5 + 5.0).epsilon(5e-2));
  CHECK(*find(r, "annulus.iv.rho.sum").computed == Approx(3.0).epsilon(1e-3));
}

TEST_CASE("annulus scenario with T = tau = 0 reads zero everywhere") {
  auto c = small("annulus");
  c.T = c.tau = 0;
  const auto r = run_scenario(c);
  CHECK(r.failures() == 0);
  for (const auto& cert : r.certificates) {
    if (cert.name.find("r_ab") != std::string::npos || cert.name.find("rho") != std::string::npos ||
        cert.name.find("calabi") != std::string::npos) {
      REQUIRE(cert.computed);
      CHECK(std::abs(*cert.computed) < 1e-9);
    }
  }
}

TEST_CASE("surface scenario passes") {
  const auto r = run_scenario(small("surface"));
  CHECK(r.failures() == 0);
  CHECK(*find(r, "surface.winding.n=1000").computed == 1.0);
  CHECK(*find(r, "surface.winding.n=10000").computed == 1.0);
}

TEST_CASE("property: reruns are bit identical") {
  for (const char* name : {"annulus", "surface"}) {
    const auto a = run_scenario(small(name));
    const auto b = run_scenario(small(name));
    for (const char* fmt : {"json", "csv", "plotdata", "dot"}) CHECK(emit(a, fmt) == emit(b, fmt));
  }
}

TEST_CASE("csv, plotdata and dot layouts") {
  const auto r = run_scenario(small("annulus"));
  std::istringstream csv(emit(r, "csv"));
  std::string header;
  std::getline(csv, header);
  CHECK(header.rfind("h,r_value,expected,pass", 0) == 0);
  std::size_t rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == r.certificates.size());
  const auto plot = emit(r, "plotdata");
  CHECK(plot.find("# percentile_curve") != std::string::npos);
  CHECK(plot.find("# gaps") != std::string::npos);
  const auto dot = emit(r, "dot");
  CHECK(dot.find("graph") != std::string::npos);
  CHECK(emit(run_scenario(small("surface")), "plotdata").find("# orbits") != std::string::npos);
}

TEST_CASE("candidate trees and percentile absence") {
  const std::vector<double> grid{0.2, 0.35, 0.5, 0.65, 0.8};
  CHECK(percentile_absent_on(synthetic_branch_tree(0.2, 0.6, 0.0, 1.0, 2.0), grid));
  CHECK_FALSE(percentile_absent_on(synthetic_branch_tree(0.2, 0.0, 0.0, 1.0, 2.0), grid));
  CHECK_FALSE(percentile_absent_on(synthetic_branch_tree(0.25, 0.5, 0.0, 1.0, 2.0), grid));
}
