#include "annulus/flows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "annulus/errors.hpp"

namespace annulus {

using nlohmann::json;

json chart_to_json(const AnnulusChart& c) {
  return {{"s_min", c.s_min}, {"s_max", c.s_max}, {"circumference", c.circumference},
          {"area_scale", c.area_scale}};
}

AnnulusChart chart_from_json(const json& j) {
  if (j.is_string()) {
    const auto name = j.get<std::string>();
    if (name == "unit_area") return AnnulusChart::unit_area();
    if (name == "wide_strip") return AnnulusChart::wide_strip();
    throw PreconditionError("unknown chart preset: " + name);
  }
  AnnulusChart c{j.at("s_min").get<double>(), j.at("s_max").get<double>(),
                 j.value("circumference", kTwoPi), j.value("area_scale", 1.0)};
  c.validate();
  return c;
}

json region_to_json(const Region& r) {
  return {{"center", {r.center().theta, r.center().s}},
          {"semi_theta", r.semi_theta()},
          {"semi_s", r.semi_s()},
          {"exponent", r.exponent()}};
}

Region region_from_json(const json& j, const AnnulusChart& chart) {
  const auto& c = j.at("center");
  const Point center{c.at(0).get<double>(), c.at(1).get<double>()};
  if (j.contains("radius"))
    return Region::disk({center, j.at("radius").get<double>()}, chart.circumference);
  if (j.contains("area"))
    return Region::with_area(center, j.at("semi_theta").get<double>(), j.at("semi_s").get<double>(),
                             j.at("area").get<double>(), chart);
  return Region(center, j.at("semi_theta").get<double>(), j.at("semi_s").get<double>(),
                j.value("exponent", 2.0), chart.circumference);
}

namespace {

json plateau_to_json(const PlateauProfile& p) {
  return {{"amplitude", p.amplitude}, {"inner", p.inner}, {"outer", p.outer}};
}

PlateauProfile plateau_from_json(const json& j) {
  PlateauProfile p{j.at("amplitude").get<double>(), j.at("inner").get<double>(), j.at("outer").get<double>()};
  if (!(p.inner < p.outer)) throw PreconditionError("profile: inner must be below outer");
  return p;
}

void require_interior(const AnnulusChart& chart, const Point& p) {
  if (!std::isfinite(p.theta) || !chart.interior(p))
    throw DomainError("vector field: point not in the open strip");
}

}  // namespace

Hamiltonian height_hamiltonian(const AnnulusChart& chart) {
  return {chart, [](const Point& p) { return p.s; }, [](const Point&) { return Vec2{0.0, 1.0}; },
          json{{"type", "height"}}};
}

Hamiltonian hamiltonian_from_field(std::shared_ptr<const ScalarField> field) {
  const AnnulusChart chart = field->chart();
  auto value = [field](const Point& p) { return field->eval(p); };
  auto gradient = [field](const Point& p) {
    const double dt = field->theta_step(), ds = field->s_step();
    const auto& c = field->chart();
    const double gt = (field->eval({p.theta + dt, p.s}) - field->eval({p.theta - dt, p.s})) / (2.0 * dt);
    const double s_hi = std::min(p.s + ds, c.s_max), s_lo = std::max(p.s - ds, c.s_min);
    const double gs = (field->eval({p.theta, s_hi}) - field->eval({p.theta, s_lo})) / (s_hi - s_lo);
    return Vec2{gt, gs};
  };
  return {chart, value, gradient, json{{"type", "field"}}};
}

Hamiltonian radial_hamiltonian(const AnnulusChart& chart, const Region& region,
                               const PlateauProfile& generator) {
  auto value = [region, generator](const Point& p) {
    const double rho = region.gauge(p);
    return rho >= generator.outer ? 0.0 : generator(rho);
  };
  auto gradient = [region, generator](const Point& p) {
    const double rho = region.gauge(p);
    if (rho >= generator.outer || rho <= generator.inner) return Vec2{0.0, 0.0};
    const Vec2 g = region.gauge_gradient(p);
    const double d = generator.derivative(rho);
    return Vec2{d * g.x, d * g.y};
  };
  return {chart, value, gradient,
          json{{"type", "radial"}, {"region", region_to_json(region)}, {"generator", plateau_to_json(generator)}}};
}

Hamiltonian twist_generator(const AnnulusChart& chart, const Region& region, const PlateauProfile& angle) {
  const double area = region.area(chart.area_scale);
  // f'(rho) = -alpha(rho) * area * rho / pi, f(outer) = 0.
  auto slope = [angle, area](double rho) { return -angle(rho) * area * rho / kPi; };
  auto value_at = [slope, angle](double rho) {
    if (rho >= angle.outer) return 0.0;
    const int n = 400;
    const double h = (angle.outer - rho) / n;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      const double a = rho + h * k;
      sum += h / 6.0 * (slope(a) + 4.0 * slope(a + 0.5 * h) + slope(a + h));
    }
    return -sum;
  };
  auto value = [region, value_at](const Point& p) { return value_at(region.gauge(p)); };
  auto gradient = [region, slope, angle](const Point& p) {
    const double rho = region.gauge(p);
    if (rho >= angle.outer || rho == 0.0) return Vec2{0.0, 0.0};
    const Vec2 g = region.gauge_gradient(p);
    const double d = slope(rho);
    return Vec2{d * g.x, d * g.y};
  };
  return {chart, value, gradient,
          json{{"type", "twist_generator"}, {"region", region_to_json(region)}, {"angle", plateau_to_json(angle)}}};
}

Vec2 hamiltonian_vector_field(const Hamiltonian& h, const Point& p) {
  require_interior(h.chart, p);
  const Vec2 g = h.gradient(p);
  const double c = h.chart.area_scale;
  return {g.y / c, -g.x / c};
}

Vec2 hamiltonian_vector_field(const ScalarField& field, const Point& p) {
  return hamiltonian_vector_field(
      hamiltonian_from_field(std::make_shared<const ScalarField>(field)), p);
}

const AnnulusChart& SurfaceMap::chart() const { return node_->chart(); }
MapImage SurfaceMap::apply(const Point& p) const { return node_->apply(p); }
SurfaceMap SurfaceMap::inverse() const { return node_->inverse(); }
json SurfaceMap::descriptor() const { return node_->descriptor(); }
std::string SurfaceMap::kind() const { return node_->kind(); }

namespace {

class IdentityNode final : public SurfaceMap::Node {
public:
  using Node::Node;
  MapImage apply(const Point& p) const override { return {chart().wrap(p), 0.0}; }
  SurfaceMap inverse() const override { return identity_map(chart()); }
  json descriptor() const override { return {{"kind", "identity"}, {"chart", chart_to_json(chart())}}; }
  std::string kind() const override { return "identity"; }
};

class RotationNode final : public SurfaceMap::Node {
public:
  RotationNode(AnnulusChart chart, double t) : Node(chart), t_(t) {}
  MapImage apply(const Point& p) const override {
    const double advance = t_ * chart().height_flow_speed();
    return {{wrap_periodic(p.theta + advance, chart().circumference), p.s}, advance};
  }
  SurfaceMap inverse() const override { return rotation_map(chart(), -t_); }
  json descriptor() const override {
    return {{"kind", "rotation"}, {"chart", chart_to_json(chart())}, {"t", t_}};
  }
  std::string kind() const override { return "rotation"; }

private:
  double t_;
};

class TranslationNode final : public SurfaceMap::Node {
public:
  TranslationNode(AnnulusChart chart, double dtheta, double ds) : Node(chart), dtheta_(dtheta), ds_(ds) {}
  MapImage apply(const Point& p) const override {
    const Point q{wrap_periodic(p.theta + dtheta_, chart().circumference), p.s + ds_};
    if (!chart().contains(q)) throw DomainError("translation: image leaves the strip");
    return {q, dtheta_};
  }
  SurfaceMap inverse() const override { return translation_map(chart(), -dtheta_, -ds_); }
  json descriptor() const override {
    return {{"kind", "translation"}, {"chart", chart_to_json(chart())}, {"dtheta", dtheta_}, {"ds", ds_}};
  }
  std::string kind() const override { return "translation"; }

private:
  double dtheta_, ds_;
};

class TwistNode final : public SurfaceMap::Node {
public:
  TwistNode(AnnulusChart chart, TwistSpec spec, double t) : Node(chart), spec_(std::move(spec)), t_(t) {}
  MapImage apply(const Point& p) const override {
    const Region& r = spec_.region;
    const double rho = r.gauge(p);
    const double advance = (rho < 1.0) ? t_ * spec_.profile(rho) : 0.0;
    if (advance == 0.0) return {chart().wrap(p), 0.0};
    const Point q = r.from_polar(rho, r.area_angle(p) + advance);
    // unwrapped theta of p around the center; the orbit never leaves the region
    const double theta0 = r.center().theta + r.normalized(p).x * r.semi_theta();
    return {chart().wrap(q), q.theta - theta0};
  }
  SurfaceMap inverse() const override { return disk_twist_map(chart(), spec_, -t_); }
  json descriptor() const override {
    json profile = plateau_to_json(spec_.profile.shape());
    profile["type"] = spec_.profile.from_hamiltonian() ? "generator" : "plateau";
    if (spec_.profile.from_hamiltonian()) profile["region_area"] = spec_.profile.region_area();
    return {{"kind", "twist"}, {"chart", chart_to_json(chart())}, {"t", t_},
            {"region", region_to_json(spec_.region)}, {"profile", profile}};
  }
  std::string kind() const override { return "twist"; }

private:
  TwistSpec spec_;
  double t_;
};

class FlowNode final : public SurfaceMap::Node {
public:
  FlowNode(Hamiltonian h, double t, double step) : Node(h.chart), h_(std::move(h)), t_(t), step_(step) {}
  MapImage apply(const Point& p) const override {
    const auto n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(t_) / step_ - 1e-9)));
    const double dt = t_ / static_cast<double>(n);
    double th = p.theta, s = p.s;
    auto field = [this](double a, double b) {
      const Point q{a, b};
      if (!std::isfinite(a) || !std::isfinite(b) || !chart().interior(q))
        throw IntegrationError("flow: orbit left the chart interior", a, b);
      return hamiltonian_vector_field(h_, q);
    };
    for (long k = 0; k < n; ++k) {
      const Vec2 k1 = field(th, s);
      const Vec2 k2 = field(th + 0.5 * dt * k1.x, s + 0.5 * dt * k1.y);
      const Vec2 k3 = field(th + 0.5 * dt * k2.x, s + 0.5 * dt * k2.y);
      const Vec2 k4 = field(th + dt * k3.x, s + dt * k3.y);
      th += dt / 6.0 * (k1.x + 2.0 * k2.x + 2.0 * k3.x + k4.x);
      s += dt / 6.0 * (k1.y + 2.0 * k2.y + 2.0 * k3.y + k4.y);
    }
    if (!chart().interior({th, s})) throw IntegrationError("flow: orbit left the chart interior", th, s);
    return {{wrap_periodic(th, chart().circumference), s}, th - p.theta};
  }
  SurfaceMap inverse() const override { return flow_map(h_, -t_, step_); }
  json descriptor() const override {
    return {{"kind", "flow"}, {"chart", chart_to_json(chart())}, {"t", t_}, {"step", step_},
            {"hamiltonian", h_.descriptor}};
  }
  std::string kind() const override { return "flow"; }

private:
  Hamiltonian h_;
  double t_, step_;
};

class CompositionNode final : public SurfaceMap::Node {
public:
  CompositionNode(AnnulusChart chart, std::vector<SurfaceMap> maps) : Node(chart), maps_(std::move(maps)) {}
  MapImage apply(const Point& p) const override {
    MapImage out{chart().wrap(p), 0.0};
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) {
      const MapImage step = it->apply(out.point);
      out.point = step.point;
      out.lift += step.lift;
    }
    return out;
  }
  SurfaceMap inverse() const override {
    std::vector<SurfaceMap> inv;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) inv.push_back(it->inverse());
    return compose(inv);
  }
  json descriptor() const override {
    json children = json::array();
    for (const auto& m : maps_) children.push_back(m.descriptor());
    return {{"kind", "compose"}, {"chart", chart_to_json(chart())}, {"children", children}};
  }
  std::string kind() const override { return "compose"; }

private:
  std::vector<SurfaceMap> maps_;
};

class IterateNode final : public SurfaceMap::Node {
public:
  IterateNode(SurfaceMap base, int n) : Node(base.chart()), base_(std::move(base)), n_(n) {}
  MapImage apply(const Point& p) const override {
    MapImage out{chart().wrap(p), 0.0};
    for (int k = 0; k < n_; ++k) {
      const MapImage step = base_.apply(out.point);
      out.point = step.point;
      out.lift += step.lift;
    }
    return out;
  }
  SurfaceMap inverse() const override { return iterate(base_.inverse(), n_); }
  json descriptor() const override {
    return {{"kind", "iterate"}, {"chart", chart_to_json(chart())}, {"n", n_}, {"base", base_.descriptor()}};
  }
  std::string kind() const override { return "iterate"; }

private:
  SurfaceMap base_;
  int n_;
};

}  // namespace

SurfaceMap identity_map(const AnnulusChart& chart) {
  chart.validate();
  return SurfaceMap(std::make_shared<IdentityNode>(chart));
}

SurfaceMap rotation_map(const AnnulusChart& chart, double t) {
  chart.validate();
  return SurfaceMap(std::make_shared<RotationNode>(chart, t));
}

SurfaceMap translation_map(const AnnulusChart& chart, double dtheta, double ds) {
  chart.validate();
  return SurfaceMap(std::make_shared<TranslationNode>(chart, dtheta, ds));
}

SurfaceMap disk_twist_map(const AnnulusChart& chart, const TwistSpec& spec, double t) {
  chart.validate();
  const Region& r = spec.region;
  if (r.center().s - r.semi_s() <= chart.s_min || r.center().s + r.semi_s() >= chart.s_max)
    throw PreconditionError("twist: region is not inside the open strip");
  return SurfaceMap(std::make_shared<TwistNode>(chart, spec, t));
}

SurfaceMap flow_map(const Hamiltonian& h, double t, double step) {
  if (!(step > 0.0)) throw PreconditionError("flow: step must be positive");
  h.chart.validate();
  return SurfaceMap(std::make_shared<FlowNode>(h, t, step));
}

SurfaceMap compose(const SurfaceMap& f, const SurfaceMap& g) { return compose(std::vector<SurfaceMap>{f, g}); }

SurfaceMap compose(const std::vector<SurfaceMap>& maps) {
  if (maps.empty()) throw PreconditionError("compose: empty list");
  for (const auto& m : maps)
    if (!(m.chart() == maps.front().chart())) throw PreconditionError("compose: chart mismatch");
  return SurfaceMap(std::make_shared<CompositionNode>(maps.front().chart(), maps));
}

SurfaceMap iterate(const SurfaceMap& f, int n) {
  if (n < 0) return iterate(f.inverse(), -n);
  return SurfaceMap(std::make_shared<IterateNode>(f, n));
}

namespace {

Hamiltonian hamiltonian_from_descriptor(const json& j, const AnnulusChart& chart) {
  const auto type = j.at("type").get<std::string>();
  if (type == "height") return height_hamiltonian(chart);
  if (type == "radial")
    return radial_hamiltonian(chart, region_from_json(j.at("region"), chart), plateau_from_json(j.at("generator")));
  if (type == "twist_generator")
    return twist_generator(chart, region_from_json(j.at("region"), chart), plateau_from_json(j.at("angle")));
  if (type == "field_file") {
    std::ifstream in(j.at("path").get<std::string>());
    if (!in) throw PreconditionError("flow: cannot open field file");
    std::stringstream ss;
    ss << in.rdbuf();
    auto field = std::make_shared<const ScalarField>(field_from_json(ss.str()));
    return hamiltonian_from_field(field);
  }
  throw PreconditionError("unknown hamiltonian type: " + type);
}

SurfaceMap parse_map(const json& j, const AnnulusChart* inherited) {
  AnnulusChart chart;
  if (j.contains("chart")) chart = chart_from_json(j.at("chart"));
  else if (inherited) chart = *inherited;
  else if (j.contains("base") && j.at("base").contains("chart")) chart = chart_from_json(j.at("base").at("chart"));
  else if (j.contains("children") && !j.at("children").empty() && j.at("children")[0].contains("chart"))
    chart = chart_from_json(j.at("children")[0].at("chart"));
  else throw PreconditionError("map descriptor: missing chart");

  const auto kind = j.at("kind").get<std::string>();
  if (kind == "identity") return identity_map(chart);
  if (kind == "rotation") return rotation_map(chart, j.at("t").get<double>());
  if (kind == "translation") return translation_map(chart, j.value("dtheta", 0.0), j.value("ds", 0.0));
  if (kind == "twist") {
    const Region region = region_from_json(j.at("region"), chart);
    const auto& pj = j.at("profile");
    const PlateauProfile shape = plateau_from_json(pj);
    const AngleProfile profile = pj.value("type", "plateau") == "generator"
                                     ? AngleProfile::from_generator(shape, pj.value("region_area", region.area(chart.area_scale)))
                                     : AngleProfile::plateau(shape);
    return disk_twist_map(chart, {region, profile}, j.value("t", 1.0));
  }
  if (kind == "flow")
    return flow_map(hamiltonian_from_descriptor(j.at("hamiltonian"), chart), j.at("t").get<double>(),
                    j.value("step", 1e-3));
  if (kind == "compose") {
    std::vector<SurfaceMap> maps;
    for (const auto& c : j.at("children")) maps.push_back(parse_map(c, &chart));
    return compose(maps);
  }
  if (kind == "iterate") return iterate(parse_map(j.at("base"), &chart), j.at("n").get<int>());
  throw PreconditionError("unknown map kind: " + kind);
}

}  // namespace

SurfaceMap map_from_descriptor(const json& descriptor) {
  try {
    return parse_map(descriptor, nullptr);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("map descriptor: ") + e.what());
  }
}

}  // namespace annulus
