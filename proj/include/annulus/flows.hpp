#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "annulus/geometry.hpp"
#include "annulus/regions.hpp"
#include "annulus/surface.hpp"
#include "json.hpp"

namespace annulus {

/// An autonomous Hamiltonian on a chart: value and (dH/dtheta, dH/ds).
struct Hamiltonian {
  AnnulusChart chart;
  std::function<double(const Point&)> value;
  std::function<Vec2(const Point&)> gradient;
  nlohmann::json descriptor;
};

/// K(theta, s) = s, exactly.
Hamiltonian height_hamiltonian(const AnnulusChart& chart);

/// Sampled field with centered differences at the grid spacing.
Hamiltonian hamiltonian_from_field(std::shared_ptr<const ScalarField> field);

/// H = generator(gauge) on the region, zero outside its support.
Hamiltonian radial_hamiltonian(const AnnulusChart& chart, const Region& region,
                               const PlateauProfile& generator);

/// Radial Hamiltonian whose time-1 map is the twist with the given angle profile.
Hamiltonian twist_generator(const AnnulusChart& chart, const Region& region, const PlateauProfile& angle);

/// X_H with dH = omega(X_H, .), omega = C dtheta ^ ds: ((dH/ds) / C, -(dH/dtheta) / C).
/// Points on or outside the strip boundary throw DomainError.
Vec2 hamiltonian_vector_field(const Hamiltonian& h, const Point& p);
Vec2 hamiltonian_vector_field(const ScalarField& field, const Point& p);

/// Image of a point plus the continuous theta displacement accumulated on the way.
struct MapImage {
  Point point;
  double lift = 0.0;
};

/// Immutable, shareable area-preserving map of an annulus chart.
class SurfaceMap {
public:
  class Node;

  SurfaceMap() = default;
  explicit SurfaceMap(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  const AnnulusChart& chart() const;
  MapImage apply(const Point& p) const;
  Point operator()(const Point& p) const { return apply(p).point; }
  SurfaceMap inverse() const;
  nlohmann::json descriptor() const;
  std::string kind() const;

  const Node& node() const { return *node_; }

private:
  std::shared_ptr<const Node> node_;
};

class SurfaceMap::Node {
public:
  explicit Node(AnnulusChart chart) : chart_(chart) {}
  virtual ~Node() = default;
  const AnnulusChart& chart() const { return chart_; }
  virtual MapImage apply(const Point& p) const = 0;
  virtual SurfaceMap inverse() const = 0;
  virtual nlohmann::json descriptor() const = 0;
  virtual std::string kind() const = 0;

private:
  AnnulusChart chart_;
};

SurfaceMap identity_map(const AnnulusChart& chart);

/// Time-t map of K(theta, s) = s: theta advances by t / C.
SurfaceMap rotation_map(const AnnulusChart& chart, double t);

/// Rigid shift by (dtheta, ds); used for closed-form perturbations.
SurfaceMap translation_map(const AnnulusChart& chart, double dtheta, double ds);

/// Twist about a region: the level curve at gauge rho advances its area angle
/// by t * profile(rho). Identity where the profile vanishes.
struct TwistSpec {
  Region region;
  AngleProfile profile;
};
SurfaceMap disk_twist_map(const AnnulusChart& chart, const TwistSpec& spec, double t);

/// Fixed-step RK4 time-t map of X_H. Throws IntegrationError if an orbit leaves the strip.
SurfaceMap flow_map(const Hamiltonian& h, double t, double step);

/// f o g: g applies first. Charts must agree.
SurfaceMap compose(const SurfaceMap& f, const SurfaceMap& g);
/// maps[0] o maps[1] o ... o maps.back().
SurfaceMap compose(const std::vector<SurfaceMap>& maps);
/// f^n for n >= 0; negative n iterates the inverse.
SurfaceMap iterate(const SurfaceMap& f, int n);

/// Builds a map from its descriptor (see docs/formats.md).
SurfaceMap map_from_descriptor(const nlohmann::json& descriptor);
nlohmann::json chart_to_json(const AnnulusChart& chart);
AnnulusChart chart_from_json(const nlohmann::json& j);
nlohmann::json region_to_json(const Region& region);
Region region_from_json(const nlohmann::json& j, const AnnulusChart& chart);

}  // namespace annulus
