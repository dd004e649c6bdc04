#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "annulus/flows.hpp"
#include "annulus/regions.hpp"
#include "annulus/surface.hpp"
#include "json.hpp"

namespace annulus {

enum class Verdict { Pass, Fail, AbsentAsExpected, NoConclusion };

const char* to_string(Verdict v);

/// One checked identity: computed vs expected within tolerance.
struct Certificate {
  std::string name;
  std::optional<double> computed;
  std::optional<double> expected;
  double tolerance = 0.0;
  bool conclusive = true;
  std::string reference;  // the identity being checked, in words
  nlohmann::json detail = nlohmann::json::object();

  Verdict verdict() const;
  bool ok() const { return verdict() != Verdict::Fail; }
  nlohmann::json to_json() const;

  static Certificate compare(std::string name, double computed, double expected, double tolerance,
                             std::string reference);
};

struct LiftedOrbit {
  Point start;
  std::vector<MapImage> samples;  // point after k+1 iterates with the cumulative lift
};

/// Iterates the map n times, recording the cumulative theta lift.
LiftedOrbit lifted_orbit(const SurfaceMap& map, const Point& p, int n_iterates);

/// Full turns per iterate: cumulative lift / (n * circumference).
double rotation_number(const SurfaceMap& map, const Point& p, int n_iterates);

/// Rotation number shared by the points of an invariant region.
/// Throws PreconditionError when the region is too small, DomainError when the
/// boundary is not mapped onto itself, ConvergenceError when sampled rotation
/// numbers disagree.
double rho_invariant_disk(const SurfaceMap& map, const Region& region, double min_area, int samples = 64,
                          int n_iterates = 1, double tolerance = 1e-6);

struct Displacement {
  bool displaced = false;
  double min_distance = 0.0;  // over samples, distance from the image to the disk
  std::size_t samples = 0;
};

/// Samples the closed disk (spiral interior plus boundary) and checks whether any image lands inside.
Displacement displaces(const SurfaceMap& map, const DiskSpec& disk, std::size_t samples);

/// map(p) - p with the theta difference taken locally.
Vec2 displacement_vector(const SurfaceMap& map, const Point& p);

/// Winding of p -> map(p) - p along the circle, counterclockwise. Starts from
/// `samples` equal steps and bisects any step that turns by more than pi/4.
/// Throws ConvergenceError if the vector gets shorter than `margin`.
int winding_number(const SurfaceMap& map, const DiskSpec& circle, std::size_t samples, double margin = 1e-9);

/// Winding along an arbitrary closed polygon, same refinement rule.
int winding_number(const std::function<Vec2(const Point&)>& field, const std::vector<Point>& polygon,
                   const AnnulusChart& chart, double margin);

/// Locates a fixed point inside the disk by quadtree refinement on cells with
/// nonzero boundary winding. Verdict NoConclusion when the boundary winding is 0.
Certificate fixed_point_certificate(const SurfaceMap& map, const DiskSpec& disk, double tolerance = 1e-8);

/// Max over sampled points of |H(map(p)) - H(p)|; passes when at most `tolerance`.
Certificate check_first_integral(const SurfaceMap& map, const std::function<double(const Point&)>& H,
                                 std::size_t samples, double tolerance, std::uint64_t seed = 1);
Certificate check_first_integral(const SurfaceMap& map, const ScalarField& H, std::size_t samples,
                                 double tolerance, std::uint64_t seed = 1);

}  // namespace annulus
