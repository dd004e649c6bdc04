#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "annulus/surface.hpp"

namespace annulus {

enum class NodeKind { BottomRoot, TopRoot, Minimum, Maximum, Saddle, Regular, CapTip };

const char* to_string(NodeKind kind);

struct ReebNode {
  double value = 0.0;
  NodeKind kind = NodeKind::Regular;
  long vertex = -1;  // grid vertex, -1 for synthetic nodes
};

/// Arc between two nodes. The field runs linearly in the arc parameter u in
/// [0, 1] from the `lo` end to the `hi` end; `cumulative` holds the measure
/// between the lo end and u at uniformly spaced u, linear in between.
struct ReebArc {
  int lo = -1;
  int hi = -1;
  double measure = 0.0;
  std::vector<double> cumulative;

  /// Measure between the lo end and parameter u.
  double measure_below(double u) const;
  /// Smallest u whose measure from the lo end reaches m.
  double parameter_for(double m) const;
};

/// A point of a tree: a node, or an interior point of an arc.
struct TreePoint {
  int node = -1;
  int arc = -1;
  double u = 0.0;

  bool on_node() const { return arc < 0; }
};

/// Measured tree of level-set components (plus optional caps).
class ReebTree {
public:
  ReebTree() = default;

  int add_node(double value, NodeKind kind, long vertex = -1);
  /// Arc whose measure from the lo end grows as measure * fraction(u); fraction must be
  /// non-decreasing with fraction(0) = 0 and fraction(1) = 1.
  int add_arc(int lo, int hi, double measure, const std::function<double(double)>& fraction = {},
              std::size_t bins = 1024);
  int add_arc(ReebArc arc);
  void set_roots(int bottom, int top);

  const std::vector<ReebNode>& nodes() const { return nodes_; }
  const std::vector<ReebArc>& arcs() const { return arcs_; }
  const std::vector<int>& incident(int node) const { return incident_[node]; }
  int bottom_root() const { return bottom_; }
  int top_root() const { return top_; }
  double total_measure() const;

  int other_end(int arc, int node) const {
    return arcs_[arc].lo == node ? arcs_[arc].hi : arcs_[arc].lo;
  }
  double value_at(const TreePoint& p) const;

  /// Copy with leaf arcs of measure `bottom_cap` and `top_cap` hung off the two
  /// roots, carrying the root values.
  ReebTree with_caps(double bottom_cap, double top_cap) const;

  /// True when connected and acyclic.
  bool is_tree() const;

private:
  std::vector<ReebNode> nodes_;
  std::vector<ReebArc> arcs_;
  std::vector<std::vector<int>> incident_;
  int bottom_ = -1;
  int top_ = -1;
};

/// Contour tree of the piecewise-linear interpolant on the cell triangulation,
/// with the two boundary circles collapsed to the roots. Ties are broken by
/// (value, vertex index). Requires constant boundary rows.
ReebTree build_reeb_tree(const ScalarField& field);

struct TreeLocation {
  TreePoint point;
  double value = 0.0;
};

/// Unique point whose complementary components all carry at most half the measure.
TreeLocation median(const ReebTree& tree);

/// Missing stretch (h_start, h_end) of percentile values created by branches at `node`.
struct Gap {
  double h_start = 0.0;
  double h_end = 0.0;
  double measure = 0.0;
  int node = -1;
};

struct Branch {
  int node = -1;
  int arc = -1;
  double h_attach = 0.0;
  double measure = 0.0;
};

/// One stem arc, traversed from the bottom side; h runs from h_start to h_end along it.
struct StemStep {
  int arc = -1;
  bool forward = true;  // traversed lo -> hi
  double h_start = 0.0;
  double h_end = 0.0;
};

struct StemReport {
  std::vector<int> nodes;  // bottom root ... top root
  std::vector<StemStep> steps;
  std::vector<Gap> gaps;
  std::vector<Branch> branches;
  double total = 0.0;
};

StemReport stem_report(const ReebTree& tree);

struct PercentileResult {
  std::optional<TreeLocation> location;
  std::optional<Gap> gap;
  bool at_attachment = false;  // h sits on the boundary of a gap; the stem-side limit is returned
};

/// h-percentile of the tree; absent (with the covering gap) inside a gap.
PercentileResult percentile(const ReebTree& tree, double h);
PercentileResult percentile(const ReebTree& tree, const StemReport& report, double h);

std::string tree_to_json(const ReebTree& tree);
std::string tree_to_dot(const ReebTree& tree);

}  // namespace annulus
