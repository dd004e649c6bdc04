#include <algorithm>
#include <cmath>
#include <sstream>

#include "annulus/errors.hpp"
#include "annulus/reeb.hpp"
#include "json.hpp"

namespace annulus {

const char* to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::BottomRoot: return "bottom_root";
    case NodeKind::TopRoot: return "top_root";
    case NodeKind::Minimum: return "minimum";
    case NodeKind::Maximum: return "maximum";
    case NodeKind::Saddle: return "saddle";
    case NodeKind::Regular: return "regular";
    case NodeKind::CapTip: return "cap";
  }
  return "unknown";
}

double ReebArc::measure_below(double u) const {
  const std::size_t bins = cumulative.size() - 1;
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return cumulative.back();
  const double x = u * static_cast<double>(bins);
  auto k = static_cast<std::size_t>(x);
  if (k >= bins) k = bins - 1;
  const double f = x - static_cast<double>(k);
  return cumulative[k] + f * (cumulative[k + 1] - cumulative[k]);
}

double ReebArc::parameter_for(double m) const {
  const std::size_t bins = cumulative.size() - 1;
  if (m <= 0.0) return 0.0;
  if (m >= cumulative.back()) {
    // first u where the full measure is reached
    auto it = std::lower_bound(cumulative.begin(), cumulative.end(), cumulative.back());
    return static_cast<double>(it - cumulative.begin()) / static_cast<double>(bins);
  }
  auto it = std::lower_bound(cumulative.begin(), cumulative.end(), m);
  const auto k1 = static_cast<std::size_t>(it - cumulative.begin());
  const std::size_t k0 = k1 - 1;
  const double span = cumulative[k1] - cumulative[k0];
  const double f = span > 0.0 ? (m - cumulative[k0]) / span : 0.0;
  return (static_cast<double>(k0) + f) / static_cast<double>(bins);
}

int ReebTree::add_node(double value, NodeKind kind, long vertex) {
  nodes_.push_back({value, kind, vertex});
  incident_.emplace_back();
  return static_cast<int>(nodes_.size()) - 1;
}

int ReebTree::add_arc(int lo, int hi, double measure, const std::function<double(double)>& fraction,
                      std::size_t bins) {
  if (bins == 0) bins = 1;
  ReebArc arc;
  arc.lo = lo;
  arc.hi = hi;
  arc.measure = measure;
  arc.cumulative.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k) {
    const double u = static_cast<double>(k) / static_cast<double>(bins);
    arc.cumulative[k] = measure * (fraction ? fraction(u) : u);
  }
  arc.cumulative.front() = 0.0;
  arc.cumulative.back() = measure;
  return add_arc(std::move(arc));
}

int ReebTree::add_arc(ReebArc arc) {
  if (arc.lo < 0 || arc.hi < 0 || arc.lo >= static_cast<int>(nodes_.size()) ||
      arc.hi >= static_cast<int>(nodes_.size()))
    throw PreconditionError("reeb: arc endpoint out of range");
  if (arc.cumulative.size() < 2) throw PreconditionError("reeb: arc needs at least one bin");
  if (!(arc.measure >= 0.0)) throw PreconditionError("reeb: negative arc measure");
  const int id = static_cast<int>(arcs_.size());
  incident_[arc.lo].push_back(id);
  incident_[arc.hi].push_back(id);
  arcs_.push_back(std::move(arc));
  return id;
}

void ReebTree::set_roots(int bottom, int top) {
  bottom_ = bottom;
  top_ = top;
}

double ReebTree::total_measure() const {
  double sum = 0.0;
  for (const auto& a : arcs_) sum += a.measure;
  return sum;
}

double ReebTree::value_at(const TreePoint& p) const {
  if (p.on_node()) return nodes_[p.node].value;
  const auto& a = arcs_[p.arc];
  const double lo = nodes_[a.lo].value, hi = nodes_[a.hi].value;
  return lo + p.u * (hi - lo);
}

ReebTree ReebTree::with_caps(double bottom_cap, double top_cap) const {
  if (bottom_cap < 0.0 || top_cap < 0.0) throw PreconditionError("caps: areas must be non-negative");
  ReebTree t = *this;
  if (bottom_cap > 0.0) {
    const int tip = t.add_node(nodes_[bottom_].value, NodeKind::CapTip);
    t.add_arc(bottom_, tip, bottom_cap, {}, 1);
  }
  if (top_cap > 0.0) {
    const int tip = t.add_node(nodes_[top_].value, NodeKind::CapTip);
    t.add_arc(top_, tip, top_cap, {}, 1);
  }
  return t;
}

bool ReebTree::is_tree() const {
  if (nodes_.empty()) return false;
  if (arcs_.size() + 1 != nodes_.size()) return false;
  std::vector<char> seen(nodes_.size(), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    for (int a : incident_[n]) {
      const int m = other_end(a, n);
      if (!seen[m]) {
        seen[m] = 1;
        ++count;
        stack.push_back(m);
      }
    }
  }
  return count == nodes_.size();
}

namespace {

// Rooted view: parent arc per node and measure of everything below each node.
struct Rooted {
  std::vector<int> parent_arc;
  std::vector<double> below;  // measure of arcs strictly inside the subtree of each node
  std::vector<int> order;     // preorder
};

Rooted root_at(const ReebTree& tree, int root) {
  const std::size_t n = tree.nodes().size();
  Rooted r;
  r.parent_arc.assign(n, -1);
  r.below.assign(n, 0.0);
  std::vector<char> seen(n, 0);
  std::vector<int> stack{root};
  seen[root] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    r.order.push_back(v);
    for (int a : tree.incident(v)) {
      const int w = tree.other_end(a, v);
      if (seen[w]) continue;
      seen[w] = 1;
      r.parent_arc[w] = a;
      stack.push_back(w);
    }
  }
  for (auto it = r.order.rbegin(); it != r.order.rend(); ++it) {
    const int v = *it;
    const int a = r.parent_arc[v];
    if (a < 0) continue;
    const int p = tree.other_end(a, v);
    r.below[p] += r.below[v] + tree.arcs()[a].measure;
  }
  return r;
}

}  // namespace

TreeLocation median(const ReebTree& tree) {
  if (tree.nodes().empty()) throw PreconditionError("median: empty tree");
  const int root = tree.bottom_root() >= 0 ? tree.bottom_root() : 0;
  const Rooted r = root_at(tree, root);
  const double total = r.below[root];
  const double half = 0.5 * total;
  const double eps = 1e-14 * std::max(1.0, total);

  int v = root;
  int came_from = -1;
  for (std::size_t guard = 0; guard <= tree.nodes().size(); ++guard) {
    int heavy = -1;
    double heavy_measure = 0.0;
    for (int a : tree.incident(v)) {
      if (a == came_from) continue;
      const int w = tree.other_end(a, v);
      // measure of the component of T \ {v} through arc a
      const double side = (r.parent_arc[w] == a) ? r.below[w] + tree.arcs()[a].measure : total - r.below[v];
      if (side > half + eps) {
        heavy = a;
        heavy_measure = side;
      }
    }
    if (heavy < 0) return {{v, -1, 0.0}, tree.nodes()[v].value};

    const ReebArc& arc = tree.arcs()[heavy];
    const int w = tree.other_end(heavy, v);
    const double beyond = heavy_measure - arc.measure;
    if (beyond >= half - eps) {
      came_from = heavy;
      v = w;
      continue;
    }
    // inside the arc: the part between the point and w must carry half - beyond
    const double need = half - beyond;
    const double u = (w == arc.hi) ? arc.parameter_for(arc.measure - need) : arc.parameter_for(need);
    TreePoint p{-1, heavy, u};
    return {p, tree.value_at(p)};
  }
  throw ConvergenceError("median: descent did not terminate");
}

StemReport stem_report(const ReebTree& tree) {
  if (tree.bottom_root() < 0 || tree.top_root() < 0) throw PreconditionError("stem: roots not set");
  const Rooted r = root_at(tree, tree.bottom_root());
  StemReport rep;
  rep.total = r.below[tree.bottom_root()];

  std::vector<int> path{tree.top_root()};
  while (path.back() != tree.bottom_root()) {
    const int a = r.parent_arc[path.back()];
    if (a < 0) throw PreconditionError("stem: roots are disconnected");
    path.push_back(tree.other_end(a, path.back()));
  }
  std::reverse(path.begin(), path.end());
  rep.nodes = path;

  const double norm = rep.total > 0.0 ? rep.total : 1.0;
  double m = 0.0;
  for (std::size_t k = 0; k < path.size(); ++k) {
    const int v = path[k];
    const int next_arc = (k + 1 < path.size()) ? r.parent_arc[path[k + 1]] : -1;
    const int prev_arc = r.parent_arc[v];
    double hanging = 0.0;
    for (int a : tree.incident(v)) {
      if (a == next_arc || a == prev_arc) continue;
      const int w = tree.other_end(a, v);
      const double b = tree.arcs()[a].measure + r.below[w];
      // Tie-breaking on flat rows leaves measure-zero min/saddle pairs; they are not branches.
      if (b > 0.0) rep.branches.push_back({v, a, m / norm, b});
      hanging += b;
    }
    if (hanging > 0.0) rep.gaps.push_back({m / norm, (m + hanging) / norm, hanging, v});
    m += hanging;
    if (next_arc < 0) break;
    const ReebArc& arc = tree.arcs()[next_arc];
    const double start = m;
    m += arc.measure;
    rep.steps.push_back({next_arc, arc.lo == v, start / norm, m / norm});
  }
  return rep;
}

PercentileResult percentile(const ReebTree& tree, double h) {
  return percentile(tree, stem_report(tree), h);
}

PercentileResult percentile(const ReebTree& tree, const StemReport& rep, double h) {
  if (!(h >= 0.0 && h <= 1.0)) throw PreconditionError("percentile: h must lie in [0, 1]");
  const double eps = 1e-12;
  PercentileResult out;
  auto at_node = [&](int v, bool attachment) {
    out.location = TreeLocation{{v, -1, 0.0}, tree.nodes()[v].value};
    out.at_attachment = attachment;
    return out;
  };

  std::size_t gap_index = 0;
  for (std::size_t k = 0; k < rep.nodes.size(); ++k) {
    const int v = rep.nodes[k];
    const Gap* gap = (gap_index < rep.gaps.size() && rep.gaps[gap_index].node == v) ? &rep.gaps[gap_index] : nullptr;
    const double start = gap ? gap->h_start : (k == 0 ? 0.0 : rep.steps[k - 1].h_end);
    if (h <= start + eps) return at_node(v, gap != nullptr && std::abs(h - start) <= eps);
    if (gap) {
      ++gap_index;
      if (h < gap->h_end - eps) {
        out.gap = *gap;
        return out;
      }
      if (h <= gap->h_end + eps) return at_node(v, true);
    }
    if (k >= rep.steps.size()) break;
    const StemStep& step = rep.steps[k];
    if (h < step.h_end - eps) {
      const ReebArc& arc = tree.arcs()[step.arc];
      const double along = (h - step.h_start) * rep.total;
      const double u = step.forward ? arc.parameter_for(along) : arc.parameter_for(arc.measure - along);
      TreePoint p{-1, step.arc, u};
      out.location = TreeLocation{p, tree.value_at(p)};
      return out;
    }
  }
  return at_node(rep.nodes.back(), false);
}

std::string tree_to_json(const ReebTree& tree) {
  nlohmann::json j;
  j["nodes"] = nlohmann::json::array();
  for (std::size_t k = 0; k < tree.nodes().size(); ++k) {
    const auto& n = tree.nodes()[k];
    j["nodes"].push_back({{"id", k}, {"value", n.value}, {"kind", to_string(n.kind)}});
  }
  j["edges"] = nlohmann::json::array();
  for (const auto& a : tree.arcs()) j["edges"].push_back({{"lo", a.lo}, {"hi", a.hi}, {"measure", a.measure}});
  j["roots"] = {{"bottom", tree.bottom_root()}, {"top", tree.top_root()}};
  j["total_measure"] = tree.total_measure();
  if (tree.bottom_root() >= 0 && tree.top_root() >= 0) {
    const StemReport rep = stem_report(tree);
    j["stem"] = rep.nodes;
    j["gaps"] = nlohmann::json::array();
    for (const auto& g : rep.gaps)
      j["gaps"].push_back({{"h_start", g.h_start}, {"h_end", g.h_end}, {"measure", g.measure}, {"node", g.node}});
    j["branches"] = nlohmann::json::array();
    for (const auto& b : rep.branches)
      j["branches"].push_back({{"node", b.node}, {"arc", b.arc}, {"h_attach", b.h_attach}, {"measure", b.measure}});
  }
  return j.dump(2);
}

std::string tree_to_dot(const ReebTree& tree) {
  std::ostringstream os;
  os << "graph reeb {\n  node [shape=circle];\n";
  for (std::size_t k = 0; k < tree.nodes().size(); ++k) {
    const auto& n = tree.nodes()[k];
    os << "  n" << k << " [label=\"" << to_string(n.kind) << "\\n" << n.value << "\"];\n";
  }
  for (const auto& a : tree.arcs())
    os << "  n" << a.lo << " -- n" << a.hi << " [label=\"" << a.measure << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace annulus
