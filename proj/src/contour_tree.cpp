// Contour tree of a piecewise-linear field on the triangulated annulus grid.
//
// Vertices: the two collapsed boundary circles (ids 0 and V-1) plus the
// interior grid nodes. Join and split trees are swept with union-find over the
// (value, id) order, merged leaf by leaf into the augmented contour tree, and
// regular vertices are then contracted into superarcs. Arc measures come from
// distributing each triangle's area over the tree path its level segments
// trace, slab by slab in value.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "annulus/errors.hpp"
#include "annulus/reeb.hpp"

namespace annulus {

namespace {

class GridComplex {
public:
  explicit GridComplex(const ScalarField& f)
      : f_(f), nt_(f.ntheta()), ns_(f.ns()), count_(2 + nt_ * (ns_ - 2)) {}

  std::size_t count() const { return count_; }
  std::size_t bottom() const { return 0; }
  std::size_t top() const { return count_ - 1; }

  std::size_t id(std::size_t i, std::size_t j) const {
    if (j == 0) return bottom();
    if (j + 1 == ns_) return top();
    return 1 + (j - 1) * nt_ + (i % nt_);
  }

  double value(std::size_t v) const {
    if (v == bottom()) return f_.at(0, 0);
    if (v == top()) return f_.at(0, ns_ - 1);
    const std::size_t k = v - 1;
    return f_.at(k % nt_, k / nt_ + 1);
  }

  template <class Fn>
  void for_each_neighbor(std::size_t v, Fn&& fn) const {
    if (v == bottom() || v == top()) {
      const std::size_t j = (v == bottom()) ? 1 : ns_ - 2;
      for (std::size_t i = 0; i < nt_; ++i) fn(id(i, j));
      return;
    }
    const std::size_t k = v - 1;
    const std::size_t i = k % nt_, j = k / nt_ + 1;
    const std::size_t ip = (i + 1) % nt_, im = (i + nt_ - 1) % nt_;
    std::array<std::size_t, 6> nb{id(ip, j), id(im, j), id(i, j + 1), id(i, j - 1), id(ip, j + 1), id(im, j - 1)};
    // a root can appear twice when j touches a boundary row
    std::sort(nb.begin(), nb.end());
    const auto end = std::unique(nb.begin(), nb.end());
    for (auto it = nb.begin(); it != end; ++it) fn(*it);
  }

private:
  const ScalarField& f_;
  std::size_t nt_, ns_, count_;
};

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  std::vector<std::size_t> parent;
};

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

// Augmented merge tree: parent pointer towards the sweep direction, child
// count and xor of children (the xor names the only child once one remains).
struct MergeTree {
  std::vector<std::size_t> parent;
  std::vector<std::size_t> children;
  std::vector<std::size_t> child_xor;
};

MergeTree sweep(const GridComplex& g, const std::vector<std::size_t>& order, const std::vector<std::size_t>& rank,
                bool ascending) {
  const std::size_t n = g.count();
  MergeTree t{std::vector<std::size_t>(n, kNone), std::vector<std::size_t>(n, 0), std::vector<std::size_t>(n, 0)};
  DisjointSets sets(n);
  std::vector<std::size_t> head(n);  // most recently swept vertex of each component
  std::vector<std::size_t> seen_mark(n, kNone);
  for (std::size_t step = 0; step < n; ++step) {
    const std::size_t v = ascending ? order[step] : order[n - 1 - step];
    seen_mark[v] = v;  // components already merged into v resolve to v itself
    g.for_each_neighbor(v, [&](std::size_t u) {
      const bool swept = ascending ? rank[u] < rank[v] : rank[u] > rank[v];
      if (!swept) return;
      const std::size_t c = sets.find(u);
      if (seen_mark[c] == v) return;
      seen_mark[c] = v;
      const std::size_t h = head[c];
      t.parent[h] = v;
      ++t.children[v];
      t.child_xor[v] ^= h;
      sets.parent[c] = v;
    });
    sets.parent[v] = sets.find(v);
    head[sets.find(v)] = v;
  }
  return t;
}

// Removes leaf v from `own` and splices it out of `other`, where it has exactly one child.
void detach(MergeTree& own, MergeTree& other, std::size_t v) {
  const std::size_t p = own.parent[v];
  if (p != kNone) {
    --own.children[p];
    own.child_xor[p] ^= v;
  }
  const std::size_t q = other.parent[v];
  if (other.children[v] == 1) {
    const std::size_t c = other.child_xor[v];
    other.parent[c] = q;
    if (q != kNone) other.child_xor[q] ^= v ^ c;
  } else if (q != kNone) {
    --other.children[q];
    other.child_xor[q] ^= v;
  }
  own.parent[v] = kNone;
  other.parent[v] = kNone;
}

std::vector<std::pair<std::size_t, std::size_t>> contour_edges(const GridComplex& g,
                                                               const std::vector<std::size_t>& order,
                                                               const std::vector<std::size_t>& rank) {
  MergeTree join = sweep(g, order, rank, true);
  MergeTree split = sweep(g, order, rank, false);
  const std::size_t n = g.count();
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  edges.reserve(n - 1);
  std::vector<std::size_t> queue;
  std::vector<char> done(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    if (join.children[v] + split.children[v] == 1) queue.push_back(v);
  std::size_t remaining = n;
  while (remaining > 1) {
    if (queue.empty()) throw ConvergenceError("contour tree: merge stalled");
    const std::size_t v = queue.back();
    queue.pop_back();
    if (done[v] || join.children[v] + split.children[v] != 1) continue;
    std::size_t w;
    if (join.children[v] == 0) {  // lower leaf
      w = join.parent[v];
      detach(join, split, v);
    } else {  // upper leaf
      w = split.parent[v];
      detach(split, join, v);
    }
    if (w == kNone) throw ConvergenceError("contour tree: leaf without parent");
    edges.emplace_back(v, w);
    done[v] = 1;
    --remaining;
    if (join.children[w] + split.children[w] == 1) queue.push_back(w);
  }
  return edges;
}

// Location of a grid vertex in the superarc tree.
struct Location {
  int node = -1;
  int arc = -1;
  double value = 0.0;
};

struct Segment {
  int arc;
  double from;
  double to;
};

class PathFinder {
public:
  PathFinder(const ReebTree& tree, int root) : tree_(tree) {
    const std::size_t n = tree.nodes().size();
    parent_arc_.assign(n, -1);
    depth_.assign(n, 0);
    std::vector<int> stack{root};
    std::vector<char> seen(n, 0);
    seen[root] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int a : tree.incident(v)) {
        const int w = tree.other_end(a, v);
        if (seen[w]) continue;
        seen[w] = 1;
        parent_arc_[w] = a;
        depth_[w] = depth_[v] + 1;
        stack.push_back(w);
      }
    }
    child_.resize(tree.arcs().size());
    for (std::size_t a = 0; a < tree.arcs().size(); ++a) {
      const auto& arc = tree.arcs()[a];
      child_[a] = (parent_arc_[arc.lo] == static_cast<int>(a)) ? arc.lo : arc.hi;
    }
  }

  void path(Location a, Location b, std::vector<Segment>& out) const {
    out.clear();
    std::vector<Segment> tail;
    for (int guard = 0; guard < 1 << 24; ++guard) {
      if (a.arc >= 0 && a.arc == b.arc) {
        out.push_back({a.arc, a.value, b.value});
        break;
      }
      if (a.arc < 0 && b.arc < 0 && a.node == b.node) break;
      if (a.arc >= 0 && b.arc < 0 && touches(a.arc, b.node)) {
        out.push_back({a.arc, a.value, b.value});
        break;
      }
      if (b.arc >= 0 && a.arc < 0 && touches(b.arc, a.node)) {
        tail.push_back({b.arc, b.value, a.value});
        break;
      }
      const double da = depth(a), db = depth(b);
      if (da >= db) climb(a, out);
      if (db >= da) climb(b, tail);
    }
    out.insert(out.end(), tail.rbegin(), tail.rend());
  }

private:
  bool touches(int arc, int node) const { return tree_.arcs()[arc].lo == node || tree_.arcs()[arc].hi == node; }
  double depth(const Location& l) const {
    return l.arc >= 0 ? depth_[child_[l.arc]] - 0.5 : static_cast<double>(depth_[l.node]);
  }
  int parent_node(int arc) const { return tree_.other_end(arc, child_[arc]); }
  void climb(Location& l, std::vector<Segment>& segs) const {
    const int arc = l.arc >= 0 ? l.arc : parent_arc_[l.node];
    if (arc < 0) throw ConvergenceError("contour tree: path walked past the root");
    const int up = parent_node(arc);
    segs.push_back({arc, l.value, tree_.nodes()[up].value});
    l = {up, -1, tree_.nodes()[up].value};
  }

  const ReebTree& tree_;
  std::vector<int> parent_arc_;
  std::vector<int> depth_;
  std::vector<int> child_;
};

// Measure of arc `a` strictly below field value t (plus the arc's full mass at
// or above its upper value). Flat arcs carry all their mass at one value.
double mass_below_value(const ReebTree& t, const ReebArc& a, double value) {
  const double lo = t.nodes()[a.lo].value, hi = t.nodes()[a.hi].value;
  if (value >= hi) return a.measure;
  if (value <= lo) return 0.0;
  return a.measure_below((value - lo) / (hi - lo));
}

// Tie-breaking on flat regions (plateaus, the zero set around a compact
// support) leaves leaf arcs whose two ends carry the same value. They are
// not level-set features: their whole mass sits at the attachment value. This
// pass folds such leaves into the node they hang from, repeatedly, then
// splices out the nodes left with one arc up and one arc down. Folded mass is
// added to a remaining arc at that node's end, so every percentile is unchanged.
ReebTree fold_flat_leaves(const ReebTree& tree) {
  const std::size_t nn = tree.nodes().size(), na = tree.arcs().size();
  std::vector<bool> arc_alive(na, true);
  std::vector<std::size_t> degree(nn);
  std::vector<double> pending(nn, 0.0);
  for (std::size_t v = 0; v < nn; ++v) degree[v] = tree.incident(static_cast<int>(v)).size();
  auto is_root = [&](int v) { return v == tree.bottom_root() || v == tree.top_root(); };

  std::vector<int> queue;
  for (std::size_t v = 0; v < nn; ++v)
    if (degree[v] == 1 && !is_root(static_cast<int>(v))) queue.push_back(static_cast<int>(v));
  while (!queue.empty()) {
    const int v = queue.back();
    queue.pop_back();
    if (degree[v] != 1 || is_root(v)) continue;
    int arc = -1;
    for (int a : tree.incident(v))
      if (arc_alive[a]) arc = a;
    const int w = tree.other_end(arc, v);
    if (tree.nodes()[w].value != tree.nodes()[v].value) continue;
    arc_alive[arc] = false;
    --degree[v];
    --degree[w];
    pending[w] += pending[v] + tree.arcs()[arc].measure;
    pending[v] = 0.0;
    if (degree[w] == 1 && !is_root(w)) queue.push_back(w);
  }

  // Splice chains lo -> v -> hi through unit up/down nodes, innermost first.
  struct Piece {
    int lo, hi;
    std::vector<std::pair<const ReebArc*, double>> parts;  // arcs with the mass pending at their top
  };
  std::vector<int> kept(nn, -1);
  std::vector<bool> spliced(nn, false);
  auto alive_arcs = [&](int v) {
    std::vector<int> out;
    for (int a : tree.incident(v))
      if (arc_alive[a]) out.push_back(a);
    return out;
  };
  for (std::size_t v = 0; v < nn; ++v) {
    const int vi = static_cast<int>(v);
    if (degree[v] == 0 && !is_root(vi)) continue;
    if (degree[v] == 2 && !is_root(vi)) {
      const auto arcs = alive_arcs(vi);
      const bool one_each = (tree.arcs()[arcs[0]].hi == vi) != (tree.arcs()[arcs[1]].hi == vi);
      if (one_each) {
        spliced[v] = true;
        continue;
      }
    }
    kept[v] = 1;
  }

  ReebTree out;
  for (std::size_t v = 0; v < nn; ++v) {
    if (kept[v] < 0) continue;
    const auto& node = tree.nodes()[v];
    NodeKind kind = node.kind;
    if (!is_root(static_cast<int>(v)) && kind == NodeKind::Saddle) {
      std::size_t up = 0, down = 0;
      for (int a : alive_arcs(static_cast<int>(v))) (tree.arcs()[a].lo == static_cast<int>(v) ? up : down)++;
      if (up == 0) kind = NodeKind::Maximum;
      else if (down == 0) kind = NodeKind::Minimum;
    }
    kept[v] = out.add_node(node.value, kind, node.vertex);
  }

  std::vector<bool> used(na, false);
  std::vector<bool> pending_placed(nn, false);
  for (std::size_t start = 0; start < na; ++start) {
    if (!arc_alive[start] || used[start] || spliced[tree.arcs()[start].lo]) continue;
    // Walk upward from a kept lower end through spliced nodes.
    Piece piece{tree.arcs()[start].lo, -1, {}};
    int a = static_cast<int>(start);
    for (;;) {
      used[a] = true;
      const int top = tree.arcs()[a].hi;
      const double mass_at_top = spliced[top] ? pending[top] : 0.0;
      piece.parts.emplace_back(&tree.arcs()[a], mass_at_top);
      if (!spliced[top]) {
        piece.hi = top;
        break;
      }
      int next = -1;
      for (int b : alive_arcs(top))
        if (b != a) next = b;
      a = next;
    }

    // Mass folded into kept end nodes goes on the first arc found at that end.
    double extra_lo = 0.0, extra_hi = 0.0;
    if (!pending_placed[piece.lo] && pending[piece.lo] > 0.0) {
      extra_lo = pending[piece.lo];
      pending_placed[piece.lo] = true;
    }
    if (!pending_placed[piece.hi] && pending[piece.hi] > 0.0) {
      extra_hi = pending[piece.hi];
      pending_placed[piece.hi] = true;
    }

    const double vlo = tree.nodes()[piece.lo].value, vhi = tree.nodes()[piece.hi].value;
    std::size_t bins = 0;
    double total = extra_lo + extra_hi;
    for (const auto& [arc, m] : piece.parts) {
      bins += arc->cumulative.size() - 1;
      total += arc->measure + m;
    }
    bins = std::clamp<std::size_t>(bins, 8, 4096);
    ReebArc merged;
    merged.lo = kept[piece.lo];
    merged.hi = kept[piece.hi];
    merged.measure = total;
    merged.cumulative.assign(bins + 1, 0.0);
    if (piece.parts.size() == 1 && extra_lo == 0.0 && extra_hi == 0.0) {
      merged.cumulative = piece.parts[0].first->cumulative;
    } else {
      for (std::size_t k = 1; k < bins; ++k) {
        const double u = static_cast<double>(k) / static_cast<double>(bins);
        double m = extra_lo;
        if (vhi > vlo) {
          const double value = vlo + u * (vhi - vlo);
          for (const auto& [arc, top_mass] : piece.parts) {
            m += mass_below_value(tree, *arc, value);
            if (value >= tree.nodes()[arc->hi].value) m += top_mass;
          }
        } else {
          m += u * (total - extra_lo - extra_hi);
        }
        merged.cumulative[k] = std::min(m, total);
      }
      merged.cumulative.back() = total;
    }
    out.add_arc(std::move(merged));
  }
  out.set_roots(kept[tree.bottom_root()], kept[tree.top_root()]);
  return out;
}

}  // namespace

ReebTree build_reeb_tree(const ScalarField& field) {
  if (!field.boundary_rows_constant())
    throw PreconditionError("reeb: boundary rows must be level sets (constant)");
  const GridComplex g(field);
  const std::size_t n = g.count();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> values(n);
  for (std::size_t v = 0; v < n; ++v) values[v] = g.value(v);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return values[a] < values[b] || (values[a] == values[b] && a < b);
  });
  std::vector<std::size_t> rank(n);
  for (std::size_t k = 0; k < n; ++k) rank[order[k]] = k;

  const auto edges = contour_edges(g, order, rank);
  std::vector<std::vector<std::size_t>> adj(n);
  for (const auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }

  // Superarc nodes: roots, and every vertex that is not up-one/down-one.
  ReebTree tree;
  std::vector<int> node_of(n, -1);
  for (std::size_t v = 0; v < n; ++v) {
    const bool root = (v == g.bottom() || v == g.top());
    std::size_t up = 0, down = 0;
    for (std::size_t w : adj[v]) (rank[w] > rank[v] ? up : down)++;
    if (!root && up == 1 && down == 1) continue;
    NodeKind kind = NodeKind::Saddle;
    if (v == g.bottom()) kind = NodeKind::BottomRoot;
    else if (v == g.top()) kind = NodeKind::TopRoot;
    else if (up == 0) kind = NodeKind::Maximum;
    else if (down == 0) kind = NodeKind::Minimum;
    node_of[v] = tree.add_node(values[v], kind, static_cast<long>(v));
  }

  // Trace superarcs through regular vertices.
  std::vector<int> arc_of(n, -1);
  std::vector<std::size_t> arc_vertex_count;
  std::vector<std::pair<int, int>> arc_ends;
  for (std::size_t v = 0; v < n; ++v) {
    if (node_of[v] < 0) continue;
    for (std::size_t first : adj[v]) {
      if (node_of[first] >= 0) {
        if (rank[first] > rank[v]) {
          arc_ends.emplace_back(node_of[v], node_of[first]);
          arc_vertex_count.push_back(0);
        }
        continue;
      }
      if (arc_of[first] >= 0) continue;
      const int id = static_cast<int>(arc_ends.size());
      std::size_t prev = v, cur = first, regular = 0;
      while (node_of[cur] < 0) {
        arc_of[cur] = id;
        ++regular;
        const std::size_t next = (adj[cur][0] == prev) ? adj[cur][1] : adj[cur][0];
        prev = cur;
        cur = next;
      }
      arc_ends.emplace_back(node_of[v], node_of[cur]);
      arc_vertex_count.push_back(regular);
    }
  }

  std::vector<ReebArc> arcs(arc_ends.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) {
    auto [x, y] = arc_ends[a];
    const auto vx = static_cast<std::size_t>(tree.nodes()[x].vertex);
    const auto vy = static_cast<std::size_t>(tree.nodes()[y].vertex);
    if (rank[vx] > rank[vy]) std::swap(x, y);
    arcs[a].lo = x;
    arcs[a].hi = y;
    const std::size_t bins = std::clamp<std::size_t>(2 * (arc_vertex_count[a] + 1), 8, 2048);
    arcs[a].cumulative.assign(bins + 1, 0.0);  // per-bin mass until the prefix sum below
  }
  for (auto& a : arcs) tree.add_arc(a);
  tree.set_roots(node_of[g.bottom()], node_of[g.top()]);

  // Mass deposition, bin k of arc a accumulates into cumulative[k + 1].
  std::vector<std::vector<double>> mass(arcs.size());
  for (std::size_t a = 0; a < arcs.size(); ++a) mass[a].assign(arcs[a].cumulative.size() - 1, 0.0);

  auto location = [&](std::size_t v) {
    if (node_of[v] >= 0) return Location{node_of[v], -1, values[v]};
    return Location{-1, arc_of[v], values[v]};
  };
  auto deposit_range = [&](int arc, double t1, double t2, double a, double b, double c, double area) {
    const ReebArc& A = tree.arcs()[arc];
    const double lo = tree.nodes()[A.lo].value, hi = tree.nodes()[A.hi].value;
    if (t1 > t2) std::swap(t1, t2);
    if (!(t2 > t1) || !(hi > lo)) return;
    auto& bins = mass[arc];
    const auto nb = static_cast<double>(bins.size());
    const double width = (hi - lo) / nb;
    auto k0 = static_cast<std::size_t>(std::clamp(std::floor((t1 - lo) / width), 0.0, nb - 1));
    auto k1 = static_cast<std::size_t>(std::clamp(std::floor((t2 - lo) / width), 0.0, nb - 1));
    double prev = triangle_sublevel_area(a, b, c, area, t1);
    for (std::size_t k = k0; k <= k1; ++k) {
      const double edge = (k == k1) ? t2 : std::min(t2, lo + width * static_cast<double>(k + 1));
      const double cur = triangle_sublevel_area(a, b, c, area, edge);
      bins[k] += cur - prev;
      prev = cur;
    }
  };
  auto deposit_point = [&](int arc, double t, double area) {
    const ReebArc& A = tree.arcs()[arc];
    const double lo = tree.nodes()[A.lo].value, hi = tree.nodes()[A.hi].value;
    auto& bins = mass[arc];
    if (!(hi > lo)) {
      for (double& b : bins) b += area / static_cast<double>(bins.size());
      return;
    }
    const auto nb = static_cast<double>(bins.size());
    const auto k = static_cast<std::size_t>(std::clamp(std::floor((t - lo) / (hi - lo) * nb), 0.0, nb - 1));
    bins[k] += area;
  };

  const PathFinder paths(tree, tree.bottom_root());
  std::vector<Segment> segs;
  const double tri_area = 0.5 * field.cell_area();
  const std::size_t nt = field.ntheta();
  auto process = [&](std::size_t p, std::size_t q, std::size_t r) {
    std::array<std::size_t, 3> v{p, q, r};
    std::sort(v.begin(), v.end(), [&](std::size_t x, std::size_t y) { return rank[x] < rank[y]; });
    const double a = values[v[0]], b = values[v[1]], c = values[v[2]];
    paths.path(location(v[0]), location(v[2]), segs);
    if (segs.empty()) throw ConvergenceError("contour tree: empty triangle path");
    if (!(c > a)) {
      deposit_point(segs.front().arc, a, tri_area);
      return;
    }
    for (const auto& s : segs) deposit_range(s.arc, s.from, s.to, a, b, c, tri_area);
  };
  for (std::size_t j = 0; j + 1 < field.ns(); ++j) {
    for (std::size_t i = 0; i < nt; ++i) {
      const std::size_t i1 = (i + 1) % nt;
      const std::size_t v00 = g.id(i, j), v10 = g.id(i1, j), v01 = g.id(i, j + 1), v11 = g.id(i1, j + 1);
      // triangles keep their full area even when two corners share a root
      process(v00, v10, v11);
      process(v00, v11, v01);
    }
  }

  ReebTree out;
  for (const auto& node : tree.nodes()) out.add_node(node.value, node.kind, node.vertex);
  for (std::size_t a = 0; a < tree.arcs().size(); ++a) {
    ReebArc arc = tree.arcs()[a];
    arc.cumulative[0] = 0.0;
    for (std::size_t k = 0; k < mass[a].size(); ++k) arc.cumulative[k + 1] = arc.cumulative[k] + mass[a][k];
    arc.measure = arc.cumulative.back();
    out.add_arc(std::move(arc));
  }
  out.set_roots(tree.bottom_root(), tree.top_root());
  return fold_flat_leaves(out);
}

}  // namespace annulus
