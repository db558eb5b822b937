#pragma once

// Simple undirected graphs, the edge-deletion overlay used while dividing
// communities, and connectivity queries over both.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace moddiv {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Thrown for unreadable or malformed input graphs.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Endpoints of an edge, always stored with u < v.
struct Edge {
  VertexId u;
  VertexId v;

  VertexId other(VertexId x) const { return x == u ? v : u; }
  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct Incidence {
  VertexId neighbor;
  EdgeId edge;
};

/// What canonicalization dropped while building a Graph.
struct LoadReport {
  std::size_t duplicate_edges = 0;
  std::size_t self_loops = 0;
  std::vector<std::string> warnings;
};

/// Immutable simple undirected graph.
///
/// Vertex ids are dense (0..n-1). Edge ids are the positions of the edges in
/// lexicographic (u, v) order, so they do not depend on the order in which
/// the input listed them. Adjacency lists are sorted by neighbor id.
class Graph {
 public:
  Graph() = default;

  /// Builds a graph from raw endpoint pairs. Self-loops and repeated pairs
  /// (in either orientation) are dropped and counted in `report`.
  static Graph from_edges(std::size_t n,
                          std::span<const std::pair<VertexId, VertexId>> raw,
                          std::vector<std::string> labels = {},
                          LoadReport* report = nullptr) {
    Graph g;
    g.labels_ = std::move(labels);
    if (!g.labels_.empty() && g.labels_.size() != n) {
      throw std::invalid_argument("label count does not match vertex count");
    }
    std::vector<Edge> edges;
    edges.reserve(raw.size());
    std::size_t loops = 0;
    for (auto [a, b] : raw) {
      if (a >= n || b >= n) {
        throw std::invalid_argument("edge endpoint out of range");
      }
      if (a == b) {
        ++loops;
        continue;
      }
      edges.push_back(Edge{std::min(a, b), std::max(a, b)});
    }
    std::sort(edges.begin(), edges.end());
    const auto last = std::unique(edges.begin(), edges.end());
    const auto duplicates = static_cast<std::size_t>(edges.end() - last);
    edges.erase(last, edges.end());
    if (report != nullptr) {
      report->self_loops += loops;
      report->duplicate_edges += duplicates;
    }

    g.edges_ = std::move(edges);
    g.offsets_.assign(n + 1, 0);
    for (const Edge& e : g.edges_) {
      ++g.offsets_[e.u + 1];
      ++g.offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.incidences_.resize(2 * g.edges_.size());
    std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
    for (EdgeId id = 0; id < g.edges_.size(); ++id) {
      const Edge& e = g.edges_[id];
      g.incidences_[fill[e.u]++] = Incidence{e.v, id};
      g.incidences_[fill[e.v]++] = Incidence{e.u, id};
    }
    for (std::size_t v = 0; v < n; ++v) {
      std::sort(g.incidences_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v]),
                g.incidences_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[v + 1]),
                [](const Incidence& x, const Incidence& y) { return x.neighbor < y.neighbor; });
    }
    return g;
  }

  static Graph from_edges(std::size_t n,
                          std::initializer_list<std::pair<VertexId, VertexId>> raw) {
    std::vector<std::pair<VertexId, VertexId>> copy(raw);
    return from_edges(n, copy);
  }

  std::size_t vertex_count() const { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t edge_count() const { return edges_.size(); }

  std::span<const Incidence> neighbors(VertexId v) const {
    return {incidences_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }

  /// Label for output; the decimal vertex id when the input had none.
  std::string label(VertexId v) const {
    return labels_.empty() ? std::to_string(v) : labels_[v];
  }
  bool has_labels() const { return !labels_.empty(); }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const {
    if (a == b) return std::nullopt;
    if (degree(a) > degree(b)) std::swap(a, b);
    const auto adj = neighbors(a);
    const auto it = std::lower_bound(adj.begin(), adj.end(), b,
                                     [](const Incidence& x, VertexId y) { return x.neighbor < y; });
    if (it == adj.end() || it->neighbor != b) return std::nullopt;
    return it->edge;
  }

 private:
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Incidence> incidences_;
  std::vector<std::string> labels_;
};

/// Sorted vertex set with O(1) membership tests.
class VertexSubset {
 public:
  VertexSubset() = default;

  VertexSubset(std::size_t universe, std::vector<VertexId> members)
      : members_(std::move(members)), mask_(universe, 0) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (VertexId v : members_) {
      if (v >= universe) throw std::invalid_argument("subset member out of range");
      mask_[v] = 1;
    }
  }

  static VertexSubset all(std::size_t universe) {
    std::vector<VertexId> members(universe);
    for (std::size_t i = 0; i < universe; ++i) members[i] = static_cast<VertexId>(i);
    return VertexSubset(universe, std::move(members));
  }

  bool contains(VertexId v) const { return v < mask_.size() && mask_[v] != 0; }
  std::span<const VertexId> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  std::size_t universe() const { return mask_.size(); }

 private:
  std::vector<VertexId> members_;
  std::vector<char> mask_;
};

/// A Graph minus a set of deleted edges. Deletions are undone with restore()
/// or restore_all(), which costs O(number removed).
class WorkingGraph {
 public:
  explicit WorkingGraph(const Graph& base)
      : base_(&base), removed_(base.edge_count(), 0), degree_(base.vertex_count()) {
    for (VertexId v = 0; v < base.vertex_count(); ++v) degree_[v] = base.degree(v);
  }

  const Graph& base() const { return *base_; }

  bool is_removed(EdgeId e) const { return removed_[e] != 0; }

  void remove(EdgeId e) {
    if (removed_[e] != 0) throw std::logic_error("edge already removed");
    removed_[e] = 1;
    removed_list_.push_back(e);
    const Edge& ed = base_->edge(e);
    --degree_[ed.u];
    --degree_[ed.v];
  }

  void restore(EdgeId e) {
    if (removed_[e] == 0) throw std::logic_error("edge not removed");
    removed_[e] = 0;
    removed_list_.erase(std::find(removed_list_.begin(), removed_list_.end(), e));
    const Edge& ed = base_->edge(e);
    ++degree_[ed.u];
    ++degree_[ed.v];
  }

  void restore_all() {
    for (EdgeId e : removed_list_) {
      removed_[e] = 0;
      const Edge& ed = base_->edge(e);
      ++degree_[ed.u];
      ++degree_[ed.v];
    }
    removed_list_.clear();
  }

  std::span<const EdgeId> removed_edges() const { return removed_list_; }

  /// Degree counting only live edges.
  std::size_t degree(VertexId v) const { return degree_[v]; }

  /// Degree counting only live edges whose other endpoint is in `within`.
  std::size_t degree(VertexId v, const VertexSubset& within) const {
    std::size_t d = 0;
    for (const Incidence& inc : base_->neighbors(v)) {
      if (removed_[inc.edge] == 0 && within.contains(inc.neighbor)) ++d;
    }
    return d;
  }

  /// Calls f(Incidence) for every live incidence of v.
  template <class F>
  void for_each_neighbor(VertexId v, F&& f) const {
    for (const Incidence& inc : base_->neighbors(v)) {
      if (removed_[inc.edge] == 0) f(inc);
    }
  }

  /// Live edges with both endpoints in `within`, ascending by id.
  std::vector<EdgeId> internal_edges(const VertexSubset& within) const {
    std::vector<EdgeId> out;
    for (VertexId v : within.members()) {
      for (const Incidence& inc : base_->neighbors(v)) {
        if (inc.neighbor > v && removed_[inc.edge] == 0 && within.contains(inc.neighbor)) {
          out.push_back(inc.edge);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  const Graph* base_;
  std::vector<char> removed_;
  std::vector<EdgeId> removed_list_;
  std::vector<std::size_t> degree_;
};

inline constexpr std::uint32_t kNoComponent = std::numeric_limits<std::uint32_t>::max();

struct ComponentLabeling {
  /// Component index per vertex; kNoComponent for vertices outside the subset.
  std::vector<std::uint32_t> labels;
  std::size_t count = 0;
};

/// Connected components over live edges. Components are numbered in order of
/// their smallest vertex.
inline ComponentLabeling connected_components(const WorkingGraph& g,
                                              const VertexSubset* within = nullptr) {
  const std::size_t n = g.base().vertex_count();
  if (within != nullptr && within->empty()) {
    throw std::invalid_argument("connected_components: empty subset");
  }
  ComponentLabeling out;
  out.labels.assign(n, kNoComponent);
  std::vector<VertexId> stack;
  auto visit_from = [&](VertexId root) {
    const auto label = static_cast<std::uint32_t>(out.count++);
    out.labels[root] = label;
    stack.push_back(root);
    while (!stack.empty()) {
      const VertexId v = stack.back();
      stack.pop_back();
      g.for_each_neighbor(v, [&](const Incidence& inc) {
        const VertexId w = inc.neighbor;
        if (out.labels[w] == kNoComponent && (within == nullptr || within->contains(w))) {
          out.labels[w] = label;
          stack.push_back(w);
        }
      });
    }
  };
  if (within == nullptr) {
    for (VertexId v = 0; v < n; ++v) {
      if (out.labels[v] == kNoComponent) visit_from(v);
    }
  } else {
    for (VertexId v : within->members()) {
      if (out.labels[v] == kNoComponent) visit_from(v);
    }
  }
  return out;
}

/// True when b is reachable from a over live edges inside `within`.
inline bool connected(const WorkingGraph& g, const VertexSubset& within, VertexId a, VertexId b) {
  if (a == b) return true;
  std::vector<char> seen(g.base().vertex_count(), 0);
  std::vector<VertexId> stack{a};
  seen[a] = 1;
  while (!stack.empty()) {
    const VertexId v = stack.back();
    stack.pop_back();
    bool found = false;
    g.for_each_neighbor(v, [&](const Incidence& inc) {
      const VertexId w = inc.neighbor;
      if (seen[w] == 0 && within.contains(w)) {
        if (w == b) found = true;
        seen[w] = 1;
        stack.push_back(w);
      }
    });
    if (found) return true;
  }
  return false;
}

}  // namespace moddiv
