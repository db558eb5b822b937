#pragma once

// Modularity of a vertex partition, the per-community statistics that make it
// cheap to update, and the exact Q change of moving one vertex.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "moddiv/graph.hpp"

namespace moddiv {

using CommunityId = std::uint32_t;

struct CommunityStats {
  /// Twice the number of edges with both endpoints inside.
  std::int64_t internal = 0;
  /// Sum of member degrees.
  std::int64_t total_degree = 0;
  std::size_t size = 0;

  friend bool operator==(const CommunityStats&, const CommunityStats&) = default;
};

/// Assignment of every vertex to a community plus per-community statistics.
///
/// Community ids index a slot table. A community emptied by a move keeps its
/// slot with size 0 (retired) and is skipped by live-community queries, so
/// ids stay stable while a run is in progress. compacted() renumbers live
/// communities densely in order of their smallest member.
class Partition {
 public:
  Partition() = default;

  /// Partition from per-vertex ids; ids need not be dense.
  static Partition from_assignment(const Graph& g, std::vector<CommunityId> assignment) {
    if (assignment.size() != g.vertex_count()) {
      throw std::invalid_argument("partition size does not match vertex count");
    }
    Partition p;
    CommunityId slots = 0;
    for (CommunityId c : assignment) slots = std::max<CommunityId>(slots, c + 1);
    p.assignment_ = std::move(assignment);
    p.stats_ = recount(g, p.assignment_, slots);
    return p;
  }

  static Partition single(const Graph& g) {
    return from_assignment(g, std::vector<CommunityId>(g.vertex_count(), 0));
  }

  static Partition singletons(const Graph& g) {
    std::vector<CommunityId> a(g.vertex_count());
    for (std::size_t v = 0; v < a.size(); ++v) a[v] = static_cast<CommunityId>(v);
    return from_assignment(g, std::move(a));
  }

  /// Statistics recomputed from scratch, one entry per slot.
  static std::vector<CommunityStats> recount(const Graph& g,
                                             const std::vector<CommunityId>& assignment,
                                             std::size_t slots) {
    std::vector<CommunityStats> stats(slots);
    for (VertexId v = 0; v < assignment.size(); ++v) {
      auto& s = stats[assignment[v]];
      ++s.size;
      s.total_degree += static_cast<std::int64_t>(g.degree(v));
    }
    for (const Edge& e : g.edges()) {
      if (assignment[e.u] == assignment[e.v]) stats[assignment[e.u]].internal += 2;
    }
    return stats;
  }

  std::size_t vertex_count() const { return assignment_.size(); }
  CommunityId community_of(VertexId v) const { return assignment_[v]; }
  const std::vector<CommunityId>& assignment() const { return assignment_; }

  std::size_t slot_count() const { return stats_.size(); }
  const CommunityStats& stats(CommunityId c) const { return stats_[c]; }
  const std::vector<CommunityStats>& all_stats() const { return stats_; }
  bool is_live(CommunityId c) const { return c < stats_.size() && stats_[c].size > 0; }

  std::size_t community_count() const {
    return static_cast<std::size_t>(
        std::count_if(stats_.begin(), stats_.end(), [](const CommunityStats& s) { return s.size > 0; }));
  }

  std::vector<VertexId> members(CommunityId c) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < assignment_.size(); ++v) {
      if (assignment_[v] == c) out.push_back(v);
    }
    return out;
  }

  /// Live community ids ordered by smallest member.
  std::vector<CommunityId> live_by_smallest_member() const {
    std::vector<CommunityId> out;
    std::vector<char> seen(stats_.size(), 0);
    for (CommunityId c : assignment_) {
      if (seen[c] == 0) {
        seen[c] = 1;
        out.push_back(c);
      }
    }
    return out;
  }

  /// Opens an empty slot for a new community.
  CommunityId add_community() {
    stats_.push_back({});
    return static_cast<CommunityId>(stats_.size() - 1);
  }

  /// Moves every vertex of `vertices` into `to` and recounts the affected
  /// communities. Used for splitting; single-vertex moves go through
  /// apply_move for O(degree) updates.
  void reassign(const Graph& g, const std::vector<VertexId>& vertices, CommunityId to) {
    for (VertexId v : vertices) assignment_[v] = to;
    stats_ = recount(g, assignment_, stats_.size());
  }

  /// Same partition with live communities renumbered 0..k-1 by smallest member.
  Partition compacted() const {
    std::vector<CommunityId> remap(stats_.size(), std::numeric_limits<CommunityId>::max());
    CommunityId next = 0;
    Partition p;
    p.assignment_.resize(assignment_.size());
    for (VertexId v = 0; v < assignment_.size(); ++v) {
      auto& r = remap[assignment_[v]];
      if (r == std::numeric_limits<CommunityId>::max()) r = next++;
      p.assignment_[v] = r;
    }
    p.stats_.resize(next);
    for (CommunityId c = 0; c < stats_.size(); ++c) {
      if (remap[c] != std::numeric_limits<CommunityId>::max()) p.stats_[remap[c]] = stats_[c];
    }
    return p;
  }

  /// Groups of vertex ids, one per live community, ordered by smallest member.
  std::vector<std::vector<VertexId>> groups() const {
    const Partition p = compacted();
    std::vector<std::vector<VertexId>> out(p.stats_.size());
    for (VertexId v = 0; v < p.assignment_.size(); ++v) out[p.assignment_[v]].push_back(v);
    return out;
  }

  /// True when both partitions group vertices identically.
  bool same_grouping(const Partition& other) const {
    return compacted().assignment_ == other.compacted().assignment_;
  }

 private:
  friend struct MoveAccess;
  std::vector<CommunityId> assignment_;
  std::vector<CommunityStats> stats_;
};

inline void check_partition(const Graph& g, const Partition& p) {
  if (p.vertex_count() != g.vertex_count()) {
    throw std::invalid_argument("partition covers " + std::to_string(p.vertex_count()) +
                                " vertices, graph has " + std::to_string(g.vertex_count()));
  }
  if (g.edge_count() == 0) throw std::invalid_argument("modularity of a graph without edges");
}

/// Q from community sums: sum_c E_c / 2|E| - sum_c (D_c / 2|E|)^2.
inline double modularity_q(const Graph& g, const Partition& p) {
  check_partition(g, p);
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  double internal = 0.0;
  double expected = 0.0;
  for (const CommunityStats& s : p.all_stats()) {
    internal += static_cast<double>(s.internal);
    const auto d = static_cast<double>(s.total_degree);
    expected += d * d;
  }
  return internal / two_m - expected / (two_m * two_m);
}

/// Q from the pairwise definition, summing (A_vw - d_v d_w / 2|E|) over
/// ordered same-community pairs. Quadratic; used to check modularity_q.
inline double modularity_q_pairwise(const Graph& g, const Partition& p) {
  check_partition(g, p);
  const std::size_t n = g.vertex_count();
  const double two_m = 2.0 * static_cast<double>(g.edge_count());
  double sum = 0.0;
  for (VertexId v = 0; v < n; ++v) {
    for (VertexId w = 0; w < n; ++w) {
      if (p.community_of(v) != p.community_of(w)) continue;
      const double a = g.find_edge(v, w) ? 1.0 : 0.0;
      sum += a - static_cast<double>(g.degree(v)) * static_cast<double>(g.degree(w)) / two_m;
    }
  }
  return sum / two_m;
}

/// A candidate move of one vertex from its community into another.
struct MoveContext {
  VertexId vertex = kNoVertex;
  CommunityId from = 0;
  CommunityId to = 0;
  /// Edges from the vertex to the rest of `from`.
  std::int64_t edges_to_from = 0;
  /// Edges from the vertex to `to`.
  std::int64_t edges_to_dest = 0;
  std::int64_t degree = 0;
};

inline MoveContext make_move_context(const Graph& g, const Partition& p, VertexId v,
                                     CommunityId to) {
  MoveContext ctx;
  ctx.vertex = v;
  ctx.from = p.community_of(v);
  ctx.to = to;
  ctx.degree = static_cast<std::int64_t>(g.degree(v));
  for (const Incidence& inc : g.neighbors(v)) {
    const CommunityId c = p.community_of(inc.neighbor);
    if (c == ctx.from) ++ctx.edges_to_from;
    if (c == to) ++ctx.edges_to_dest;
  }
  return ctx;
}

/// Exact change in Q when ctx.vertex moves from A = ctx.from to B = ctx.to:
///
///   (E_VB - E_VA) / |E| + (D_A D_V - D_V^2 - D_B D_V) / (2 |E|^2)
///
/// where D_A still includes the vertex and D_B does not.
inline double move_q(const MoveContext& ctx, const CommunityStats& from, const CommunityStats& to,
                     std::size_t total_edges) {
  if (ctx.from == ctx.to) throw std::invalid_argument("move_q: source equals destination");
  const auto m = static_cast<double>(total_edges);
  const auto dv = static_cast<double>(ctx.degree);
  const auto da = static_cast<double>(from.total_degree);
  const auto db = static_cast<double>(to.total_degree);
  return static_cast<double>(ctx.edges_to_dest - ctx.edges_to_from) / m +
         (da * dv - dv * dv - db * dv) / (2.0 * m * m);
}

inline double move_q(const Partition& p, const MoveContext& ctx, std::size_t total_edges) {
  const CommunityStats empty{};
  const CommunityStats& to = ctx.to < p.slot_count() ? p.stats(ctx.to) : empty;
  return move_q(ctx, p.stats(ctx.from), to, total_edges);
}

struct MoveAccess {
  static void apply(Partition& p, const MoveContext& ctx) {
    if (ctx.from == ctx.to) throw std::invalid_argument("apply_move: source equals destination");
    if (p.assignment_.at(ctx.vertex) != ctx.from) {
      throw std::invalid_argument("apply_move: vertex is not in the source community");
    }
    while (p.stats_.size() <= ctx.to) p.stats_.push_back({});
    auto& a = p.stats_[ctx.from];
    auto& b = p.stats_[ctx.to];
    a.internal -= 2 * ctx.edges_to_from;
    b.internal += 2 * ctx.edges_to_dest;
    a.total_degree -= ctx.degree;
    b.total_degree += ctx.degree;
    --a.size;
    ++b.size;
    p.assignment_[ctx.vertex] = ctx.to;
  }
};

/// Applies a move in place with O(1) statistics updates. A community left
/// empty is retired.
inline void apply_move_in_place(Partition& p, const MoveContext& ctx) { MoveAccess::apply(p, ctx); }

inline Partition apply_move(Partition p, const MoveContext& ctx) {
  MoveAccess::apply(p, ctx);
  return p;
}

}  // namespace moddiv
