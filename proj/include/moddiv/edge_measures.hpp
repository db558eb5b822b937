#pragma once

// Per-edge scores that drive the divisive step: edge betweenness (remove the
// highest) and the edge clustering coefficient for triangles and 4-cycles
// (remove the lowest).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <thread>
#include <vector>

#include "moddiv/graph.hpp"

namespace moddiv {

enum class MeasureKind { betweenness, clustering_g3, clustering_g4 };

inline constexpr std::string_view to_string(MeasureKind k) {
  switch (k) {
    case MeasureKind::betweenness: return "betweenness";
    case MeasureKind::clustering_g3: return "clustering_g3";
    case MeasureKind::clustering_g4: return "clustering_g4";
  }
  return "?";
}

inline constexpr bool is_clustering(MeasureKind k) { return k != MeasureKind::betweenness; }

/// Score of an edge whose clustering denominator is zero. Compares above
/// every finite score.
inline constexpr double kInfiniteScore = std::numeric_limits<double>::infinity();

/// Relative tolerance under which two betweenness scores count as tied.
inline constexpr double kBetweennessTieTolerance = 1e-9;

/// Scores indexed by edge id. Edges outside the scored subset, or removed,
/// carry no score.
class EdgeScoreTable {
 public:
  EdgeScoreTable(MeasureKind kind, std::size_t edge_count)
      : kind_(kind), scores_(edge_count, 0.0), scored_(edge_count, 0) {}

  MeasureKind kind() const { return kind_; }
  std::size_t edge_count() const { return scores_.size(); }

  bool scored(EdgeId e) const { return scored_[e] != 0; }
  double score(EdgeId e) const {
    if (scored_[e] == 0) throw std::out_of_range("edge has no score");
    return scores_[e];
  }
  void set(EdgeId e, double s) {
    scores_[e] = s;
    scored_[e] = 1;
  }
  void clear(EdgeId e) {
    scores_[e] = 0.0;
    scored_[e] = 0;
  }

  std::vector<EdgeId> scored_edges() const {
    std::vector<EdgeId> out;
    for (EdgeId e = 0; e < scored_.size(); ++e) {
      if (scored_[e] != 0) out.push_back(e);
    }
    return out;
  }

  friend bool operator==(const EdgeScoreTable&, const EdgeScoreTable&) = default;

 private:
  MeasureKind kind_;
  std::vector<double> scores_;
  std::vector<char> scored_;
};

namespace detail {

// Live internal adjacency of a subset, re-indexed to 0..s-1.
struct LocalGraph {
  std::vector<VertexId> global;           // local -> global vertex
  std::vector<std::uint32_t> offsets;     // CSR offsets, size s+1
  std::vector<std::uint32_t> targets;     // local neighbor
  std::vector<EdgeId> edge_ids;           // global edge id per incidence
  std::vector<std::uint32_t> local_edge;  // dense internal edge index per incidence
  std::vector<EdgeId> edges;              // dense internal edge index -> global id

  LocalGraph(const WorkingGraph& g, const VertexSubset& within) {
    const std::size_t n = g.base().vertex_count();
    std::vector<std::uint32_t> local(n, std::numeric_limits<std::uint32_t>::max());
    global.assign(within.members().begin(), within.members().end());
    for (std::uint32_t i = 0; i < global.size(); ++i) local[global[i]] = i;
    edges = g.internal_edges(within);
    std::vector<std::uint32_t> dense(g.base().edge_count(), 0);
    for (std::uint32_t i = 0; i < edges.size(); ++i) dense[edges[i]] = i;
    offsets.assign(global.size() + 1, 0);
    for (std::uint32_t i = 0; i < global.size(); ++i) {
      g.for_each_neighbor(global[i], [&](const Incidence& inc) {
        if (within.contains(inc.neighbor)) {
          targets.push_back(local[inc.neighbor]);
          edge_ids.push_back(inc.edge);
          local_edge.push_back(dense[inc.edge]);
        }
      });
      offsets[i + 1] = static_cast<std::uint32_t>(targets.size());
    }
  }

  std::size_t size() const { return global.size(); }
};

// Single-source shortest-path counting and dependency accumulation for
// sources in [first, last), adding into `acc` (indexed by dense edge).
inline void accumulate_betweenness(const LocalGraph& lg, std::size_t first, std::size_t last,
                                   std::vector<double>& acc) {
  const std::size_t s = lg.size();
  std::vector<std::int32_t> dist(s);
  std::vector<double> sigma(s), delta(s);
  std::vector<std::uint32_t> order;
  order.reserve(s);
  for (std::size_t src = first; src < last; ++src) {
    std::fill(dist.begin(), dist.end(), -1);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    order.clear();
    dist[src] = 0;
    sigma[src] = 1.0;
    order.push_back(static_cast<std::uint32_t>(src));
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::uint32_t v = order[head];
      for (std::uint32_t k = lg.offsets[v]; k < lg.offsets[v + 1]; ++k) {
        const std::uint32_t w = lg.targets[k];
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      const std::uint32_t w = order[i];
      for (std::uint32_t k = lg.offsets[w]; k < lg.offsets[w + 1]; ++k) {
        const std::uint32_t v = lg.targets[k];
        if (dist[v] == dist[w] - 1) {
          const double c = sigma[v] / sigma[w] * (1.0 + delta[w]);
          acc[lg.local_edge[k]] += c;
          delta[v] += c;
        }
      }
    }
  }
}

inline void require_nonempty(const VertexSubset& within, const char* op) {
  if (within.empty()) throw std::invalid_argument(std::string(op) + ": empty vertex subset");
}

// Sources are split into a fixed number of blocks whatever the thread count,
// and block sums are added in block order, so results are bit-identical on
// any machine.
inline constexpr std::size_t kBetweennessBlocks = 16;
inline constexpr std::size_t kParallelThreshold = 96;

}  // namespace detail

/// Exact edge betweenness over live edges inside `within`: for each edge, the
/// sum over unordered vertex pairs of the fraction of shortest paths using it.
inline EdgeScoreTable edge_betweenness(const WorkingGraph& g, const VertexSubset& within) {
  detail::require_nonempty(within, "edge_betweenness");
  const detail::LocalGraph lg(g, within);
  const std::size_t s = lg.size();
  const std::size_t blocks = std::min(detail::kBetweennessBlocks, s);
  std::vector<std::vector<double>> partial(blocks, std::vector<double>(lg.edges.size(), 0.0));
  auto run_block = [&](std::size_t b) {
    detail::accumulate_betweenness(lg, b * s / blocks, (b + 1) * s / blocks, partial[b]);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (s >= detail::kParallelThreshold && hw > 1) {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> workers;
    const std::size_t nthreads = std::min<std::size_t>(hw, blocks);
    for (std::size_t t = 0; t < nthreads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t b = next++; b < blocks; b = next++) run_block(b);
      });
    }
  } else {
    for (std::size_t b = 0; b < blocks; ++b) run_block(b);
  }

  EdgeScoreTable table(MeasureKind::betweenness, g.base().edge_count());
  for (std::size_t i = 0; i < lg.edges.size(); ++i) {
    double sum = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) sum += partial[b][i];
    // Every unordered pair was visited from both ends.
    table.set(lg.edges[i], sum / 2.0);
  }
  return table;
}

namespace detail {

// Scratch state for clustering scores: neighbor marks sized to the graph.
class ClusteringScorer {
 public:
  ClusteringScorer(const WorkingGraph& g, const VertexSubset& within)
      : g_(g), within_(within), mark_(g.base().vertex_count(), 0) {}

  double g3(EdgeId e) {
    const Edge& ed = g_.base().edge(e);
    const std::size_t ki = g_.degree(ed.u, within_);
    const std::size_t kj = g_.degree(ed.v, within_);
    const std::size_t denom = std::min(ki, kj) - 1;
    if (denom == 0) return kInfiniteScore;
    return static_cast<double>(common(ed.u, ed.v) + 1) / static_cast<double>(denom);
  }

  double g4(EdgeId e) {
    const Edge& ed = g_.base().edge(e);
    const std::size_t ki = g_.degree(ed.u, within_);
    const std::size_t kj = g_.degree(ed.v, within_);
    const std::size_t shared = common(ed.u, ed.v);
    const std::size_t max_cycles = (ki - 1) * (kj - 1) - shared;
    if (max_cycles == 0) return kInfiniteScore;
    return static_cast<double>(squares(ed.u, ed.v) + 1) / static_cast<double>(max_cycles);
  }

  /// Triangles through (i, j): live common neighbors inside the subset.
  std::size_t common(VertexId i, VertexId j) {
    mark_neighbors(i, 1);
    std::size_t z = 0;
    each_live(j, [&](VertexId w) { z += mark_[w]; });
    mark_neighbors(i, 0);
    return z;
  }

  /// 4-cycles i-j-x-y-i through (i, j).
  std::size_t squares(VertexId i, VertexId j) {
    mark_neighbors(i, 1);
    std::size_t z = 0;
    each_live(j, [&](VertexId x) {
      if (x == i) return;
      std::size_t hits = 0;
      each_live(x, [&](VertexId y) { hits += mark_[y]; });
      // j neighbors both x and i but cannot close a 4-cycle through itself.
      z += hits - 1;
    });
    mark_neighbors(i, 0);
    return z;
  }

 private:
  template <class F>
  void each_live(VertexId v, F&& f) {
    g_.for_each_neighbor(v, [&](const Incidence& inc) {
      if (within_.contains(inc.neighbor)) f(inc.neighbor);
    });
  }
  void mark_neighbors(VertexId v, char value) {
    each_live(v, [&](VertexId w) { mark_[w] = value; });
  }

  const WorkingGraph& g_;
  const VertexSubset& within_;
  std::vector<char> mark_;
};

inline EdgeScoreTable clustering_table(MeasureKind kind, const WorkingGraph& g,
                                       const VertexSubset& within) {
  require_nonempty(within, "edge_clustering");
  ClusteringScorer scorer(g, within);
  EdgeScoreTable table(kind, g.base().edge_count());
  for (EdgeId e : g.internal_edges(within)) {
    table.set(e, kind == MeasureKind::clustering_g3 ? scorer.g3(e) : scorer.g4(e));
  }
  return table;
}

}  // namespace detail

/// (triangles through the edge + 1) / min(k_i - 1, k_j - 1), with degrees and
/// triangles counted over live edges inside `within`. A zero denominator
/// scores kInfiniteScore.
inline EdgeScoreTable edge_clustering_g3(const WorkingGraph& g, const VertexSubset& within) {
  return detail::clustering_table(MeasureKind::clustering_g3, g, within);
}

/// (4-cycles through the edge + 1) / ((k_i - 1)(k_j - 1) - common neighbors).
/// The denominator counts the distinct non-shared neighbor pairs that could
/// close a 4-cycle; zero scores kInfiniteScore.
inline EdgeScoreTable edge_clustering_g4(const WorkingGraph& g, const VertexSubset& within) {
  return detail::clustering_table(MeasureKind::clustering_g4, g, within);
}

inline EdgeScoreTable compute_scores(MeasureKind kind, const WorkingGraph& g,
                                     const VertexSubset& within) {
  switch (kind) {
    case MeasureKind::betweenness: return edge_betweenness(g, within);
    case MeasureKind::clustering_g3: return edge_clustering_g3(g, within);
    case MeasureKind::clustering_g4: return edge_clustering_g4(g, within);
  }
  throw std::invalid_argument("unknown measure");
}

/// Scores after `removed_edge` was deleted from `g`. Clustering tables are
/// patched locally (edges touching the removed edge's endpoints for g3, or
/// their neighborhoods for g4); betweenness is recomputed.
inline EdgeScoreTable rescore_after_removal(const EdgeScoreTable& prev, const WorkingGraph& g,
                                            EdgeId removed_edge, const VertexSubset& within) {
  if (prev.kind() == MeasureKind::betweenness) return edge_betweenness(g, within);

  EdgeScoreTable table = prev;
  table.clear(removed_edge);
  const Edge& gone = g.base().edge(removed_edge);
  const std::size_t n = g.base().vertex_count();
  std::vector<char> touched(n, 0);
  touched[gone.u] = touched[gone.v] = 1;
  if (prev.kind() == MeasureKind::clustering_g4) {
    for (VertexId end : {gone.u, gone.v}) {
      g.for_each_neighbor(end, [&](const Incidence& inc) {
        if (within.contains(inc.neighbor)) touched[inc.neighbor] = 1;
      });
    }
  }
  detail::ClusteringScorer scorer(g, within);
  std::vector<char> done(g.base().edge_count(), 0);
  for (VertexId v = 0; v < n; ++v) {
    if (touched[v] == 0 || !within.contains(v)) continue;
    g.for_each_neighbor(v, [&](const Incidence& inc) {
      if (done[inc.edge] != 0 || !within.contains(inc.neighbor)) return;
      done[inc.edge] = 1;
      table.set(inc.edge, prev.kind() == MeasureKind::clustering_g3 ? scorer.g3(inc.edge)
                                                                    : scorer.g4(inc.edge));
    });
  }
  return table;
}

/// The edge the divisive step removes next: the lowest clustering score or
/// the highest betweenness. Ties go to the largest edge id. Empty when no
/// edge is scored.
inline std::optional<EdgeId> select_removal(const EdgeScoreTable& table) {
  std::optional<EdgeId> best;
  double best_score = 0.0;
  if (is_clustering(table.kind())) {
    for (EdgeId e = 0; e < table.edge_count(); ++e) {
      if (!table.scored(e)) continue;
      const double s = table.score(e);
      if (!best || s <= best_score) {
        best = e;
        best_score = s;
      }
    }
    return best;
  }
  for (EdgeId e = 0; e < table.edge_count(); ++e) {
    if (!table.scored(e)) continue;
    const double s = table.score(e);
    if (!best || s > best_score) {
      best_score = s;
      best = e;
    }
  }
  if (!best) return best;
  const double floor = best_score - kBetweennessTieTolerance * std::max(1.0, best_score);
  for (EdgeId e = table.edge_count(); e-- > 0;) {
    if (table.scored(e) && table.score(e) >= floor) return e;
  }
  return best;
}

}  // namespace moddiv
