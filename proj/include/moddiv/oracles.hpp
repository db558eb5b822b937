#pragma once

// Slow reference implementations and the property suite that checks the
// fast code against them. Nothing here is used by the detection pipeline.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "moddiv/edge_measures.hpp"
#include "moddiv/engine.hpp"
#include "moddiv/graph.hpp"
#include "moddiv/modularity.hpp"

namespace moddiv {

struct OracleFailure {
  std::string input;
  double expected = 0.0;
  double got = 0.0;
};

struct OracleReport {
  OracleReport() = default;
  OracleReport(std::string id, double tol) : name(std::move(id)), tolerance(tol) {}

  std::string name;
  std::size_t cases = 0;
  double max_abs_diff = 0.0;
  double tolerance = 0.0;
  std::vector<OracleFailure> failures;
  /// Failures beyond the stored ones are only counted.
  std::size_t failure_count = 0;

  bool passed() const { return failure_count == 0; }

  void record(const std::string& input, double expected, double got) {
    ++cases;
    // Exact equality covers matching infinities.
    if (expected == got) return;
    const double diff = std::fabs(expected - got);
    max_abs_diff = std::isnan(diff) ? std::numeric_limits<double>::infinity()
                                    : std::max(max_abs_diff, diff);
    if (diff <= tolerance) return;
    fail(input, expected, got);
  }

  void fail(const std::string& input, double expected, double got) {
    if (failures.size() < kStoredFailures) failures.push_back({input, expected, got});
    ++failure_count;
  }

  static constexpr std::size_t kStoredFailures = 20;
};

namespace oracle {

inline constexpr std::size_t kMaxPathEnumerationVertices = 60;
inline constexpr std::size_t kMaxExhaustiveVertices = 10;

/// Short stable tag for a graph: size plus an FNV-1a hash of its edge list.
inline std::string digest(const Graph& g) {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 4; ++i) {
      h ^= (x >> (8 * i)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(g.vertex_count());
  for (const Edge& e : g.edges()) {
    mix(e.u);
    mix(e.v);
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "n=%zu m=%zu #%016llx", g.vertex_count(), g.edge_count(),
                static_cast<unsigned long long>(h));
  return buf;
}

inline bool live_edge(const WorkingGraph& g, VertexId a, VertexId b) {
  const auto e = g.base().find_edge(a, b);
  return e && !g.is_removed(*e);
}

// ---- generators -----------------------------------------------------------

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

/// Erdos-Renyi G(n, p).
inline Graph random_graph(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) {
      if (uniform01(rng) < p) edges.emplace_back(a, b);
    }
  }
  return Graph::from_edges(n, edges);
}

/// G(n, p) plus a random spanning tree, so the result is always connected.
inline Graph random_connected_graph(std::size_t n, double p, Rng& rng) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), VertexId{0});
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t i = 1; i < n; ++i) {
    edges.emplace_back(order[i], order[uniform_int(rng, 0, i - 1)]);
  }
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) {
      if (uniform01(rng) < p) edges.emplace_back(a, b);
    }
  }
  return Graph::from_edges(n, edges);
}

/// Two halves with edge probability p_in inside and p_out across.
inline Graph planted_two_cluster(std::size_t n, double p_in, double p_out, Rng& rng) {
  std::vector<std::pair<VertexId, VertexId>> edges;
  const std::size_t half = n / 2;
  for (VertexId a = 0; a < n; ++a) {
    for (VertexId b = a + 1; b < n; ++b) {
      const bool same = (a < half) == (b < half);
      if (uniform01(rng) < (same ? p_in : p_out)) edges.emplace_back(a, b);
    }
  }
  return Graph::from_edges(n, edges);
}

inline constexpr double kDensities[] = {0.1, 0.3, 0.6};

/// Mix used by the suite: cycles through the three densities and every
/// fourth graph is a planted two-cluster graph.
inline Graph corpus_graph(std::size_t i, std::size_t n, bool connected, Rng& rng) {
  if (i % 4 == 3) {
    Graph g = planted_two_cluster(n, 0.6, 0.05, rng);
    if (!connected || connected_components(WorkingGraph(g)).count == 1) return g;
  }
  const double p = kDensities[i % 3];
  return connected ? random_connected_graph(n, p, rng) : random_graph(n, p, rng);
}

// ---- reference implementations -------------------------------------------

/// Edge betweenness by listing every shortest path of every vertex pair in
/// `within` and crediting each edge on a path with 1 / (number of paths).
inline EdgeScoreTable betweenness_naive(const WorkingGraph& g, const VertexSubset& within) {
  if (within.size() > kMaxPathEnumerationVertices) {
    throw std::invalid_argument("betweenness_naive: subset larger than 60 vertices");
  }
  const Graph& base = g.base();
  const std::size_t n = base.vertex_count();
  std::vector<double> credit(base.edge_count(), 0.0);
  std::vector<long> dist(n);
  std::vector<std::vector<std::pair<VertexId, EdgeId>>> preds(n);
  std::vector<EdgeId> path;
  std::vector<std::vector<EdgeId>> paths;

  std::function<void(VertexId, VertexId)> walk = [&](VertexId s, VertexId v) {
    if (v == s) {
      paths.push_back(path);
      return;
    }
    for (auto [p, e] : preds[v]) {
      path.push_back(e);
      walk(s, p);
      path.pop_back();
    }
  };

  const auto members = within.members();
  for (std::size_t si = 0; si < members.size(); ++si) {
    const VertexId s = members[si];
    std::fill(dist.begin(), dist.end(), -1);
    for (auto& p : preds) p.clear();
    std::vector<VertexId> frontier{s};
    dist[s] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const VertexId v = frontier[head];
      g.for_each_neighbor(v, [&](const Incidence& inc) {
        const VertexId w = inc.neighbor;
        if (!within.contains(w)) return;
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          frontier.push_back(w);
        }
        if (dist[w] == dist[v] + 1) preds[w].emplace_back(v, inc.edge);
      });
    }
    for (std::size_t ti = si + 1; ti < members.size(); ++ti) {
      const VertexId t = members[ti];
      if (dist[t] < 0) continue;
      paths.clear();
      walk(s, t);
      const double share = 1.0 / static_cast<double>(paths.size());
      for (const auto& p : paths) {
        for (EdgeId e : p) credit[e] += share;
      }
    }
  }

  EdgeScoreTable table(MeasureKind::betweenness, base.edge_count());
  for (EdgeId e : g.internal_edges(within)) table.set(e, credit[e]);
  return table;
}

/// Sum of shortest-path lengths over unordered reachable pairs in `within`.
inline double distance_sum(const WorkingGraph& g, const VertexSubset& within) {
  const std::size_t n = g.base().vertex_count();
  double total = 0.0;
  std::vector<long> dist(n);
  for (VertexId s : within.members()) {
    std::fill(dist.begin(), dist.end(), -1);
    std::vector<VertexId> frontier{s};
    dist[s] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
      const VertexId v = frontier[head];
      g.for_each_neighbor(v, [&](const Incidence& inc) {
        if (within.contains(inc.neighbor) && dist[inc.neighbor] < 0) {
          dist[inc.neighbor] = dist[v] + 1;
          frontier.push_back(inc.neighbor);
        }
      });
    }
    for (VertexId t : within.members()) {
      if (t > s && dist[t] > 0) total += static_cast<double>(dist[t]);
    }
  }
  return total;
}

/// Triangles (order 3) or 4-cycles (order 4) through `edge`, by trying
/// every vertex or every ordered vertex pair in `within`.
inline std::size_t cycle_count_naive(const WorkingGraph& g, EdgeId edge, int order,
                                     const VertexSubset& within) {
  if (within.size() > kMaxPathEnumerationVertices) {
    throw std::invalid_argument("cycle_count_naive: more than 60 vertices");
  }
  if (order != 3 && order != 4) throw std::invalid_argument("cycle_count_naive: order must be 3 or 4");
  const Edge& e = g.base().edge(edge);
  const VertexId i = e.u;
  const VertexId j = e.v;
  std::size_t count = 0;
  if (order == 3) {
    for (VertexId w : within.members()) {
      if (w != i && w != j && live_edge(g, i, w) && live_edge(g, j, w)) ++count;
    }
    return count;
  }
  // i - j - x - y - i
  for (VertexId x : within.members()) {
    if (x == i || x == j || !live_edge(g, j, x)) continue;
    for (VertexId y : within.members()) {
      if (y == i || y == j || y == x) continue;
      if (live_edge(g, x, y) && live_edge(g, y, i)) ++count;
    }
  }
  return count;
}

inline std::size_t cycle_count_naive(const WorkingGraph& g, EdgeId edge, int order) {
  return cycle_count_naive(g, edge, order, VertexSubset::all(g.base().vertex_count()));
}

/// Component labels by union-find, renumbered by smallest member.
inline std::vector<std::uint32_t> components_naive(const Graph& g) {
  std::vector<VertexId> parent(g.vertex_count());
  std::iota(parent.begin(), parent.end(), VertexId{0});
  std::function<VertexId(VertexId)> find = [&](VertexId v) {
    return parent[v] == v ? v : parent[v] = find(parent[v]);
  };
  for (const Edge& e : g.edges()) {
    const VertexId a = find(e.u);
    const VertexId b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::uint32_t> label(g.vertex_count(), kNoComponent);
  std::vector<std::uint32_t> root_label(g.vertex_count(), kNoComponent);
  std::uint32_t next = 0;
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    const VertexId r = find(v);
    if (root_label[r] == kNoComponent) root_label[r] = next++;
    label[v] = root_label[r];
  }
  return label;
}

struct ExhaustiveResult {
  Partition partition;
  double q = 0.0;
};

/// Best Q over every set partition of the vertices, scored with the
/// pairwise formula. The first optimum in restricted-growth order wins.
inline ExhaustiveResult exhaustive_best_partition(const Graph& g) {
  const std::size_t n = g.vertex_count();
  if (n > kMaxExhaustiveVertices) throw std::invalid_argument("exhaustive_best_partition: more than 10 vertices");
  if (n == 0) throw std::invalid_argument("exhaustive_best_partition: empty graph");
  std::vector<CommunityId> a(n, 0);
  std::vector<CommunityId> max_prefix(n, 0);
  ExhaustiveResult best;
  bool have = false;
  for (;;) {
    const Partition p = Partition::from_assignment(g, a);
    const double q = modularity_q_pairwise(g, p);
    if (!have || q > best.q) {
      best = {p, q};
      have = true;
    }
    // Next restricted-growth string: a[0] = 0, a[k] <= 1 + max(a[0..k-1]).
    std::size_t k = n;
    while (k-- > 1) {
      if (a[k] <= max_prefix[k - 1]) break;
    }
    if (k == 0 || k >= n) break;
    ++a[k];
    max_prefix[k] = std::max(max_prefix[k - 1], a[k]);
    for (std::size_t r = k + 1; r < n; ++r) {
      a[r] = 0;
      max_prefix[r] = max_prefix[r - 1];
    }
  }
  return best;
}

// ---- suite ----------------------------------------------------------------

struct SuiteOptions {
  std::uint64_t seed = 20240611;
  /// Deliberately corrupts the move gain to prove the harness notices.
  bool flip_moveq_sign = false;
};

inline Partition random_partition(const Graph& g, Rng& rng) {
  const std::size_t n = g.vertex_count();
  const std::size_t k = uniform_int(rng, 1, n);
  std::vector<CommunityId> a(n);
  for (auto& c : a) c = static_cast<CommunityId>(uniform_int(rng, 0, k - 1));
  return Partition::from_assignment(g, a);
}

inline OracleReport check_modularity(const SuiteOptions& opt) {
  OracleReport r("modularity-fast-vs-pairwise", 1e-12);
  Rng rng(opt.seed ^ 0x01);
  for (std::size_t i = 0; i < 1000; ++i) {
    Graph g = corpus_graph(i, uniform_int(rng, 2, 30), false, rng);
    if (g.edge_count() == 0) g = random_connected_graph(g.vertex_count(), 0.1, rng);
    const Partition p = random_partition(g, rng);
    r.record(digest(g), modularity_q_pairwise(g, p), modularity_q(g, p));
  }
  return r;
}

inline OracleReport check_move_q(const SuiteOptions& opt) {
  OracleReport r("moveq-vs-recompute", 1e-12);
  Rng rng(opt.seed ^ 0x02);
  const double sign = opt.flip_moveq_sign ? -1.0 : 1.0;
  for (std::size_t i = 0; r.cases < 10000; ++i) {
    const Graph g = corpus_graph(i, uniform_int(rng, 3, 30), true, rng);
    Partition p = random_partition(g, rng);
    double q = modularity_q_pairwise(g, p);
    for (int step = 0; step < 50; ++step) {
      const auto v = static_cast<VertexId>(uniform_int(rng, 0, g.vertex_count() - 1));
      // Destinations include an unused slot, i.e. a brand-new community.
      const auto to = static_cast<CommunityId>(uniform_int(rng, 0, p.slot_count()));
      if (to == p.community_of(v)) continue;
      const MoveContext ctx = make_move_context(g, p, v, to);
      const double gain = sign * move_q(p, ctx, g.edge_count());
      std::vector<CommunityId> a = p.assignment();
      a[v] = to;
      p = Partition::from_assignment(g, a);
      const double q_after = modularity_q_pairwise(g, p);
      r.record(digest(g) + " move " + std::to_string(v) + "->" + std::to_string(to), q_after - q, gain);
      q = q_after;
    }
  }
  return r;
}

struct BetweennessCase {
  Graph graph;
  std::vector<EdgeId> removed;
  std::vector<VertexId> subset;
};

// Random connected graphs; every other case also deletes a few edges and
// restricts scoring to a random subset, as happens inside a bisection.
inline std::vector<BetweennessCase> betweenness_corpus(std::uint64_t seed) {
  Rng rng(seed ^ 0x03);
  std::vector<BetweennessCase> out;
  for (std::size_t i = 0; i < 200; ++i) {
    BetweennessCase c;
    c.graph = corpus_graph(i, uniform_int(rng, 4, 40), true, rng);
    const std::size_t n = c.graph.vertex_count();
    if (i % 2 == 1) {
      for (EdgeId e = 0; e < c.graph.edge_count(); ++e) {
        if (uniform01(rng) < 0.1) c.removed.push_back(e);
      }
      for (VertexId v = 0; v < n; ++v) {
        if (uniform01(rng) < 0.8) c.subset.push_back(v);
      }
      if (c.subset.empty()) c.subset.push_back(0);
    } else {
      c.subset.resize(n);
      std::iota(c.subset.begin(), c.subset.end(), VertexId{0});
    }
    out.push_back(std::move(c));
  }
  return out;
}

inline std::vector<OracleReport> check_betweenness(const SuiteOptions& opt) {
  OracleReport exact("betweenness-fast-vs-naive", 1e-9);
  OracleReport sum_law("betweenness-sum-law", 1e-9);
  for (const BetweennessCase& c : betweenness_corpus(opt.seed)) {
    WorkingGraph wg(c.graph);
    for (EdgeId e : c.removed) wg.remove(e);
    const VertexSubset within(c.graph.vertex_count(), c.subset);
    const EdgeScoreTable fast = edge_betweenness(wg, within);
    const EdgeScoreTable slow = betweenness_naive(wg, within);
    const std::string tag = digest(c.graph);
    double total = 0.0;
    for (EdgeId e = 0; e < c.graph.edge_count(); ++e) {
      if (fast.scored(e) != slow.scored(e)) {
        exact.fail(tag + " edge " + std::to_string(e) + " scored mismatch", 1, 0);
        continue;
      }
      if (!fast.scored(e)) continue;
      exact.record(tag + " edge " + std::to_string(e), slow.score(e), fast.score(e));
      total += fast.score(e);
    }
    sum_law.record(tag, distance_sum(wg, within), total);
  }
  return {exact, sum_law};
}

inline OracleReport check_incremental_clustering(const SuiteOptions& opt) {
  OracleReport r("clustering-incremental-vs-full", 0.0);
  Rng rng(opt.seed ^ 0x04);
  for (std::size_t i = 0; i < 120; ++i) {
    const Graph g = corpus_graph(i, uniform_int(rng, 3, 40), false, rng);
    if (g.edge_count() == 0) continue;
    const MeasureKind kind = i % 2 == 0 ? MeasureKind::clustering_g3 : MeasureKind::clustering_g4;
    std::vector<VertexId> subset;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      if (i % 3 != 0 || uniform01(rng) < 0.8) subset.push_back(v);
    }
    if (subset.empty()) continue;
    const VertexSubset within(g.vertex_count(), subset);
    WorkingGraph wg(g);
    EdgeScoreTable table = compute_scores(kind, wg, within);
    for (;;) {
      const auto live = wg.internal_edges(within);
      if (live.empty()) break;
      const EdgeId e = live[uniform_int(rng, 0, live.size() - 1)];
      wg.remove(e);
      table = rescore_after_removal(table, wg, e, within);
      const EdgeScoreTable full = compute_scores(kind, wg, within);
      const std::string tag = digest(g) + " " + std::string(to_string(kind)) + " after removing " +
                              std::to_string(e);
      for (EdgeId x = 0; x < g.edge_count(); ++x) {
        const double got = table.scored(x) ? table.score(x) : std::nan("");
        const double want = full.scored(x) ? full.score(x) : std::nan("");
        if (table.scored(x) != full.scored(x)) {
          r.fail(tag + " edge " + std::to_string(x) + " scored mismatch", want, got);
          continue;
        }
        if (table.scored(x)) r.record(tag + " edge " + std::to_string(x), want, got);
      }
    }
  }
  return r;
}

// Scores from the fast tables against the defining formulas evaluated on
// naively counted cycles and degrees.
inline std::vector<OracleReport> check_cycle_counts(const SuiteOptions& opt) {
  OracleReport g3("clustering-g3-vs-cycle-count", 0.0);
  OracleReport g4("clustering-g4-vs-cycle-count", 0.0);
  Rng rng(opt.seed ^ 0x05);
  for (std::size_t i = 0; i < 150; ++i) {
    const Graph g = corpus_graph(i, uniform_int(rng, 3, 30), false, rng);
    if (g.edge_count() == 0) continue;
    WorkingGraph wg(g);
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (uniform01(rng) < 0.15) wg.remove(e);
    }
    const VertexSubset all = VertexSubset::all(g.vertex_count());
    const EdgeScoreTable t3 = edge_clustering_g3(wg, all);
    const EdgeScoreTable t4 = edge_clustering_g4(wg, all);
    auto deg = [&](VertexId v) {
      double d = 0;
      for (VertexId w = 0; w < g.vertex_count(); ++w) d += live_edge(wg, v, w) ? 1 : 0;
      return d;
    };
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
      if (wg.is_removed(e)) continue;
      const Edge& ed = g.edge(e);
      const double ki = deg(ed.u);
      const double kj = deg(ed.v);
      const auto z3 = static_cast<double>(cycle_count_naive(wg, e, 3));
      const auto z4 = static_cast<double>(cycle_count_naive(wg, e, 4));
      const double d3 = std::min(ki, kj) - 1;
      const double d4 = (ki - 1) * (kj - 1) - z3;
      const std::string tag = digest(g) + " edge " + std::to_string(e);
      g3.record(tag, d3 == 0 ? kInfiniteScore : (z3 + 1) / d3, t3.score(e));
      g4.record(tag, d4 == 0 ? kInfiniteScore : (z4 + 1) / d4, t4.score(e));
    }
  }
  return {g3, g4};
}

inline OracleReport check_components(const SuiteOptions& opt) {
  OracleReport r("components-vs-union-find", 0.0);
  Rng rng(opt.seed ^ 0x06);
  for (std::size_t i = 0; i < 100; ++i) {
    const std::size_t n = uniform_int(rng, 1, 200);
    // Sparse enough that most graphs have several components.
    const Graph g = random_graph(n, 1.2 / static_cast<double>(n), rng);
    const auto fast = connected_components(WorkingGraph(g)).labels;
    const auto slow = components_naive(g);
    std::size_t mismatched = 0;
    for (VertexId v = 0; v < n; ++v) mismatched += fast[v] != slow[v] ? 1 : 0;
    r.record(digest(g), 0.0, static_cast<double>(mismatched));
  }
  return r;
}

/// Engine Q never above the exhaustive optimum; within 90% of it on at least
/// 90 of the 100 graphs; equal to it on two fixtures with known optima.
inline OracleReport check_engine_vs_exhaustive(const SuiteOptions& opt) {
  OracleReport r("engine-vs-exhaustive", 1e-12);
  Rng rng(opt.seed ^ 0x07);
  const EngineConfig cfg;
  std::size_t near_optimal = 0;
  std::size_t graphs = 0;
  auto run = [&](const Graph& g, const std::string& tag, bool must_match) {
    const ExhaustiveResult best = exhaustive_best_partition(g);
    bool near = true;
    for (const auto* algo : {"ccr", "ccr-ebr"}) {
      const DetectionResult res = std::string(algo) == "ccr" ? run_ccr(g, cfg) : run_ccr_ebr(g, cfg);
      ++r.cases;
      const double excess = res.best_q - best.q;
      r.max_abs_diff = std::max(r.max_abs_diff, std::max(0.0, excess));
      if (excess > r.tolerance) r.fail(tag + " " + algo + " above optimum", best.q, res.best_q);
      if (must_match && std::fabs(excess) > r.tolerance) {
        r.fail(tag + " " + algo + " misses optimum", best.q, res.best_q);
      }
      if (res.best_q < 0.9 * best.q - r.tolerance) near = false;
    }
    return near;
  };
  for (std::size_t i = 0; i < 100; ++i) {
    const Graph g = corpus_graph(i, uniform_int(rng, 3, 8), true, rng);
    ++graphs;
    if (run(g, digest(g), false)) ++near_optimal;
  }
  if (near_optimal * 10 < graphs * 9) {
    r.fail("fewer than 90% of random graphs within 0.9 of optimum", 0.9 * static_cast<double>(graphs),
           static_cast<double>(near_optimal));
  }
  run(Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}}), "two disjoint triangles", true);
  run(Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}), "barbell", true);
  return r;
}

/// Every check, in a fixed order.
inline std::vector<OracleReport> run_suite(const SuiteOptions& opt = {}) {
  std::vector<OracleReport> out;
  out.push_back(check_modularity(opt));
  out.push_back(check_move_q(opt));
  for (auto& r : check_betweenness(opt)) out.push_back(std::move(r));
  out.push_back(check_incremental_clustering(opt));
  for (auto& r : check_cycle_counts(opt)) out.push_back(std::move(r));
  out.push_back(check_components(opt));
  out.push_back(check_engine_vs_exhaustive(opt));
  return out;
}

}  // namespace oracle
}  // namespace moddiv
