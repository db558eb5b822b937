#pragma once

// Divisive community detection with modularity refinement.
//
// A community is bisected by repeatedly deleting the edge chosen by the
// configured measure until it falls apart into two pieces. The endpoints of
// deleted edges become borderline vertices, and each borderline vertex is
// then moved to the neighboring community with the largest positive MoveQ.
// A split is kept only if it raises the global Q; otherwise the community is
// final. CCR runs this with the clustering coefficient from the connected
// components of the input; CCR-EBR continues from the CCR result with edge
// betweenness and finishes with one refinement over all borderline vertices.

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "moddiv/edge_measures.hpp"
#include "moddiv/graph.hpp"
#include "moddiv/modularity.hpp"

namespace moddiv {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EngineConfig {
  /// Measure for the first (CCR) phase; CCR-EBR always uses betweenness in
  /// its second phase.
  MeasureKind measure = MeasureKind::clustering_g3;
  /// Upper bound on full passes over the borderline vertices per refinement.
  std::size_t refine_max_passes = 100;
  /// Splits leaving a community smaller than this are rejected.
  std::size_t min_community_size = 1;
  /// A move or split must raise Q by more than this.
  double q_improvement_eps = 1e-12;

  void validate() const {
    if (refine_max_passes < 1) throw ConfigError("refine_max_passes must be at least 1");
    if (min_community_size < 1) throw ConfigError("min_community_size must be at least 1");
    if (!(q_improvement_eps >= 0.0)) throw ConfigError("q_improvement_eps must be non-negative");
  }
};

/// Vertices incident to a deleted inter-community edge. Membership in a
/// particular community follows from the partition, so one flag per vertex
/// represents every community's borderline set at once.
class BorderlineSet {
 public:
  BorderlineSet() = default;
  explicit BorderlineSet(std::size_t vertex_count) : flags_(vertex_count, 0) {}

  void insert(VertexId v) {
    if (flags_[v] == 0) {
      flags_[v] = 1;
      ++size_;
    }
  }
  bool contains(VertexId v) const { return flags_[v] != 0; }
  std::size_t size() const { return size_; }

  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    out.reserve(size_);
    for (VertexId v = 0; v < flags_.size(); ++v) {
      if (flags_[v] != 0) out.push_back(v);
    }
    return out;
  }

  std::vector<VertexId> members_of(CommunityId c, const Partition& p) const {
    std::vector<VertexId> out;
    for (VertexId v = 0; v < flags_.size(); ++v) {
      if (flags_[v] != 0 && p.community_of(v) == c) out.push_back(v);
    }
    return out;
  }

 private:
  std::vector<char> flags_;
  std::size_t size_ = 0;
};

struct Move {
  VertexId vertex = kNoVertex;
  CommunityId from = 0;
  CommunityId to = 0;
  double gain = 0.0;
};

struct Bisection {
  /// The piece holding the community's smallest vertex.
  std::vector<VertexId> first;
  std::vector<VertexId> second;
  std::vector<EdgeId> removed;
  std::vector<double> removed_scores;
};

/// Deletes edges of `community` from `g` one at a time (lowest clustering
/// score or highest betweenness, rescoring after each deletion) until the
/// community is disconnected. Deleted edges stay deleted in `g`; the caller
/// restores them. Endpoints of deleted edges are added to `borderline` when
/// given. A community that is already disconnected splits off the component
/// of its smallest vertex without deletions.
inline Bisection bisect(WorkingGraph& g, const VertexSubset& community, MeasureKind measure,
                        BorderlineSet* borderline = nullptr) {
  if (community.size() < 2) throw std::invalid_argument("bisect: community has fewer than 2 vertices");
  if (g.internal_edges(community).empty()) {
    throw std::invalid_argument("bisect: community has no internal edges");
  }
  Bisection out;
  const VertexId root = community.members().front();
  auto split_by_component = [&] {
    const auto comps = connected_components(g, &community);
    const auto label = comps.labels[root];
    for (VertexId v : community.members()) {
      (comps.labels[v] == label ? out.first : out.second).push_back(v);
    }
  };

  if (connected_components(g, &community).count > 1) {
    split_by_component();
    return out;
  }
  EdgeScoreTable table = compute_scores(measure, g, community);
  for (;;) {
    const auto pick = select_removal(table);
    if (!pick) throw std::logic_error("bisect: ran out of edges before the community split");
    const EdgeId e = *pick;
    out.removed.push_back(e);
    out.removed_scores.push_back(table.score(e));
    g.remove(e);
    const Edge& ed = g.base().edge(e);
    if (borderline != nullptr) {
      borderline->insert(ed.u);
      borderline->insert(ed.v);
    }
    if (!connected(g, community, ed.u, ed.v)) break;
    table = rescore_after_removal(table, g, e, community);
  }
  split_by_component();
  return out;
}

struct RefineResult {
  std::vector<Move> moves;
  std::size_t passes = 0;
};

/// Greedy MoveQ refinement of `p` over the borderline vertices.
///
/// Each pass visits the borderline vertices present at the start of the pass
/// in ascending id. A vertex moves to the adjacent community with the largest
/// MoveQ (smaller id on ties) when that gain exceeds cfg.q_improvement_eps.
/// After a move, the vertex's neighbors left behind in its old community join
/// the borderline. Stops after a pass without moves or after
/// cfg.refine_max_passes passes.
inline RefineResult refine(const Graph& g, Partition& p, BorderlineSet& borderline,
                           const EngineConfig& cfg) {
  RefineResult out;
  const std::size_t m = g.edge_count();
  std::vector<std::pair<CommunityId, std::int64_t>> adjacent;
  while (out.passes < cfg.refine_max_passes) {
    ++out.passes;
    bool moved = false;
    for (VertexId v : borderline.vertices()) {
      const CommunityId from = p.community_of(v);
      adjacent.clear();
      for (const Incidence& inc : g.neighbors(v)) {
        const CommunityId c = p.community_of(inc.neighbor);
        auto it = std::find_if(adjacent.begin(), adjacent.end(),
                               [c](const auto& entry) { return entry.first == c; });
        if (it == adjacent.end()) {
          adjacent.emplace_back(c, 1);
        } else {
          ++it->second;
        }
      }
      std::sort(adjacent.begin(), adjacent.end());
      std::int64_t to_from = 0;
      for (const auto& [c, k] : adjacent) {
        if (c == from) to_from = k;
      }

      std::optional<MoveContext> best;
      double best_gain = 0.0;
      for (const auto& [c, k] : adjacent) {
        if (c == from) continue;
        MoveContext ctx{v, from, c, to_from, k, static_cast<std::int64_t>(g.degree(v))};
        const double gain = move_q(ctx, p.stats(from), p.stats(c), m);
        if (!best || gain > best_gain) {
          best = ctx;
          best_gain = gain;
        }
      }
      if (!best || best_gain <= cfg.q_improvement_eps) continue;

      apply_move_in_place(p, *best);
      out.moves.push_back(Move{v, from, best->to, best_gain});
      moved = true;
      for (const Incidence& inc : g.neighbors(v)) {
        if (p.community_of(inc.neighbor) == from) borderline.insert(inc.neighbor);
      }
    }
    if (!moved) break;
  }
  return out;
}

enum class Phase { ccr, ebr };

inline constexpr std::string_view to_string(Phase p) { return p == Phase::ccr ? "ccr" : "ebr"; }

struct RemoveEvent {
  EdgeId edge;
  VertexId u;
  VertexId v;
  double score;
};

struct MoveEvent {
  Move move;
};

struct SplitEvent {
  CommunityId community;
  CommunityId new_community;
  std::size_t first_size;
  std::size_t second_size;
  std::size_t removals;
  std::size_t moves;
  double q_candidate;
};

/// One entry of the run history. Remove events belong to the split attempt
/// closed by the next accept or reject event; q_after is the global Q once
/// the event has taken effect.
struct Event {
  enum class Type { remove, move, accept, reject };
  Type type;
  Phase phase;
  std::variant<RemoveEvent, MoveEvent, SplitEvent> payload;
  double q_after;
};

inline constexpr std::string_view to_string(Event::Type t) {
  switch (t) {
    case Event::Type::remove: return "remove";
    case Event::Type::move: return "move";
    case Event::Type::accept: return "accept";
    case Event::Type::reject: return "reject";
  }
  return "?";
}

struct DendrogramNode {
  /// Members when the node was created, after that split's refinement. For
  /// leaves this is updated to the final membership when the run ends.
  std::vector<VertexId> members;
  /// For split nodes: members at the moment of the split, and the two pieces
  /// the deletions produced (an exact partition of members_at_split).
  std::vector<VertexId> members_at_split;
  std::vector<VertexId> split_first;
  std::vector<VertexId> split_second;
  /// Refinement moves applied right after this node was split.
  std::vector<Move> moves;
  /// Global Q when the split that created this node completed.
  double q = 0.0;
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  std::optional<Phase> split_phase;
  /// Set when refinement emptied the community this leaf stood for.
  bool retired = false;
};

struct TracePoint {
  double q = 0.0;
  std::size_t communities = 0;
  /// Compacted community id per vertex.
  std::vector<CommunityId> assignment;
};

struct Dendrogram {
  std::vector<DendrogramNode> nodes;
  /// Partition after every accepted split or refinement, in run order.
  std::vector<TracePoint> trace;

  const DendrogramNode& root() const { return nodes.front(); }
  bool empty() const { return nodes.empty(); }
};

/// The partition with the highest Q in the trace; ties go to fewer
/// communities, then to the earlier entry.
inline Partition best_cut(const Dendrogram& d, const Graph& g) {
  if (d.trace.empty()) throw std::invalid_argument("best_cut: empty dendrogram trace");
  std::size_t best = 0;
  for (std::size_t i = 1; i < d.trace.size(); ++i) {
    const auto& t = d.trace[i];
    const auto& b = d.trace[best];
    if (t.q > b.q || (t.q == b.q && t.communities < b.communities)) best = i;
  }
  return Partition::from_assignment(g, d.trace[best].assignment);
}

struct DetectionResult {
  Partition best_partition;
  double best_q = 0.0;
  Dendrogram dendrogram;
  std::vector<Event> history;
};

/// Runs the recursive bisection phases over one graph. Holds the engine
/// state shared by the phases: the current partition, borderline set,
/// dendrogram and history.
class DivisiveEngine {
 public:
  DivisiveEngine(const Graph& g, EngineConfig cfg)
      : g_(g), cfg_(cfg), wg_(g), border_(g.vertex_count()) {
    cfg_.validate();
    if (g.vertex_count() == 0) throw std::invalid_argument("graph has no vertices");
    if (g.edge_count() == 0) throw std::invalid_argument("graph has no edges");

    const auto comps = connected_components(wg_);
    p_ = Partition::from_assignment(g, comps.labels);
    q_ = modularity_q(g, p_);

    DendrogramNode root;
    root.members.resize(g.vertex_count());
    for (VertexId v = 0; v < g.vertex_count(); ++v) root.members[v] = v;
    root.q = 0.0;
    dendro_.nodes.push_back(std::move(root));
    leaf_of_.assign(p_.slot_count(), 0);
    if (comps.count > 1) {
      for (CommunityId c = 0; c < comps.count; ++c) {
        leaf_of_[c] = add_node(0, p_.members(c), q_);
      }
    }
    record_trace();
  }

  /// Bisects communities in FIFO order, starting from the live communities
  /// ordered by smallest member, keeping each split that raises Q.
  void divide(MeasureKind measure, Phase phase) {
    std::deque<CommunityId> queue;
    for (CommunityId c : p_.live_by_smallest_member()) queue.push_back(c);
    while (!queue.empty()) {
      const CommunityId c = queue.front();
      queue.pop_front();
      if (try_split(c, measure, phase)) {
        queue.push_back(c);
        queue.push_back(static_cast<CommunityId>(p_.slot_count() - 1));
      }
    }
  }

  /// Refinement over every borderline vertex collected so far.
  void refine_all(Phase phase) {
    RefineResult rr = refine(g_, p_, border_, cfg_);
    if (rr.moves.empty()) return;
    const double before = q_;
    q_ = modularity_q(g_, p_);
    log_moves(rr.moves, phase, before);
    record_trace();
  }

  double q() const { return q_; }
  const Partition& partition() const { return p_; }

  DetectionResult finish() && {
    for (CommunityId c = 0; c < leaf_of_.size(); ++c) {
      auto& node = dendro_.nodes[leaf_of_[c]];
      if (!node.children.empty()) continue;
      node.members = p_.members(c);
      node.retired = node.members.empty();
    }
    DetectionResult out;
    out.best_partition = best_cut(dendro_, g_);
    out.best_q = modularity_q(g_, out.best_partition);
    out.dendrogram = std::move(dendro_);
    out.history = std::move(history_);
    return out;
  }

 private:
  bool try_split(CommunityId c, MeasureKind measure, Phase phase) {
    if (!p_.is_live(c)) return false;
    const auto& stats = p_.stats(c);
    if (stats.size < 2 || stats.internal == 0) return false;
    if (stats.size < 2 * cfg_.min_community_size) return false;

    const VertexSubset members(g_.vertex_count(), p_.members(c));
    Bisection cut = bisect(wg_, members, measure);
    wg_.restore_all();
    for (std::size_t i = 0; i < cut.removed.size(); ++i) {
      const Edge& e = g_.edge(cut.removed[i]);
      history_.push_back({Event::Type::remove, phase,
                          RemoveEvent{cut.removed[i], e.u, e.v, cut.removed_scores[i]}, q_});
    }

    Partition candidate = p_;
    const CommunityId fresh = candidate.add_community();
    candidate.reassign(g_, cut.second, fresh);
    BorderlineSet border = border_;
    for (EdgeId e : cut.removed) {
      border.insert(g_.edge(e).u);
      border.insert(g_.edge(e).v);
    }
    RefineResult rr = refine(g_, candidate, border, cfg_);
    const double q_candidate = modularity_q(g_, candidate);

    SplitEvent split{c, fresh, cut.first.size(), cut.second.size(), cut.removed.size(),
                     rr.moves.size(), q_candidate};
    // A side emptied by refinement is retired rather than undersized.
    auto allowed = [&](CommunityId id) {
      const std::size_t size = candidate.stats(id).size;
      return size == 0 || size >= cfg_.min_community_size;
    };
    const bool big_enough = allowed(c) && allowed(fresh);
    if (!big_enough || !(q_candidate > q_ + cfg_.q_improvement_eps)) {
      history_.push_back({Event::Type::reject, phase, split, q_});
      return false;
    }

    const double before = q_;
    const std::vector<VertexId> at_split = p_.members(c);
    p_ = std::move(candidate);
    border_ = std::move(border);
    q_ = q_candidate;
    log_moves(rr.moves, phase, before);
    history_.push_back({Event::Type::accept, phase, split, q_});

    const std::size_t parent = leaf_of_[c];
    auto& pn = dendro_.nodes[parent];
    pn.members_at_split = at_split;
    pn.split_first = std::move(cut.first);
    pn.split_second = std::move(cut.second);
    pn.moves = rr.moves;
    pn.split_phase = phase;
    leaf_of_.resize(p_.slot_count(), 0);
    leaf_of_[c] = add_node(parent, p_.members(c), q_);
    leaf_of_[fresh] = add_node(parent, p_.members(fresh), q_);
    record_trace();
    return true;
  }

  // Replays refinement moves on the pre-move partition to log the Q after
  // each one.
  void log_moves(const std::vector<Move>& moves, Phase phase, double q_before) {
    double q = q_before;
    for (const Move& mv : moves) {
      q += mv.gain;
      history_.push_back({Event::Type::move, phase, MoveEvent{mv}, q});
    }
    if (!moves.empty()) history_.back().q_after = q_;
  }

  std::size_t add_node(std::size_t parent, std::vector<VertexId> members, double q) {
    DendrogramNode node;
    node.members = std::move(members);
    node.q = q;
    node.parent = parent;
    dendro_.nodes.push_back(std::move(node));
    const std::size_t id = dendro_.nodes.size() - 1;
    dendro_.nodes[parent].children.push_back(id);
    return id;
  }

  void record_trace() {
    const Partition compact = p_.compacted();
    dendro_.trace.push_back({q_, compact.slot_count(), compact.assignment()});
  }

  const Graph& g_;
  EngineConfig cfg_;
  WorkingGraph wg_;
  Partition p_;
  BorderlineSet border_;
  double q_ = 0.0;
  Dendrogram dendro_;
  std::vector<Event> history_;
  std::vector<std::size_t> leaf_of_;
};

/// Clustering-coefficient divisive detection with MoveQ refinement.
inline DetectionResult run_ccr(const Graph& g, const EngineConfig& cfg) {
  if (!is_clustering(cfg.measure)) {
    throw ConfigError("CCR needs a clustering measure (g3 or g4), not betweenness");
  }
  DivisiveEngine engine(g, cfg);
  engine.divide(cfg.measure, Phase::ccr);
  return std::move(engine).finish();
}

/// CCR followed by betweenness-driven division of every CCR community and a
/// final refinement over all borderline vertices.
inline DetectionResult run_ccr_ebr(const Graph& g, const EngineConfig& cfg) {
  if (!is_clustering(cfg.measure)) {
    throw ConfigError("CCR-EBR needs a clustering measure (g3 or g4) for its first phase");
  }
  DivisiveEngine engine(g, cfg);
  engine.divide(cfg.measure, Phase::ccr);
  engine.divide(MeasureKind::betweenness, Phase::ebr);
  engine.refine_all(Phase::ebr);
  return std::move(engine).finish();
}

}  // namespace moddiv
