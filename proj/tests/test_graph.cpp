#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "moddiv/graph.hpp"
#include "moddiv/oracles.hpp"

using namespace moddiv;

TEST(Graph, EdgeIdsFollowSortedEndpointsNotInputOrder) {
  const Graph a = Graph::from_edges(4, {{3, 2}, {0, 1}, {2, 0}});
  const Graph b = Graph::from_edges(4, {{0, 2}, {2, 3}, {1, 0}});
  ASSERT_EQ(a.edge_count(), 3u);
  for (EdgeId e = 0; e < 3; ++e) EXPECT_EQ(a.edge(e), b.edge(e));
  EXPECT_EQ(a.edge(0), (Edge{0, 1}));
  EXPECT_EQ(a.edge(1), (Edge{0, 2}));
  EXPECT_EQ(a.edge(2), (Edge{2, 3}));
}

TEST(Graph, DropsLoopsAndDuplicatesWithCounts) {
  LoadReport r;
  const std::vector<std::pair<VertexId, VertexId>> raw{{0, 1}, {1, 0}, {0, 0}, {1, 2}, {1, 2}};
  const Graph g = Graph::from_edges(3, raw, {}, &r);
  EXPECT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(r.duplicate_edges, 2u);
  EXPECT_EQ(r.self_loops, 1u);
}

TEST(Graph, RejectsOutOfRangeEndpointAndLabelMismatch) {
  EXPECT_THROW(Graph::from_edges(2, {{0, 2}}), std::invalid_argument);
  const std::vector<std::pair<VertexId, VertexId>> raw{{0, 1}};
  EXPECT_THROW(Graph::from_edges(2, raw, {"a"}), std::invalid_argument);
}

TEST(Graph, DegreeSumSymmetryAndSortedAdjacencyOnRandomGraphs) {
  oracle::Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Graph g = oracle::random_graph(1 + i, 0.3, rng);
    std::size_t sum = 0;
    for (VertexId v = 0; v < g.vertex_count(); ++v) {
      sum += g.degree(v);
      const auto adj = g.neighbors(v);
      EXPECT_EQ(adj.size(), g.degree(v));
      for (std::size_t k = 0; k < adj.size(); ++k) {
        if (k > 0) EXPECT_LT(adj[k - 1].neighbor, adj[k].neighbor);
        EXPECT_NE(adj[k].neighbor, v);
        // the reverse incidence carries the same edge id
        const auto back = g.find_edge(adj[k].neighbor, v);
        ASSERT_TRUE(back.has_value());
        EXPECT_EQ(*back, adj[k].edge);
        EXPECT_EQ(g.edge(adj[k].edge).other(v), adj[k].neighbor);
      }
    }
    EXPECT_EQ(sum, 2 * g.edge_count());
  }
}

TEST(Graph, LabelsDefaultToIds) {
  const Graph g = fixtures::triangle();
  EXPECT_FALSE(g.has_labels());
  EXPECT_EQ(g.label(2), "2");
  const std::vector<std::pair<VertexId, VertexId>> raw{{0, 1}};
  const Graph h = Graph::from_edges(2, raw, {"x", "y"});
  EXPECT_EQ(h.label(1), "y");
}

TEST(Graph, FindEdge) {
  const Graph g = fixtures::barbell();
  EXPECT_EQ(g.find_edge(3, 2), std::optional<EdgeId>(fixtures::kBarbellBridge));
  EXPECT_FALSE(g.find_edge(0, 5).has_value());
  EXPECT_FALSE(g.find_edge(1, 1).has_value());
}

TEST(VertexSubset, SortsDeduplicatesAndChecksRange) {
  const VertexSubset s(5, {4, 1, 4, 2});
  EXPECT_EQ(s.size(), 3u);
  EXPECT_EQ(s.members().front(), 1u);
  EXPECT_TRUE(s.contains(4));
  EXPECT_FALSE(s.contains(0));
  EXPECT_FALSE(s.contains(99));
  EXPECT_THROW(VertexSubset(3, {3}), std::invalid_argument);
}

TEST(WorkingGraph, RemoveRestoreKeepsDegreesInStep) {
  const Graph g = fixtures::k4();
  WorkingGraph wg(g);
  wg.remove(0);
  wg.remove(5);
  EXPECT_TRUE(wg.is_removed(0));
  EXPECT_EQ(wg.degree(0), 2u);
  EXPECT_EQ(wg.degree(3), 2u);
  EXPECT_EQ(wg.removed_edges().size(), 2u);
  EXPECT_THROW(wg.remove(0), std::logic_error);
  wg.restore(0);
  EXPECT_EQ(wg.degree(0), 3u);
  EXPECT_THROW(wg.restore(0), std::logic_error);
  wg.restore_all();
  for (VertexId v = 0; v < 4; ++v) EXPECT_EQ(wg.degree(v), 3u);
  EXPECT_TRUE(wg.removed_edges().empty());
}

TEST(WorkingGraph, SubsetDegreeAndInternalEdges) {
  const Graph g = fixtures::barbell();
  WorkingGraph wg(g);
  const VertexSubset left(6, {0, 1, 2});
  EXPECT_EQ(wg.degree(2, left), 2u);
  EXPECT_EQ(wg.degree(2), 3u);
  EXPECT_EQ(wg.internal_edges(left), (std::vector<EdgeId>{0, 1, 2}));
  wg.remove(1);
  EXPECT_EQ(wg.internal_edges(left), (std::vector<EdgeId>{0, 2}));
}

TEST(Components, TriangleStaysConnectedAfterOneRemoval) {
  const Graph g = fixtures::triangle();
  WorkingGraph wg(g);
  EXPECT_EQ(connected_components(wg).count, 1u);
  wg.remove(0);
  EXPECT_EQ(connected_components(wg).count, 1u);
}

TEST(Components, PathSplitsAfterRemovingFirstEdge) {
  const Graph g = fixtures::path3();
  WorkingGraph wg(g);
  wg.remove(*g.find_edge(0, 1));
  const auto c = connected_components(wg);
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(c.labels[0], 0u);
  EXPECT_EQ(c.labels[1], 1u);
  EXPECT_EQ(c.labels[2], 1u);
}

TEST(Components, SubsetRestrictsTraversal) {
  const Graph g = fixtures::barbell();
  WorkingGraph wg(g);
  const VertexSubset s(6, {0, 1, 4, 5});
  const auto c = connected_components(wg, &s);
  EXPECT_EQ(c.count, 2u);
  EXPECT_EQ(c.labels[2], kNoComponent);
  EXPECT_EQ(c.labels[4], 1u);
  const VertexSubset empty(6, {});
  EXPECT_THROW(connected_components(wg, &empty), std::invalid_argument);
}

TEST(Components, MatchesUnionFindOnRandomGraphsUpTo200) {
  oracle::Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = oracle::uniform_int(rng, 1, 200);
    const Graph g = oracle::random_graph(n, 1.5 / static_cast<double>(n), rng);
    EXPECT_EQ(connected_components(WorkingGraph(g)).labels, oracle::components_naive(g));
  }
}

TEST(Components, ConnectedQuery) {
  const Graph g = fixtures::barbell();
  WorkingGraph wg(g);
  const VertexSubset all = VertexSubset::all(6);
  EXPECT_TRUE(connected(wg, all, 0, 5));
  wg.remove(fixtures::kBarbellBridge);
  EXPECT_FALSE(connected(wg, all, 0, 5));
  EXPECT_TRUE(connected(wg, all, 3, 5));
}
