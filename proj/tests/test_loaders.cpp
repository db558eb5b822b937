#include <gtest/gtest.h>

#include <sstream>

#include "fixtures.hpp"
#include "moddiv/loaders.hpp"
#include "moddiv/oracles.hpp"

using namespace moddiv;

namespace {
LoadedGraph edges_from(const std::string& text, EdgeListOptions opt = {}) {
  std::istringstream in(text);
  return parse_edge_list(in, opt);
}
LoadedGraph gml_from(const std::string& text) {
  std::istringstream in(text);
  return parse_gml(in);
}
}  // namespace

TEST(EdgeList, Triangle) {
  const auto lg = edges_from("a b\nb c\na c\n");
  EXPECT_EQ(lg.graph.vertex_count(), 3u);
  EXPECT_EQ(lg.graph.edge_count(), 3u);
  EXPECT_TRUE(lg.report.warnings.empty());
}

TEST(EdgeList, DuplicateAndLoopAreCounted) {
  const auto lg = edges_from("a b\nb a\na a\n");
  EXPECT_EQ(lg.graph.vertex_count(), 2u);
  EXPECT_EQ(lg.graph.edge_count(), 1u);
  EXPECT_EQ(lg.report.duplicate_edges, 1u);
  EXPECT_EQ(lg.report.self_loops, 1u);
  EXPECT_EQ(lg.report.warnings.size(), 2u);
}

TEST(EdgeList, IdsInFirstAppearanceOrderAndLabelsKept) {
  const auto lg = edges_from("zeta alpha\n# comment line\n\nalpha mid\n");
  EXPECT_EQ(lg.graph.label(0), "zeta");
  EXPECT_EQ(lg.graph.label(1), "alpha");
  EXPECT_EQ(lg.graph.label(2), "mid");
}

TEST(EdgeList, DelimiterAndCrlf) {
  EdgeListOptions opt;
  opt.delimiter = ',';
  const auto lg = edges_from("1,2\r\n2,3\r\n", opt);
  EXPECT_EQ(lg.graph.edge_count(), 2u);
  EXPECT_EQ(lg.graph.label(2), "3");
}

TEST(EdgeList, Errors) {
  EXPECT_THROW(edges_from("a b c\n"), InputError);
  EXPECT_THROW(edges_from("a\n"), InputError);
  EXPECT_THROW(edges_from("a a\n"), InputError);  // nothing left
  EXPECT_THROW(edges_from("# only a comment\n"), InputError);
  EXPECT_THROW(load_edge_list("/nonexistent/file.txt"), InputError);
}

TEST(EdgeList, RoundTripIsIdentityOnLabels) {
  oracle::Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const Graph g = oracle::random_connected_graph(3 + i, 0.2, rng);
    std::ostringstream out;
    write_edge_list(out, g);
    const auto back = edges_from(out.str());
    ASSERT_EQ(back.graph.edge_count(), g.edge_count());
    for (const Edge& e : g.edges()) {
      // map labels back to ids in the reloaded graph
      VertexId a = kNoVertex, b = kNoVertex;
      for (VertexId v = 0; v < back.graph.vertex_count(); ++v) {
        if (back.graph.label(v) == g.label(e.u)) a = v;
        if (back.graph.label(v) == g.label(e.v)) b = v;
      }
      EXPECT_TRUE(back.graph.find_edge(a, b).has_value());
    }
  }
}

TEST(Gml, NodesEdgesLabelsAndWarnings) {
  const auto lg = gml_from(R"(Creator "test"
graph [
  directed 1
  node [ id 10 label "ten" value 3 ]
  node [ id 20 ]
  node [ id 30 label "thirty" ]
  edge [ source 10 target 20 weight 2.5 ]
  edge [ source 20 target 10 ]
  edge [ source 30 target 20 ]
]
)");
  EXPECT_EQ(lg.graph.vertex_count(), 3u);
  EXPECT_EQ(lg.graph.edge_count(), 2u);
  EXPECT_EQ(lg.graph.label(0), "ten");
  EXPECT_EQ(lg.graph.label(1), "20");
  EXPECT_EQ(lg.report.duplicate_edges, 1u);
  bool saw_value = false, saw_weight = false;
  for (const auto& w : lg.report.warnings) {
    saw_value = saw_value || w.find("node.value") != std::string::npos;
    saw_weight = saw_weight || w.find("edge.weight") != std::string::npos;
  }
  EXPECT_TRUE(saw_value);
  EXPECT_TRUE(saw_weight);
}

TEST(Gml, UnknownNodeIdNamesIt) {
  try {
    gml_from("graph [ node [ id 1 ] node [ id 2 ] edge [ source 1 target 7 ] ]");
    FAIL() << "expected InputError";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown node id 7"), std::string::npos);
  }
}

TEST(Gml, MalformedInputs) {
  EXPECT_THROW(gml_from("graph [ node [ id 1 ] "), InputError);
  EXPECT_THROW(gml_from("nothing here"), InputError);
  EXPECT_THROW(gml_from("graph [ node [ id 1 ] node [ id 1 ] edge [ source 1 target 1 ] ]"), InputError);
  EXPECT_THROW(gml_from("graph [ node [ label \"x\" ] ]"), InputError);
  EXPECT_THROW(gml_from("graph [ node [ id 1 ] node [ id 2 ] ]"), InputError);  // no edges
}

TEST(Gml, FormatGuess) {
  EXPECT_EQ(guess_format("x/karate.gml"), GraphFormat::gml);
  EXPECT_EQ(guess_format("x/karate.txt"), GraphFormat::edge_list);
}

TEST(Datasets, KarateAndLesmisSizes) {
  const auto dir = fixtures::data_dir();
  if (!std::filesystem::exists(dir / "karate.gml")) GTEST_SKIP() << "karate.gml not in " << dir;
  const auto karate = load_gml(dir / "karate.gml");
  EXPECT_EQ(karate.graph.vertex_count(), 34u);
  EXPECT_EQ(karate.graph.edge_count(), 78u);
  if (!std::filesystem::exists(dir / "lesmis.gml")) GTEST_SKIP() << "lesmis.gml not in " << dir;
  const auto lesmis = load_gml(dir / "lesmis.gml");
  EXPECT_EQ(lesmis.graph.vertex_count(), 77u);
  EXPECT_EQ(lesmis.graph.edge_count(), 254u);
  EXPECT_EQ(lesmis.graph.label(0), "Myriel");
}
