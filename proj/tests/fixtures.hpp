#pragma once

// Small named graphs shared by the test files.

#include <cstdlib>
#include <filesystem>
#include <string>

#include "moddiv/graph.hpp"
#include "moddiv/modularity.hpp"

namespace fixtures {

using moddiv::Graph;

inline Graph triangle() { return Graph::from_edges(3, {{0, 1}, {1, 2}, {0, 2}}); }
inline Graph path3() { return Graph::from_edges(3, {{0, 1}, {1, 2}}); }
inline Graph single_edge() { return Graph::from_edges(2, {{0, 1}}); }
inline Graph star(std::uint32_t leaves) {
  std::vector<std::pair<moddiv::VertexId, moddiv::VertexId>> e;
  for (moddiv::VertexId v = 1; v <= leaves; ++v) e.emplace_back(0, v);
  return Graph::from_edges(leaves + 1, e);
}
inline Graph k4() { return Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}); }
inline Graph cycle(std::uint32_t n) {
  std::vector<std::pair<moddiv::VertexId, moddiv::VertexId>> e;
  for (moddiv::VertexId v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph::from_edges(n, e);
}
inline Graph two_triangles() {
  return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}
// Triangles {0,1,2} and {3,4,5} joined by the bridge 2-3 (edge id 3).
inline Graph barbell() {
  return Graph::from_edges(6, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}});
}
inline constexpr moddiv::EdgeId kBarbellBridge = 3;

inline moddiv::Partition halves(const Graph& g) {
  std::vector<moddiv::CommunityId> a(g.vertex_count());
  for (std::size_t v = 0; v < a.size(); ++v) a[v] = v < a.size() / 2 ? 0 : 1;
  return moddiv::Partition::from_assignment(g, a);
}

/// MODDIV_DATA_DIR if set, else the repository's data/ directory.
inline std::filesystem::path data_dir() {
  if (const char* env = std::getenv("MODDIV_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return MODDIV_TEST_DATA_DIR;
}

}  // namespace fixtures
