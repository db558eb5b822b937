#pragma once

// Text and JSON exports of partitions, run history, dendrograms and edge
// scores. Everything here is a pure function of its inputs so repeated runs
// produce identical bytes.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "moddiv/edge_measures.hpp"
#include "moddiv/engine.hpp"
#include "moddiv/graph.hpp"
#include "moddiv/modularity.hpp"

namespace moddiv {

using Json = nlohmann::ordered_json;

/// Fixed 4-decimal rendering used in summaries and tables.
inline std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

/// Shortest text that reads back to the same double; "inf" for the sentinel.
inline std::string exact_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

// JSON has no infinity; scores use the string "inf" instead.
inline Json json_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

// ---- partitions -----------------------------------------------------------

/// One row per vertex: label, community (dense ids by smallest member).
inline void write_partition_tsv(std::ostream& out, const Graph& g, const Partition& p) {
  const Partition c = p.compacted();
  out << "vertex\tcommunity\n";
  for (VertexId v = 0; v < g.vertex_count(); ++v) {
    out << g.label(v) << '\t' << c.community_of(v) << '\n';
  }
}

inline Json partition_json(const Graph& g, const Partition& p) {
  const Partition c = p.compacted();
  const auto groups = c.groups();
  Json comms = Json::array();
  for (CommunityId id = 0; id < groups.size(); ++id) {
    const CommunityStats& s = c.stats(id);
    Json members = Json::array();
    for (VertexId v : groups[id]) members.push_back(g.label(v));
    comms.push_back({{"id", id},
                     {"size", s.size},
                     {"internal_edges", s.internal / 2},
                     {"total_degree", s.total_degree},
                     {"members", std::move(members)}});
  }
  return {{"vertices", g.vertex_count()},
          {"edges", g.edge_count()},
          {"q", modularity_q(g, p)},
          {"community_count", groups.size()},
          {"communities", std::move(comms)}};
}

// ---- history ----------------------------------------------------------------

inline Json move_json(const Graph& g, const Move& m) {
  return {{"vertex", g.label(m.vertex)}, {"from", m.from}, {"to", m.to}, {"gain", m.gain}};
}

inline Json event_json(const Graph& g, const Event& e) {
  Json payload;
  switch (e.type) {
    case Event::Type::remove: {
      const auto& r = std::get<RemoveEvent>(e.payload);
      payload = {{"edge", r.edge}, {"u", g.label(r.u)}, {"v", g.label(r.v)}, {"score", json_number(r.score)}};
      break;
    }
    case Event::Type::move:
      payload = move_json(g, std::get<MoveEvent>(e.payload).move);
      break;
    case Event::Type::accept:
    case Event::Type::reject: {
      const auto& s = std::get<SplitEvent>(e.payload);
      payload = {{"community", s.community},
                 {"new_community", s.new_community},
                 {"first_size", s.first_size},
                 {"second_size", s.second_size},
                 {"removals", s.removals},
                 {"moves", s.moves},
                 {"q_candidate", s.q_candidate}};
      break;
    }
  }
  return {{"type", to_string(e.type)}, {"phase", to_string(e.phase)}, {"payload", std::move(payload)},
          {"q_after", e.q_after}};
}

/// JSON lines, one event per line, in run order.
inline void write_trace_jsonl(std::ostream& out, const Graph& g, const std::vector<Event>& history) {
  for (const Event& e : history) out << event_json(g, e).dump() << '\n';
}

// ---- dendrogram ---------------------------------------------------------------

inline Json labels_json(const Graph& g, const std::vector<VertexId>& vs) {
  Json out = Json::array();
  for (VertexId v : vs) out.push_back(g.label(v));
  return out;
}

inline Json dendrogram_node_json(const Graph& g, const Dendrogram& d, std::size_t id) {
  const DendrogramNode& n = d.nodes[id];
  Json j = {{"id", id}, {"q", n.q}, {"size", n.members.size()}, {"members", labels_json(g, n.members)}};
  if (n.retired) j["retired"] = true;
  if (n.split_phase) {
    Json moves = Json::array();
    for (const Move& m : n.moves) moves.push_back(move_json(g, m));
    j["split"] = {{"phase", to_string(*n.split_phase)},
                  {"members_at_split", labels_json(g, n.members_at_split)},
                  {"first", labels_json(g, n.split_first)},
                  {"second", labels_json(g, n.split_second)},
                  {"moves", std::move(moves)}};
  }
  if (!n.children.empty()) {
    Json kids = Json::array();
    for (std::size_t c : n.children) kids.push_back(dendrogram_node_json(g, d, c));
    j["children"] = std::move(kids);
  }
  return j;
}

inline Json dendrogram_json(const Graph& g, const Dendrogram& d) {
  Json trace = Json::array();
  for (const TracePoint& t : d.trace) trace.push_back({{"q", t.q}, {"communities", t.communities}});
  return {{"root", d.empty() ? Json() : dendrogram_node_json(g, d, 0)}, {"trace", std::move(trace)}};
}

inline std::string newick_label(const std::string& s) {
  const bool plain = std::none_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '(' || c == ')' || c == ',' || c == ':' || c == ';' || c == '\'' ||
           c == '[' || c == ']';
  });
  if (plain && !s.empty()) return s;
  std::string out = "'";
  for (char c : s) {
    out += c;
    if (c == '\'') out += '\'';
  }
  return out + "'";
}

// Leaves list their member vertices; every node is named n<id>. Retired
// (emptied) leaves are left out.
inline void newick_node(std::ostream& out, const Graph& g, const Dendrogram& d, std::size_t id) {
  const DendrogramNode& n = d.nodes[id];
  out << '(';
  bool first = true;
  if (n.children.empty()) {
    for (VertexId v : n.members) {
      if (!first) out << ',';
      first = false;
      out << newick_label(g.label(v));
    }
  } else {
    for (std::size_t c : n.children) {
      if (d.nodes[c].retired) continue;
      if (!first) out << ',';
      first = false;
      newick_node(out, g, d, c);
    }
  }
  out << ")n" << id;
}

inline void write_newick(std::ostream& out, const Graph& g, const Dendrogram& d) {
  if (!d.empty()) newick_node(out, g, d, 0);
  out << ";\n";
}

// ---- edge scores --------------------------------------------------------------

/// One row per scored edge: endpoint labels and score, ascending by score
/// then edge id. The +infinity sentinel prints as "inf".
inline void write_measures_tsv(std::ostream& out, const Graph& g, const EdgeScoreTable& t) {
  std::vector<EdgeId> edges = t.scored_edges();
  std::stable_sort(edges.begin(), edges.end(),
                   [&](EdgeId a, EdgeId b) { return t.score(a) < t.score(b); });
  out << "u\tv\t" << to_string(t.kind()) << '\n';
  for (EdgeId e : edges) {
    const Edge& ed = g.edge(e);
    out << g.label(ed.u) << '\t' << g.label(ed.v) << '\t' << exact_number(t.score(e)) << '\n';
  }
}

}  // namespace moddiv
