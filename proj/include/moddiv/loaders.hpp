#pragma once

// Edge-list and GML ingestion. Both paths canonicalize through
// Graph::from_edges, so self-loops and duplicates are dropped the same way.

#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "moddiv/graph.hpp"

namespace moddiv {

struct LoadedGraph {
  Graph graph;
  LoadReport report;
};

struct EdgeListOptions {
  /// Field separator in addition to whitespace; '\0' means whitespace only.
  char delimiter = '\0';
  std::string comment_prefix = "#";
};

namespace detail {

inline std::vector<std::string_view> split_fields(std::string_view line, char delimiter) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  auto is_sep = [&](char c) {
    return std::isspace(static_cast<unsigned char>(c)) != 0 || (delimiter != '\0' && c == delimiter);
  };
  while (i < line.size()) {
    while (i < line.size() && is_sep(line[i])) ++i;
    if (i >= line.size()) break;
    std::size_t j = i;
    while (j < line.size() && !is_sep(line[j])) ++j;
    out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

inline LoadedGraph finish(std::size_t n, std::vector<std::pair<VertexId, VertexId>>& raw,
                          std::vector<std::string> labels, LoadReport report,
                          const std::string& source) {
  LoadedGraph out;
  out.report = std::move(report);
  out.graph = Graph::from_edges(n, raw, std::move(labels), &out.report);
  if (out.graph.edge_count() == 0) {
    throw InputError(source + ": no edges after removing self-loops and duplicates");
  }
  if (out.report.duplicate_edges > 0) {
    out.report.warnings.push_back("dropped " + std::to_string(out.report.duplicate_edges) +
                                  " duplicate edge(s)");
  }
  if (out.report.self_loops > 0) {
    out.report.warnings.push_back("dropped " + std::to_string(out.report.self_loops) +
                                  " self-loop(s)");
  }
  return out;
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  return in;
}

}  // namespace detail

/// Reads one edge per line. Vertex tokens are mapped to dense ids in order of
/// first appearance and kept as labels.
inline LoadedGraph parse_edge_list(std::istream& in, const EdgeListOptions& options = {},
                                   const std::string& source = "<edge list>") {
  std::unordered_map<std::string, VertexId> ids;
  std::vector<std::string> labels;
  std::vector<std::pair<VertexId, VertexId>> raw;
  auto intern = [&](std::string_view token) {
    auto [it, inserted] = ids.try_emplace(std::string(token), static_cast<VertexId>(labels.size()));
    if (inserted) labels.emplace_back(token);
    return it->second;
  };
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = detail::split_fields(line, options.delimiter);
    if (fields.empty()) continue;
    if (!options.comment_prefix.empty() && fields.front().starts_with(options.comment_prefix)) {
      continue;
    }
    if (fields.size() != 2) {
      throw InputError(source + ":" + std::to_string(line_no) + ": expected 2 vertex tokens, got " +
                       std::to_string(fields.size()));
    }
    const VertexId a = intern(fields[0]);
    const VertexId b = intern(fields[1]);
    raw.emplace_back(a, b);
  }
  const std::size_t n = labels.size();
  return detail::finish(n, raw, std::move(labels), {}, source);
}

inline LoadedGraph load_edge_list(const std::filesystem::path& path,
                                  const EdgeListOptions& options = {}) {
  auto in = detail::open_input(path);
  return parse_edge_list(in, options, path.string());
}

namespace detail {

// Tokens of the GML grammar we need: keys, numbers, strings and brackets.
class GmlLexer {
 public:
  enum class Kind { key, number, string, open, close, end };
  struct Token {
    Kind kind;
    std::string text;
    std::size_t line;
  };

  GmlLexer(std::string text, std::string source) : text_(std::move(text)), source_(std::move(source)) {}

  Token next() {
    skip_space();
    if (pos_ >= text_.size()) return {Kind::end, {}, line_};
    const char c = text_[pos_];
    if (c == '[') {
      ++pos_;
      return {Kind::open, "[", line_};
    }
    if (c == ']') {
      ++pos_;
      return {Kind::close, "]", line_};
    }
    if (c == '"') {
      const std::size_t start_line = line_;
      std::string s;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\n') ++line_;
        s.push_back(text_[pos_++]);
      }
      if (pos_ >= text_.size()) fail("unterminated string", start_line);
      ++pos_;
      return {Kind::string, std::move(s), start_line};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) != 0 || c == '-' || c == '+' || c == '.') {
      std::size_t j = pos_;
      while (j < text_.size() && !std::isspace(static_cast<unsigned char>(text_[j])) &&
             text_[j] != '[' && text_[j] != ']') {
        ++j;
      }
      Token t{Kind::number, text_.substr(pos_, j - pos_), line_};
      pos_ = j;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_') {
      std::size_t j = pos_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) != 0 || text_[j] == '_')) {
        ++j;
      }
      Token t{Kind::key, text_.substr(pos_, j - pos_), line_};
      pos_ = j;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", line_);
  }

  [[noreturn]] void fail(const std::string& what, std::size_t line) const {
    throw InputError(source_ + ":" + std::to_string(line) + ": malformed GML: " + what);
  }

 private:
  void skip_space() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c)) != 0) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::string text_;
  std::string source_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

// Flat view of one `key value` pair inside a GML list. Nested lists are
// returned as a sequence of child pairs.
struct GmlValue {
  std::string key;
  std::string scalar;
  bool is_string = false;
  bool is_list = false;
  std::vector<GmlValue> children;
  std::size_t line = 0;
};

inline std::vector<GmlValue> parse_gml_list(GmlLexer& lex, bool nested) {
  std::vector<GmlValue> out;
  for (;;) {
    auto tok = lex.next();
    if (tok.kind == GmlLexer::Kind::end) {
      if (nested) lex.fail("missing ']'", tok.line);
      return out;
    }
    if (tok.kind == GmlLexer::Kind::close) {
      if (!nested) lex.fail("unbalanced ']'", tok.line);
      return out;
    }
    if (tok.kind != GmlLexer::Kind::key) lex.fail("expected a key, got '" + tok.text + "'", tok.line);
    GmlValue value;
    value.key = tok.text;
    value.line = tok.line;
    auto val = lex.next();
    switch (val.kind) {
      case GmlLexer::Kind::open:
        value.is_list = true;
        value.children = parse_gml_list(lex, true);
        break;
      case GmlLexer::Kind::number:
      case GmlLexer::Kind::string:
        value.scalar = std::move(val.text);
        value.is_string = val.kind == GmlLexer::Kind::string;
        break;
      default:
        lex.fail("missing value for key '" + value.key + "'", val.line);
    }
    out.push_back(std::move(value));
  }
}

inline long long gml_integer(const GmlValue& v, GmlLexer& lex) {
  long long x = 0;
  const char* first = v.scalar.data();
  const char* last = first + v.scalar.size();
  if (!v.scalar.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, x);
  if (v.is_string || v.is_list || ec != std::errc{} || ptr != last) {
    lex.fail("'" + v.key + "' must be an integer", v.line);
  }
  return x;
}

}  // namespace detail

/// Parses the `graph [ node [...] edge [...] ]` subset of GML. Node labels are
/// kept. A `directed 1` graph is read as undirected. Unknown keys are ignored
/// with one warning per key name.
inline LoadedGraph parse_gml(std::istream& in, const std::string& source = "<gml>") {
  std::stringstream buffer;
  buffer << in.rdbuf();
  detail::GmlLexer lex(buffer.str(), source);
  const auto top = detail::parse_gml_list(lex, false);

  const detail::GmlValue* graph = nullptr;
  for (const auto& v : top) {
    if (v.key == "graph" && v.is_list) {
      graph = &v;
      break;
    }
  }
  if (graph == nullptr) lex.fail("no 'graph [ ... ]' block", 1);

  std::set<std::string> unknown;
  std::map<long long, VertexId> index;
  std::vector<std::string> labels;
  std::vector<std::pair<long long, long long>> pending;
  std::vector<std::size_t> pending_lines;

  for (const auto& item : graph->children) {
    if (item.key == "node" && item.is_list) {
      std::optional<long long> id;
      std::optional<std::string> label;
      for (const auto& f : item.children) {
        if (f.key == "id") {
          id = detail::gml_integer(f, lex);
        } else if (f.key == "label") {
          label = f.scalar;
        } else {
          unknown.insert("node." + f.key);
        }
      }
      if (!id) lex.fail("node without id", item.line);
      if (index.contains(*id)) lex.fail("duplicate node id " + std::to_string(*id), item.line);
      index.emplace(*id, static_cast<VertexId>(labels.size()));
      // Nodes without a label keep their file id as label.
      labels.push_back(label.value_or(std::to_string(*id)));
    } else if (item.key == "edge" && item.is_list) {
      std::optional<long long> s, t;
      for (const auto& f : item.children) {
        if (f.key == "source") {
          s = detail::gml_integer(f, lex);
        } else if (f.key == "target") {
          t = detail::gml_integer(f, lex);
        } else {
          unknown.insert("edge." + f.key);
        }
      }
      if (!s || !t) lex.fail("edge without source/target", item.line);
      pending.emplace_back(*s, *t);
      pending_lines.push_back(item.line);
    } else if (item.key == "directed") {
      // Edges are symmetrized either way.
    } else {
      unknown.insert(item.key);
    }
  }

  std::vector<std::pair<VertexId, VertexId>> raw;
  raw.reserve(pending.size());
  for (std::size_t i = 0; i < pending.size(); ++i) {
    for (long long end : {pending[i].first, pending[i].second}) {
      if (!index.contains(end)) {
        throw InputError(source + ":" + std::to_string(pending_lines[i]) +
                         ": edge references unknown node id " + std::to_string(end));
      }
    }
    raw.emplace_back(index.at(pending[i].first), index.at(pending[i].second));
  }

  LoadReport report;
  for (const auto& key : unknown) report.warnings.push_back("ignored GML key '" + key + "'");
  const std::size_t n = labels.size();
  return detail::finish(n, raw, std::move(labels), std::move(report), source);
}

inline LoadedGraph load_gml(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_gml(in, path.string());
}

enum class GraphFormat { gml, edge_list };

inline GraphFormat guess_format(const std::filesystem::path& path) {
  return path.extension() == ".gml" ? GraphFormat::gml : GraphFormat::edge_list;
}

inline LoadedGraph load_graph(const std::filesystem::path& path, GraphFormat format) {
  return format == GraphFormat::gml ? load_gml(path) : load_edge_list(path);
}

/// Writes "label<TAB>label" per edge in edge-id order.
inline void write_edge_list(std::ostream& out, const Graph& g) {
  for (const Edge& e : g.edges()) out << g.label(e.u) << '\t' << g.label(e.v) << '\n';
}

}  // namespace moddiv
