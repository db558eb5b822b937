#pragma once

// The moddiv subcommands as plain functions returning an exit status, so
// tests can drive them without a process boundary.

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "moddiv/bench.hpp"
#include "moddiv/edge_measures.hpp"
#include "moddiv/engine.hpp"
#include "moddiv/io.hpp"
#include "moddiv/loaders.hpp"
#include "moddiv/oracles.hpp"

namespace moddiv {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int input_error = 2;
inline constexpr int config_error = 3;
inline constexpr int acceptance_failure = 4;
}  // namespace exit_code

/// Everything one command invocation needs, as given on the command line.
struct RunManifest {
  std::string input;
  /// "gml", "edgelist", or empty to go by file extension.
  std::string format;
  /// "ccr" or "ccr-ebr"; empty means both for bench and ccr-ebr for detect.
  std::string algorithm;
  /// "g3", "g4", or "betweenness" (the last only for measures).
  std::string measure = "g3";
  std::size_t refine_max_passes = EngineConfig{}.refine_max_passes;
  std::string out_dir;
  bool strict = false;
  bool timestamps = true;
  /// Reserved; the engine is deterministic.
  std::uint64_t seed = 0;
};

inline MeasureKind parse_measure(const std::string& s) {
  if (s == "g3") return MeasureKind::clustering_g3;
  if (s == "g4") return MeasureKind::clustering_g4;
  if (s == "betweenness" || s == "eb") return MeasureKind::betweenness;
  throw ConfigError("unknown measure '" + s + "' (expected g3, g4 or betweenness)");
}

inline Algorithm parse_algorithm(const std::string& s) {
  if (s == "ccr") return Algorithm::ccr;
  if (s == "ccr-ebr") return Algorithm::ccr_ebr;
  throw ConfigError("unknown algorithm '" + s + "' (expected ccr or ccr-ebr)");
}

inline std::optional<GraphFormat> parse_format(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "gml") return GraphFormat::gml;
  if (s == "edgelist") return GraphFormat::edge_list;
  throw ConfigError("unknown format '" + s + "' (expected gml or edgelist)");
}

/// Engine settings from a manifest. Both algorithms start with a clustering
/// measure, so asking for betweenness here is an inconsistent manifest.
inline EngineConfig engine_config(const RunManifest& m) {
  EngineConfig cfg;
  cfg.measure = parse_measure(m.measure);
  if (!is_clustering(cfg.measure)) {
    throw ConfigError("--measure betweenness is not valid for community detection; "
                      "ccr needs g3 or g4 (ccr-ebr adds betweenness on its own)");
  }
  cfg.refine_max_passes = m.refine_max_passes;
  cfg.validate();
  return cfg;
}

inline LoadedGraph load_input(const RunManifest& m) {
  if (m.input.empty()) throw InputError("no --input given");
  const auto fmt = parse_format(m.format);
  return load_graph(m.input, fmt ? *fmt : guess_format(m.input));
}

inline std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InputError("cannot write " + path.string());
  f << text;
  if (!f) throw InputError("failed writing " + path.string());
}

template <class F>
std::string render(F&& f) {
  std::ostringstream s;
  f(s);
  return s.str();
}

inline constexpr const char* kDefaultOutDir = "moddiv-out";

/// detect: run an algorithm and write partition.tsv, partition.json,
/// dendrogram.json, dendrogram.nwk, trace.jsonl and summary.json.
inline int cmd_detect(const RunManifest& m, std::ostream& out, std::ostream& err) {
  EngineConfig cfg;
  Algorithm algo = Algorithm::ccr_ebr;
  try {
    cfg = engine_config(m);
    if (!m.algorithm.empty()) algo = parse_algorithm(m.algorithm);
    parse_format(m.format);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config_error;
  }

  LoadedGraph lg;
  try {
    lg = load_input(m);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }
  for (const std::string& w : lg.report.warnings) err << "warning: " << w << '\n';
  const Graph& g = lg.graph;

  const auto t0 = std::chrono::steady_clock::now();
  const DetectionResult res = run_algorithm(algo, g, cfg);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

  const std::filesystem::path dir = m.out_dir.empty() ? kDefaultOutDir : m.out_dir;
  try {
    std::filesystem::create_directories(dir);
    write_file(dir / "partition.tsv", render([&](std::ostream& s) { write_partition_tsv(s, g, res.best_partition); }));
    write_file(dir / "partition.json", partition_json(g, res.best_partition).dump(2) + "\n");
    write_file(dir / "dendrogram.json", dendrogram_json(g, res.dendrogram).dump(2) + "\n");
    write_file(dir / "dendrogram.nwk", render([&](std::ostream& s) { write_newick(s, g, res.dendrogram); }));
    write_file(dir / "trace.jsonl", render([&](std::ostream& s) { write_trace_jsonl(s, g, res.history); }));

    Json summary = {{"input", m.input},
                    {"algorithm", to_string(algo)},
                    {"measure", to_string(cfg.measure)},
                    {"refine_max_passes", cfg.refine_max_passes},
                    {"vertices", g.vertex_count()},
                    {"edges", g.edge_count()},
                    {"duplicate_edges", lg.report.duplicate_edges},
                    {"self_loops", lg.report.self_loops},
                    {"warnings", lg.report.warnings},
                    {"q", res.best_q},
                    {"communities", res.best_partition.community_count()},
                    {"splits_accepted", res.dendrogram.trace.size() - 1}};
    if (m.timestamps) {
      summary["wall_time_ms"] = ms;
      summary["timestamp"] = utc_timestamp();
    }
    write_file(dir / "summary.json", summary.dump(2) + "\n");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }

  out << "Q=" << fixed4(res.best_q) << " communities=" << res.best_partition.community_count() << '\n';
  return exit_code::ok;
}

/// measures: score every edge of the input with one measure, as TSV on
/// `out` (or measures.tsv in --out-dir).
inline int cmd_measures(const RunManifest& m, std::ostream& out, std::ostream& err) {
  MeasureKind kind;
  try {
    kind = parse_measure(m.measure);
    parse_format(m.format);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  LoadedGraph lg;
  try {
    lg = load_input(m);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }
  const WorkingGraph wg(lg.graph);
  const EdgeScoreTable table = compute_scores(kind, wg, VertexSubset::all(lg.graph.vertex_count()));
  const std::string text = render([&](std::ostream& s) { write_measures_tsv(s, lg.graph, table); });
  if (m.out_dir.empty()) {
    out << text;
    return exit_code::ok;
  }
  try {
    std::filesystem::create_directories(m.out_dir);
    write_file(std::filesystem::path(m.out_dir) / "measures.tsv", text);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }
  return exit_code::ok;
}

/// Dataset directory: --input, else $MODDIV_DATA_DIR.
inline std::string bench_directory(const RunManifest& m) {
  if (!m.input.empty()) return m.input;
  if (const char* env = std::getenv("MODDIV_DATA_DIR")) return env;
  return {};
}

/// bench: run the reference datasets found in the data directory. With
/// --strict, any failing row or missing dataset exits 4.
inline int cmd_bench(const RunManifest& m, std::ostream& out, std::ostream& err) {
  EngineConfig cfg;
  std::vector<Algorithm> algos{Algorithm::ccr, Algorithm::ccr_ebr};
  try {
    cfg = engine_config(m);
    if (!m.algorithm.empty()) algos = {parse_algorithm(m.algorithm)};
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::config_error;
  }
  const std::string dir = bench_directory(m);
  if (dir.empty() || !std::filesystem::is_directory(dir)) {
    err << "error: dataset directory " << (dir.empty() ? "not given (--input or MODDIV_DATA_DIR)" : "'" + dir + "' not found")
        << '\n';
    return exit_code::input_error;
  }

  BenchReport report;
  try {
    report = run_bench(dir, algos, cfg);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_code::input_error;
  }
  for (const std::string& name : report.missing) {
    err << "warning: dataset '" << name << "' not found in " << dir << '\n';
  }
  for (const BenchRow& row : report.rows) {
    if (!row.size_ok()) {
      err << "warning: " << row.dataset << " has " << row.n << " vertices / " << row.m << " edges, expected "
          << row.expected_n << " / " << row.expected_m << '\n';
    }
  }

  const std::string tsv = render([&](std::ostream& s) { write_bench_tsv(s, report); });
  out << tsv;
  if (!m.out_dir.empty()) {
    try {
      std::filesystem::create_directories(m.out_dir);
      write_file(std::filesystem::path(m.out_dir) / "bench.tsv", tsv);
      Json j = bench_json(report);
      if (m.timestamps) j["timestamp"] = utc_timestamp();
      write_file(std::filesystem::path(m.out_dir) / "bench.json", j.dump(2) + "\n");
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_code::input_error;
    }
  }
  if (m.strict && (!report.all_passed() || !report.missing.empty())) return exit_code::acceptance_failure;
  return exit_code::ok;
}

inline Json oracle_report_json(const std::vector<OracleReport>& reports) {
  bool ok = true;
  double worst = 0.0;
  Json checks = Json::array();
  for (const OracleReport& r : reports) {
    ok = ok && r.passed();
    worst = std::max(worst, r.max_abs_diff);
    Json failures = Json::array();
    for (const OracleFailure& f : r.failures) {
      failures.push_back({{"input", f.input}, {"expected", json_number(f.expected)}, {"got", json_number(f.got)}});
    }
    checks.push_back({{"name", r.name},
                      {"cases", r.cases},
                      {"tolerance", r.tolerance},
                      {"max_abs_diff", json_number(r.max_abs_diff)},
                      {"passed", r.passed()},
                      {"failure_count", r.failure_count},
                      {"failures", std::move(failures)}});
  }
  return {{"passed", ok}, {"max_abs_diff", json_number(worst)}, {"checks", std::move(checks)}};
}

/// verify: the oracle suite as a JSON report; exit 0 iff every check passes.
inline int cmd_verify(const oracle::SuiteOptions& opt, std::ostream& out, std::ostream& err) {
  const auto reports = oracle::run_suite(opt);
  out << oracle_report_json(reports).dump(2) << '\n';
  bool ok = true;
  for (const OracleReport& r : reports) {
    if (!r.passed()) {
      err << "FAIL " << r.name << ": " << r.failure_count << " of " << r.cases << " cases\n";
      ok = false;
    }
  }
  return ok ? exit_code::ok : exit_code::failure;
}

}  // namespace moddiv
