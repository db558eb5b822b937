#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "moddiv/commands.hpp"

using namespace moddiv;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("moddiv_test_" + std::to_string(::getpid()) + "_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void spit(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

int run_binary(const std::string& args, std::string* out = nullptr) {
  const fs::path log = fs::temp_directory_path() / ("moddiv_cli_" + std::to_string(::getpid()) + ".out");
  const std::string cmd = std::string(MODDIV_BINARY) + " " + args + " >" + log.string() + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (out != nullptr) *out = slurp(log);
  fs::remove(log);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path karate_path() { return fixtures::data_dir() / "karate.gml"; }

fs::path barbell_file(const fs::path& dir) {
  const fs::path p = dir / "barbell.txt";
  spit(p, "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n");
  return p;
}

}  // namespace

TEST(Detect, KarateSummaryAndArtifacts) {
  if (!fs::exists(karate_path())) GTEST_SKIP();
  const fs::path dir = scratch("detect");
  RunManifest m;
  m.input = karate_path().string();
  m.algorithm = "ccr-ebr";
  m.out_dir = dir.string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_detect(m, out, err), exit_code::ok) << err.str();
  EXPECT_EQ(out.str(), "Q=0.4198 communities=4\n");
  for (const char* f : {"partition.tsv", "partition.json", "dendrogram.json", "dendrogram.nwk", "trace.jsonl",
                        "summary.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const Json summary = Json::parse(slurp(dir / "summary.json"));
  EXPECT_TRUE(summary.contains("timestamp"));
  EXPECT_EQ(summary["communities"], 4);
  fs::remove_all(dir);
}

TEST(Detect, ByteIdenticalWithoutTimestamps) {
  if (!fs::exists(karate_path())) GTEST_SKIP();
  const fs::path a = scratch("det_a");
  const fs::path b = scratch("det_b");
  const std::string base = "detect --input " + karate_path().string() + " --algo ccr-ebr --no-timestamps --out-dir ";
  ASSERT_EQ(run_binary(base + a.string()), 0);
  ASSERT_EQ(run_binary(base + b.string()), 0);
  for (const char* f : {"partition.tsv", "partition.json", "dendrogram.json", "dendrogram.nwk", "trace.jsonl",
                        "summary.json"}) {
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    EXPECT_FALSE(slurp(a / f).empty()) << f;
  }
  EXPECT_FALSE(Json::parse(slurp(a / "summary.json")).contains("timestamp"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Detect, EmptyInputIsInputError) {
  const fs::path dir = scratch("empty");
  spit(dir / "empty.gml", "graph [ ]\n");
  spit(dir / "blank.txt", "");
  EXPECT_EQ(run_binary("detect --input " + (dir / "empty.gml").string() + " --out-dir " + dir.string()), 2);
  EXPECT_EQ(run_binary("detect --input " + (dir / "blank.txt").string() + " --out-dir " + dir.string()), 2);
  EXPECT_EQ(run_binary("detect --input " + (dir / "missing.gml").string()), 2);
  EXPECT_EQ(run_binary("detect"), 2);
  fs::remove_all(dir);
}

TEST(Detect, InconsistentManifestIsConfigError) {
  const fs::path dir = scratch("cfg");
  const std::string in = barbell_file(dir).string();
  EXPECT_EQ(run_binary("detect --algo ccr --measure betweenness --input " + in), 3);
  // checked before the input is even looked at
  EXPECT_EQ(run_binary("detect --algo ccr --measure betweenness"), 3);
  EXPECT_EQ(run_binary("detect --algo louvain --input " + in), 3);
  EXPECT_EQ(run_binary("detect --format xml --input " + in), 3);
  EXPECT_EQ(run_binary("detect --refine-max-passes 0 --input " + in), 3);
  EXPECT_EQ(run_binary("detect --refine-max-passes lots --input " + in), 3);
  EXPECT_EQ(run_binary("frobnicate"), 3);
  fs::remove_all(dir);
}

TEST(Detect, EdgeListFormatFlag) {
  const fs::path dir = scratch("fmt");
  const fs::path in = dir / "barbell.dat";
  spit(in, "0 1\n1 2\n0 2\n3 4\n4 5\n3 5\n2 3\n");
  RunManifest m;
  m.input = in.string();
  m.format = "edgelist";
  m.algorithm = "ccr";
  m.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_detect(m, out, err), 0) << err.str();
  EXPECT_EQ(out.str(), "Q=0.3571 communities=2\n");
  EXPECT_EQ(slurp(dir / "out" / "partition.tsv"), "vertex\tcommunity\n0\t0\n1\t0\n2\t0\n3\t1\n4\t1\n5\t1\n");
  fs::remove_all(dir);
}

TEST(Measures, BarbellPathAndStar) {
  const fs::path dir = scratch("measures");
  RunManifest m;
  m.input = barbell_file(dir).string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_measures(m, out, err), 0);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n', out.str().find('\n') + 1) + 1),
            "u\tv\tclustering_g3\n2\t3\t0.5\n");

  spit(dir / "path.txt", "a b\nb c\n");
  m.input = (dir / "path.txt").string();
  m.measure = "betweenness";
  std::ostringstream pout;
  ASSERT_EQ(cmd_measures(m, pout, err), 0);
  EXPECT_EQ(pout.str(), "u\tv\tbetweenness\na\tb\t2\nb\tc\t2\n");

  spit(dir / "star.txt", "c x\nc y\nc z\n");
  m.input = (dir / "star.txt").string();
  m.measure = "g3";
  m.out_dir = (dir / "out").string();
  std::ostringstream sout;
  ASSERT_EQ(cmd_measures(m, sout, err), 0);
  EXPECT_TRUE(sout.str().empty());
  EXPECT_EQ(slurp(dir / "out" / "measures.tsv"), "u\tv\tclustering_g3\nc\tx\tinf\nc\ty\tinf\nc\tz\tinf\n");

  m.input = (dir / "nope.txt").string();
  EXPECT_EQ(cmd_measures(m, sout, err), exit_code::input_error);
  m.measure = "g7";
  EXPECT_EQ(cmd_measures(m, sout, err), exit_code::config_error);
  fs::remove_all(dir);
}

TEST(Verify, CleanRunPassesWithValidJson) {
  std::string out;
  ASSERT_EQ(run_binary("verify", &out), 0);
  const Json j = Json::parse(out);
  EXPECT_TRUE(j["passed"].get<bool>());
  EXPECT_LT(j["max_abs_diff"].get<double>(), 1e-9);
  EXPECT_EQ(j["checks"].size(), 9u);
}

TEST(Verify, InjectedFaultIsNamed) {
  std::string out;
  EXPECT_NE(run_binary("verify --inject-fault moveq-sign", &out), 0);
  const Json j = Json::parse(out);
  EXPECT_FALSE(j["passed"].get<bool>());
  bool named = false;
  for (const auto& c : j["checks"]) {
    if (c["name"] == "moveq-vs-recompute") {
      named = true;
      EXPECT_FALSE(c["passed"].get<bool>());
      EXPECT_FALSE(c["failures"].empty());
    } else {
      EXPECT_TRUE(c["passed"].get<bool>()) << c["name"];
    }
  }
  EXPECT_TRUE(named);
  EXPECT_EQ(run_binary("verify --inject-fault everything"), 3);
}

TEST(Bench, RowsForPresentDatasetsAndStrictMode) {
  if (!fs::exists(karate_path())) GTEST_SKIP();
  const fs::path dir = scratch("bench");
  fs::copy_file(karate_path(), dir / "karate.gml");
  RunManifest m;
  m.input = dir.string();
  m.out_dir = (dir / "out").string();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_bench(m, out, err), 0) << err.str();
  const std::string tsv = out.str();
  EXPECT_NE(tsv.find("karate\t34\t78\tccr\t0.4198\t4\t0.4197\t0.4000\t"), std::string::npos) << tsv;
  EXPECT_NE(tsv.find("karate\t34\t78\tccr-ebr\t0.4198\t4\t0.4197\t0.4000\t"), std::string::npos) << tsv;
  EXPECT_NE(err.str().find("dataset 'jazz' not found"), std::string::npos);
  const Json j = Json::parse(slurp(dir / "out" / "bench.json"));
  EXPECT_EQ(j["rows"].size(), 2u);
  EXPECT_EQ(j["rows"][0]["q_published"], 0.4197);
  EXPECT_EQ(j["missing"].size(), 6u);

  // six datasets missing: strict fails
  m.strict = true;
  std::ostringstream out2, err2;
  EXPECT_EQ(cmd_bench(m, out2, err2), exit_code::acceptance_failure);
  fs::remove_all(dir);
}

TEST(Bench, DirectoryFromEnvironmentAndErrors) {
  const fs::path dir = scratch("bench_env");
  RunManifest m;
  std::ostringstream out, err;
  m.input = (dir / "absent").string();
  EXPECT_EQ(cmd_bench(m, out, err), exit_code::input_error);
  m.input.clear();
  ::setenv("MODDIV_DATA_DIR", dir.string().c_str(), 1);
  EXPECT_EQ(cmd_bench(m, out, err), exit_code::ok);
  EXPECT_EQ(out.str(), "dataset\tn\tm\talgorithm\tq\tcommunities\tq_published\tq_min\twall_ms\tpass\n");
  ::unsetenv("MODDIV_DATA_DIR");
  EXPECT_EQ(cmd_bench(m, out, err), exit_code::input_error);
  m.algorithm = "nope";
  EXPECT_EQ(cmd_bench(m, out, err), exit_code::config_error);
  fs::remove_all(dir);
}

TEST(Bench, ReferenceTable) {
  EXPECT_EQ(reference_datasets().size(), 7u);
  const DatasetInfo* jazz = find_reference("jazz");
  ASSERT_NE(jazz, nullptr);
  EXPECT_EQ(jazz->q_ccr, 0.445);
  EXPECT_EQ(jazz->q_ebr, 0.445);
  const DatasetInfo* email = find_reference("email");
  ASSERT_NE(email, nullptr);
  EXPECT_EQ(email->q_ccr, 0.4531);
  EXPECT_EQ(email->q_ebr, 0.5703);
  EXPECT_EQ(email->vertices, 1133u);
  EXPECT_EQ(email->edges, 5451u);
  EXPECT_EQ(find_reference("nope"), nullptr);
}
