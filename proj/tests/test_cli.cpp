#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lbd/pipeline.hpp"
#include "lbd/synthetic.hpp"
#include "test_util.hpp"

namespace {

namespace fs = std::filesystem;

struct Run {
  int code;
  std::string output;
};

// Runs the lbd tool with stdout and stderr captured together.
Run lbd_run(const std::string& args, const testutil::TempDir& dir) {
  auto log = dir.file("cli_output.txt");
  std::string cmd = std::string(LBD_CLI_PATH) + " " + args + " > " + log + " 2>&1";
  int status = std::system(cmd.c_str());
  std::ifstream in(log);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::size_t line_count(const std::string& path) {
  std::ifstream in(path);
  std::size_t n = 0;
  for (std::string l; std::getline(in, l);) ++n;
  return n;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::string kFixture = std::string(LBD_TEST_DATA) + "/fixture_10k.jsonl";
const std::string kSmall = "--dim 8 --knn-k 4 --set epochs=1 --deterministic";

// Writes a small planted-bridge corpus and its predicates.
void write_world(const testutil::TempDir& dir, const std::string& stem, std::uint64_t seed) {
  lbd::synth::BridgeOptions opt;
  opt.triples = 6;
  opt.distractors = 6;
  opt.documents = 300;
  opt.median_length = 30;
  opt.background_vocab = 200;
  opt.term_rate = 0.3;
  opt.topic_rate = 0.05;
  opt.seed = seed;
  auto w = lbd::synth::bridge_world(opt);
  std::ofstream c(dir.file(stem + ".jsonl"));
  lbd::write_jsonl(w.corpus, c);
  std::ofstream p(dir.file(stem + "_pred.tsv"));
  for (const auto& r : w.predicates) p << r.subject << '\t' << r.object << '\t' << r.first_year << '\n';
}

TEST(Cli, UsageErrorsExitTwo) {
  testutil::TempDir dir;
  auto r = lbd_run("build --corpus /nonexistent/corpus.jsonl --out " + dir.file("sys"), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.output.find("corpus not found"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir.path() / "sys"));
  EXPECT_EQ(lbd_run("", dir).code, 2);
  EXPECT_EQ(lbd_run("frobnicate", dir).code, 2);
  EXPECT_EQ(lbd_run("sample --corpus " + kFixture + " --levels 0 --out " + dir.file("s"), dir).code, 2);
  EXPECT_EQ(lbd_run("stats --corpus " + kFixture + " --set dim=zero", dir).code, 2);
}

TEST(Cli, SampleLevelsFourWritesFiveHalvingFiles) {
  testutil::TempDir dir;
  auto r = lbd_run("sample --corpus " + kFixture + " --levels 4 --seed 3 --out " + dir.file("halves"), dir);
  ASSERT_EQ(r.code, 0) << r.output;
  std::size_t expected = 10000;
  for (int level = 0; level <= 4; ++level) {
    auto path = dir.file("halves/level_" + std::to_string(level) + ".jsonl");
    ASSERT_TRUE(fs::exists(path));
    EXPECT_EQ(line_count(path), expected);
    expected = (expected + 1) / 2;
  }
  EXPECT_FALSE(fs::exists(dir.path() / "halves/level_5.jsonl"));
}

TEST(Cli, StatsMatchesFrozenFixtureRow) {
  testutil::TempDir dir;
  auto r = lbd_run("stats --corpus " + kFixture, dir);
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream frozen(std::string(LBD_TEST_DATA) + "/fixture_10k_stats.tsv");
  std::string line, last;
  while (std::getline(frozen, line)) last = line;
  // The frozen row carries the counts; the CLI row is prefixed by the name.
  EXPECT_NE(r.output.find("fixture_10k\t" + last), std::string::npos) << r.output;
}

TEST(Cli, BuildFixtureWritesValidManifestAndLeavesInputAlone) {
  testutil::TempDir dir;
  auto before = lbd::sha256_file(kFixture);
  auto r = lbd_run("build --corpus " + kFixture + " --out " + dir.file("sys") + " " + kSmall, dir);
  ASSERT_EQ(r.code, 0) << r.output;
  for (const char* f : {"config.txt", "tokens.tsv", "phrases.tsv", "stopwords.txt", "embeddings.txt", "network.lbdn",
                        "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir.path() / "sys" / f)) << f;
  }
  auto m = lbd::read_manifest(dir.path() / "sys");
  EXPECT_EQ(m["inputs"][0]["sha256"], before);
  EXPECT_EQ(m["config"]["dim"], "8");
  EXPECT_EQ(m["stages"].size(), 4u);
  EXPECT_EQ(lbd::sha256_file(kFixture), before);
}

TEST(Cli, QueryUnknownTermExitsOneAndNamesIt) {
  testutil::TempDir dir;
  write_world(dir, "w", 1);
  ASSERT_EQ(lbd_run("build --corpus " + dir.file("w.jsonl") + " --out " + dir.file("sys") + " " + kSmall, dir).code, 0);
  auto r = lbd_run("query --system " + dir.file("sys") + " --a aterm000 --c qwertyuiop", dir);
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.output.find("qwertyuiop"), std::string::npos) << r.output;

  auto ok = lbd_run("query --system " + dir.file("sys") + " --a aterm000 --c cterm000 --p 10 --k-topics 2 "
                    "--lda-iterations 10 --metrics --out " + dir.file("q.json"), dir);
  ASSERT_EQ(ok.code, 0) << ok.output;
  std::ifstream in(dir.file("q.json"));
  auto j = nlohmann::json::parse(in);
  EXPECT_TRUE(j.contains("path"));
  EXPECT_TRUE(j["metrics"].contains("topic_walk_btwn"));
}

TEST(Cli, ValidateFitAndRerunAreByteIdentical) {
  testutil::TempDir dir;
  write_world(dir, "w", 2);
  ASSERT_EQ(lbd_run("build --corpus " + dir.file("w.jsonl") + " --out " + dir.file("sys") + " " + kSmall, dir).code, 0);
  const std::string q = " --p 10 --k-topics 2 --lda-iterations 10 --deterministic";
  for (const char* name : {"a", "b"}) {
    auto r = lbd_run("validate --system " + dir.file("sys") + " --predicates " + dir.file("w_pred.tsv") + " --out " +
                         dir.file(std::string("scores_") + name + ".tsv") + " --pairs-out " +
                         dir.file(std::string("pairs_") + name + ".tsv") + q,
                     dir);
    ASSERT_EQ(r.code, 0) << r.output;
  }
  EXPECT_EQ(slurp(dir.file("scores_a.tsv")), slurp(dir.file("scores_b.tsv")));
  EXPECT_EQ(slurp(dir.file("pairs_a.tsv")), slurp(dir.file("pairs_b.tsv")));
  EXPECT_TRUE(fs::exists(dir.file("scores_a.tsv.run.json")));

  auto table = lbd::read_score_table_file(dir.file("scores_a.tsv"));
  EXPECT_EQ(table.rows.size(), 12u);

  auto fit = lbd_run("fit-metric --scores " + dir.file("scores_a.tsv") + " --out " + dir.file("model.json") +
                         " --poly-budget 50 --scored-out " + dir.file("scored.tsv"),
                     dir);
  ASSERT_EQ(fit.code, 0) << fit.output;
  EXPECT_TRUE(lbd::read_score_table_file(dir.file("scored.tsv")).has_poly_multi());

  auto reuse = lbd_run("validate --system " + dir.file("sys") + " --pairs " + dir.file("pairs_a.tsv") + " --model " +
                           dir.file("model.json") + " --out " + dir.file("scores_c.tsv") + q,
                       dir);
  ASSERT_EQ(reuse.code, 0) << reuse.output;
  EXPECT_EQ(lbd::read_score_table_file(dir.file("scores_c.tsv")).rows,
            lbd::read_score_table_file(dir.file("scored.tsv")).rows);
}

TEST(Cli, CompareThreeSystemsGivesThreeRows) {
  testutil::TempDir dir;
  write_world(dir, "w", 3);
  // Three systems over the same corpus differing in embedding seed.
  for (int s = 1; s <= 3; ++s) {
    auto r = lbd_run("build --corpus " + dir.file("w.jsonl") + " --out " + dir.file("sys" + std::to_string(s)) + " " +
                         kSmall + " --seed " + std::to_string(s),
                     dir);
    ASSERT_EQ(r.code, 0) << r.output;
  }
  auto r = lbd_run("compare --system " + dir.file("sys1") + " --system " + dir.file("sys2") + " --system " +
                       dir.file("sys3") + " --predicates " + dir.file("w_pred.tsv") +
                       " --p 10 --k-topics 2 --lda-iterations 10 --poly-budget 20 --deterministic --out " +
                       dir.file("report"),
                   dir);
  ASSERT_EQ(r.code, 0) << r.output;
  std::ifstream m(dir.file("report/auc_matrix.tsv"));
  std::vector<std::string> lines;
  for (std::string l; std::getline(m, l);) lines.push_back(l);
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[1].substr(0, 5), "sys1\t");
  EXPECT_EQ(lines[3].substr(0, 5), "sys3\t");
  EXPECT_NE(lines[0].find("poly_multi"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir.path() / "report/summary.json"));
  EXPECT_TRUE(fs::exists(dir.path() / "report/validation_set.tsv"));

  // The score tables written above can be compared again directly.
  auto again = lbd_run("compare --scores " + dir.file("report/scores_0.tsv") + " --scores " +
                           dir.file("report/scores_1.tsv") + " --out " + dir.file("report2"),
                       dir);
  ASSERT_EQ(again.code, 0) << again.output;
  EXPECT_EQ(line_count(dir.file("report2/auc_matrix.tsv")), 4u);
}

}  // namespace
