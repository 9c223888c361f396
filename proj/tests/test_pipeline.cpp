#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "lbd/pipeline.hpp"
#include "lbd/synthetic.hpp"
#include "test_util.hpp"

namespace {

TEST(Config, Defaults) {
  lbd::PipelineConfig c;
  EXPECT_EQ(c.dim, 100u);
  EXPECT_EQ(c.knn_k, 10u);
  EXPECT_EQ(c.cross_top_m, 20u);
  EXPECT_EQ(c.p, 5000u);
  EXPECT_EQ(c.k_topics, 20);
  EXPECT_EQ(c.lda_iterations, 500);
  EXPECT_EQ(c.cut_year, 2014);
  EXPECT_EQ(c.validation_size, 2000u);
  EXPECT_FALSE(c.deterministic);
  auto q = c.query();
  EXPECT_EQ(q.p, 5000u);
  EXPECT_EQ(q.k, 20);
}

TEST(Config, ParsesKeyValueText) {
  lbd::PipelineConfig c;
  std::istringstream in("# comment\n\n  dim = 32 \nknn_k=4\naggregation = mean\ndeterministic = yes\nlda_beta = 0.05\n"
                        "seed = 18446744073709551615\n");
  lbd::read_config(c, in);
  EXPECT_EQ(c.dim, 32u);
  EXPECT_EQ(c.knn_k, 4u);
  EXPECT_EQ(c.aggregation, lbd::TopicAggregation::mean);
  EXPECT_TRUE(c.deterministic);
  EXPECT_EQ(c.lda_beta, 0.05);
  EXPECT_EQ(c.seed, 18446744073709551615ull);
}

TEST(Config, RejectsBadInput) {
  for (const char* text : {"dim = 0\n", "dim = -3\n", "dim = ten\n", "colour = blue\n", "dim\n", "deterministic = maybe\n",
                           "aggregation = median\n", "seed = 0\n", "phrase_max_n = 1\n", "knn_k = 99999999999999999999\n"}) {
    lbd::PipelineConfig c;
    std::istringstream in(text);
    EXPECT_THROW(lbd::read_config(c, in), lbd::UsageError) << text;
  }
  lbd::PipelineConfig c;
  EXPECT_THROW(lbd::read_config_file(c, "/nonexistent/cfg.txt"), lbd::UsageError);
}

TEST(Config, FlagBeatsFileBeatsDefault) {
  testutil::TempDir dir;
  {
    std::ofstream f(dir.file("cfg.txt"));
    f << "dim = 50\nknn_k = 7\n";
  }
  auto c = lbd::resolve_config(dir.file("cfg.txt"), {{"knn_k", "3"}});
  EXPECT_EQ(c.dim, 50u);
  EXPECT_EQ(c.knn_k, 3u);
  EXPECT_EQ(c.cross_top_m, 20u);
  auto later = lbd::resolve_config("", {{"p", "10"}, {"p", "20"}});
  EXPECT_EQ(later.p, 20u);
}

TEST(Config, WrittenConfigReadsBack) {
  lbd::PipelineConfig c;
  c.dim = 12;
  c.learning_rate = 0.1 + 0.2;
  c.network_format = lbd::NetworkFormat::binary;
  c.aggregation = lbd::TopicAggregation::mean;
  std::stringstream s;
  lbd::write_config(c, s);
  lbd::PipelineConfig back;
  lbd::read_config(back, s);
  EXPECT_EQ(lbd::config_entries(back), lbd::config_entries(c));
  EXPECT_EQ(back.learning_rate, c.learning_rate);
}

TEST(Sha256, KnownVectors) {
  EXPECT_EQ(lbd::sha256_string("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(lbd::sha256_string(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

lbd::Corpus small_corpus(std::uint64_t seed = 2) {
  lbd::synth::BridgeOptions opt;
  opt.triples = 3;
  opt.distractors = 4;
  opt.documents = 150;
  opt.median_length = 30;
  opt.background_vocab = 150;
  opt.seed = seed;
  return lbd::synth::bridge_world(opt).corpus;
}

lbd::PipelineConfig small_config() {
  lbd::PipelineConfig cfg;
  cfg.dim = 12;
  cfg.knn_k = 4;
  cfg.epochs = 2;
  cfg.deterministic = true;
  return cfg;
}

TEST(Build, StageFailuresNameTheStage) {
  auto corpus = small_corpus();
  for (auto& d : corpus) d.pub_year = 2020;
  try {
    lbd::build_system(corpus, nullptr, small_config());
    FAIL() << "expected StageError";
  } catch (const lbd::StageError& e) {
    EXPECT_EQ(e.stage(), "tokenize");
    EXPECT_NE(std::string(e.what()).find("tokenize"), std::string::npos);
  }
  lbd::Corpus one{{"d1", "", "alpha alpha alpha", 2000, lbd::DocKind::abstract}};
  try {
    lbd::build_system(one, nullptr, small_config());
    FAIL() << "expected StageError";
  } catch (const lbd::StageError& e) {
    EXPECT_EQ(e.stage(), "embedding");
  }
}

TEST(Build, RecordsStagesAndCutsYears) {
  auto corpus = small_corpus();
  auto built = lbd::build_system(corpus, nullptr, small_config());
  std::vector<std::string> names;
  for (const auto& s : built.stages) names.push_back(s.name);
  EXPECT_EQ(names, (std::vector<std::string>{"tokenize", "phrases", "embedding", "network"}));
  EXPECT_EQ(built.system.corpus.size(), lbd::cut_year_filter(corpus, 2014).size());
  EXPECT_TRUE(built.system.adjacency.has_value());
  std::size_t docs = 0;
  for (const auto& n : built.system.network.nodes()) docs += n.layer == lbd::Layer::document;
  EXPECT_EQ(docs, built.system.corpus.size());
}

TEST(SystemDir, SaveLoadRoundTrip) {
  testutil::TempDir dir;
  auto cfg = small_config();
  cfg.network_format = lbd::NetworkFormat::binary;
  auto built = lbd::build_system(small_corpus(), nullptr, cfg);
  auto manifest = lbd::save_system(dir.path(), built, cfg, {{"corpus", "mem", lbd::sha256_string("x")}});
  EXPECT_NO_THROW(lbd::validate_manifest(manifest));
  EXPECT_EQ(manifest["artifacts"]["network.lbdn"], lbd::sha256_file(dir.path() / "network.lbdn"));

  auto loaded = lbd::load_system(dir.path());
  EXPECT_EQ(loaded.manifest, manifest);
  EXPECT_EQ(lbd::config_entries(loaded.config), lbd::config_entries(cfg));
  const auto& a = built.system;
  const auto& b = loaded.system;
  EXPECT_TRUE(a.space == b.space);
  EXPECT_TRUE(a.network.equivalent(b.network));
  EXPECT_EQ(a.corpus, b.corpus);
  EXPECT_EQ(a.stopwords, b.stopwords);

  lbd::QueryConfig q;
  q.p = 15;
  q.k = 2;
  q.lda_iterations = 20;
  auto ra = lbd::run_query(a, "aterm000", "cterm000", q);
  auto rb = lbd::run_query(b, "aterm000", "cterm000", q);
  EXPECT_EQ(ra.path.nodes, rb.path.nodes);
  EXPECT_EQ(ra.topics.word_dists, rb.topics.word_dists);
}

TEST(SystemDir, DeterministicRebuildHasIdenticalDigests) {
  testutil::TempDir dir;
  auto cfg = small_config();
  auto corpus = small_corpus(5);
  auto m1 = lbd::save_system(dir.path() / "one", lbd::build_system(corpus, nullptr, cfg), cfg, {});
  cfg.threads = 3;
  auto m2 = lbd::save_system(dir.path() / "two", lbd::build_system(corpus, nullptr, cfg), cfg, {});
  auto digests = [](nlohmann::json m) {
    m["artifacts"].erase("config.txt");
    return m["artifacts"];
  };
  EXPECT_EQ(digests(m1), digests(m2));
  EXPECT_EQ(m1["counts"], m2["counts"]);
}

TEST(SystemDir, ManifestValidation) {
  testutil::TempDir dir;
  auto cfg = small_config();
  auto m = lbd::save_system(dir.path(), lbd::build_system(small_corpus(), nullptr, cfg), cfg, {});
  for (const char* key : {"format_version", "config", "inputs", "artifacts", "stages", "total_seconds"}) {
    auto broken = m;
    broken.erase(key);
    EXPECT_THROW(lbd::validate_manifest(broken), lbd::LoadError) << key;
  }
  auto bad_digest = m;
  bad_digest["inputs"] = nlohmann::json::array({{{"role", "corpus"}, {"path", "p"}, {"sha256", "abc"}}});
  EXPECT_THROW(lbd::validate_manifest(bad_digest), lbd::LoadError);
  {
    std::ofstream f(dir.path() / "manifest.json");
    f << "{not json";
  }
  EXPECT_THROW(lbd::load_system(dir.path()), lbd::LoadError);
  EXPECT_THROW(lbd::load_system(dir.path() / "missing"), lbd::IoError);
}

TEST(SystemTerms, ResolvableTermsAreEmbeddedNodes) {
  auto built = lbd::build_system(small_corpus(), nullptr, small_config());
  const auto& sys = built.system;
  auto terms = lbd::system_terms(sys);
  EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end()));
  auto ok = lbd::resolvable_in(sys);
  EXPECT_TRUE(ok("aterm000"));
  EXPECT_FALSE(ok("never_seen_word"));
  for (const auto& t : terms) EXPECT_TRUE(ok(t)) << t;
}

}  // namespace
