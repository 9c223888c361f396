#include <gtest/gtest.h>

#include <cmath>

#include "lbd/ranking.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace {

using oracle::Vec;

struct Fixture {
  lbd::EmbeddingSpace space;
  lbd::TopicModel topics;
};

lbd::EmbeddingSpace make_space(const std::vector<std::pair<std::string, Vec>>& rows) {
  std::vector<std::string> tokens;
  std::vector<float> data;
  for (const auto& [t, v] : rows) {
    tokens.push_back(t);
    for (double x : v) data.push_back(static_cast<float>(x));
  }
  return lbd::EmbeddingSpace(rows.front().second.size(), tokens, data);
}

// Vocabulary must be sorted; dists are normalised here.
lbd::TopicModel make_topics(std::vector<std::string> vocab, std::vector<Vec> dists) {
  lbd::TopicModel m;
  m.k = static_cast<int>(dists.size());
  m.vocabulary = std::move(vocab);
  for (auto& d : dists) {
    double s = 0;
    for (double p : d) s += p;
    for (auto& p : d) p /= s;
  }
  m.word_dists = std::move(dists);
  m.topic_doc_counts.assign(m.word_dists.size(), 0);
  m.top_words.assign(m.word_dists.size(), {});
  return m;
}

// Random space with tokens "a", "c" and w00..; random topics over the w tokens
// plus one out-of-vocabulary word "zz".
Fixture random_fixture(lbd::Rng& rng, std::size_t dim, std::size_t words, int k) {
  std::vector<std::pair<std::string, Vec>> rows;
  rows.push_back({"a", testutil::random_vector(rng, dim)});
  rows.push_back({"c", testutil::random_vector(rng, dim)});
  std::vector<std::string> vocab;
  for (std::size_t i = 0; i < words; ++i) {
    vocab.push_back(lbd::str_cat("w", i / 10, i % 10));
    rows.push_back({vocab.back(), testutil::random_vector(rng, dim)});
  }
  vocab.push_back("zz");
  std::vector<Vec> dists(static_cast<std::size_t>(k), Vec(vocab.size()));
  for (auto& d : dists) {
    for (auto& p : d) p = rng.uniform01() < 0.3 ? 0.0 : rng.uniform01();
    d[0] += 0.01;
  }
  return {make_space(rows), make_topics(vocab, dists)};
}

// Float-rounded vectors as the library sees them.
Vec vec(const lbd::EmbeddingSpace& s, const std::string& t) { return lbd::embed_term(s, t); }

Vec oracle_centroid(const Fixture& f, int t) {
  std::vector<Vec> vs;
  Vec ws;
  for (std::size_t w = 0; w < f.topics.vocabulary.size(); ++w) {
    if (!f.space.contains(f.topics.vocabulary[w])) continue;
    vs.push_back(vec(f.space, f.topics.vocabulary[w]));
    ws.push_back(f.topics.word_dists[static_cast<std::size_t>(t)][w]);
  }
  return oracle::weighted_mean(vs, ws);
}

std::vector<Vec> oracle_centroids(const Fixture& f) {
  std::vector<Vec> out;
  for (int t = 0; t < f.topics.k; ++t) out.push_back(oracle_centroid(f, t));
  return out;
}

bool close_vec(const Vec& x, const Vec& y, double rel) {
  if (x.size() != y.size()) return false;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!testutil::rel_close(x[i], y[i], rel)) return false;
  }
  return true;
}

TEST(L2, Examples) {
  auto s = make_space({{"a", {1, 0, 0}}, {"c", {0, 1, 0}}});
  EXPECT_EQ(lbd::metric_l2(s, "a", "a"), 0.0);
  EXPECT_DOUBLE_EQ(lbd::metric_l2(s, "a", "c"), std::sqrt(2.0));
  EXPECT_THROW(lbd::metric_l2(s, "a", "nope"), lbd::OovError);
}

TEST(L2, MatchesOracleAndIsSymmetric) {
  lbd::Rng rng(1);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(50), 1, 1);
    double got = lbd::metric_l2(f.space, "a", "c");
    EXPECT_TRUE(testutil::rel_close(got, oracle::euclid(vec(f.space, "a"), vec(f.space, "c")), 1e-12));
    EXPECT_EQ(got, lbd::metric_l2(f.space, "c", "a"));
  }
}

TEST(TopicCentroid, Examples) {
  auto s = make_space({{"p", {1.5, -2}}, {"q", {-1.5, 2}}, {"r", {4, 5}}});
  auto one = make_topics({"p", "q", "r"}, {{0, 0, 1}});
  EXPECT_EQ(lbd::topic_centroid(s, one, 0), (Vec{4, 5}));
  auto sym = make_topics({"p", "q", "r"}, {{1, 1, 0}});
  EXPECT_EQ(lbd::topic_centroid(s, sym, 0), (Vec{0, 0}));
  auto oov = make_topics({"x", "y"}, {{1, 1}});
  EXPECT_THROW(lbd::topic_centroid(s, oov, 0), lbd::Error);
}

TEST(TopicCentroid, MatchesOracle) {
  lbd::Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(20), 3 + rng.uniform_index(20), 3);
    for (int t = 0; t < 3; ++t) EXPECT_TRUE(close_vec(lbd::topic_centroid(f.space, f.topics, t), oracle_centroid(f, t), 1e-12));
  }
}

TEST(CentrL2, Examples) {
  auto s = make_space({{"a", {0, 0}}, {"c", {2, 2}}, {"m", {1, 1}}, {"x", {5, 1}}});
  auto at_mid = make_topics({"m", "x"}, {{0, 1}, {1, 0}});
  EXPECT_EQ(lbd::metric_centr_l2(s, "a", "c", at_mid), 0.0);
  auto single = make_topics({"m", "x"}, {{0, 1}});
  EXPECT_DOUBLE_EQ(lbd::metric_centr_l2(s, "a", "c", single), 4.0);
}

TEST(CentrL2, MatchesOracleMinAndMean) {
  lbd::Rng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(20), 5 + rng.uniform_index(10), 5);
    auto mid = oracle::midpoint(vec(f.space, "a"), vec(f.space, "c"));
    double mn = 1e300, mean = 0;
    for (const auto& cen : oracle_centroids(f)) {
      double d = oracle::euclid(cen, mid);
      mn = std::min(mn, d);
      mean += d / 5;
    }
    EXPECT_TRUE(testutil::rel_close(lbd::metric_centr_l2(f.space, "a", "c", f.topics), mn, 1e-12));
    EXPECT_TRUE(
        testutil::rel_close(lbd::metric_centr_l2(f.space, "a", "c", f.topics, lbd::TopicAggregation::mean), mean, 1e-12));
  }
}

TEST(TopicPerWord, Examples) {
  auto s = make_space({{"a", {0, 0}}, {"c", {2, 2}}, {"m", {1, 1}}, {"x", {1, 3}}});
  auto at_mid = make_topics({"m", "x"}, {{1, 0}});
  EXPECT_EQ(lbd::metric_topic_per_word(s, "a", "c", at_mid), 0.0);
  auto far = make_topics({"m", "x"}, {{0, 1}});
  EXPECT_DOUBLE_EQ(lbd::metric_topic_per_word(s, "a", "c", far), 2.0);
}

TEST(TopicPerWord, MatchesDoubleLoopOracle) {
  lbd::Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(20), 3 + rng.uniform_index(10), 4);
    auto mid = oracle::midpoint(vec(f.space, "a"), vec(f.space, "c"));
    double best = 1e300;
    for (int t = 0; t < 4; ++t) {
      double total = 0, mass = 0;
      for (std::size_t w = 0; w < f.topics.vocabulary.size(); ++w) {
        const auto& word = f.topics.vocabulary[w];
        if (!f.space.contains(word)) continue;
        double p = f.topics.word_dists[static_cast<std::size_t>(t)][w];
        total += p * oracle::euclid(vec(f.space, word), mid);
        mass += p;
      }
      best = std::min(best, total / mass);
    }
    EXPECT_TRUE(testutil::rel_close(lbd::metric_topic_per_word(f.space, "a", "c", f.topics), best, 1e-12));
  }
}

TEST(TopicCorr, PerfectAndAntiCorrelation) {
  // a and c are mirror images across the first axis; centroids on that axis
  // see identical similarities.
  auto s = make_space({{"a", {1, 1}}, {"c", {1, -1}}, {"p", {1, 0}}, {"q", {-1, 0}}, {"r", {2, 0.0}}});
  auto t = make_topics({"p", "q", "r"}, {{1, 0, 0}, {0, 1, 0}, {1, 1, 3}});
  auto r = lbd::metric_topic_corr(s, "a", "c", t);
  EXPECT_FALSE(r.degenerate);
  EXPECT_DOUBLE_EQ(r.value, 1.0);

  auto s2 = make_space({{"a", {1, 0}}, {"c", {-1, 0}}, {"p", {1, 0.5}}, {"q", {-1, 0.2}}, {"r", {0.3, 1}}});
  auto t2 = make_topics({"p", "q", "r"}, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  EXPECT_DOUBLE_EQ(lbd::metric_topic_corr(s2, "a", "c", t2).value, -1.0);
}

TEST(TopicCorr, DegenerateCases) {
  auto s = make_space({{"a", {1, 0}}, {"c", {0, 1}}, {"p", {1, 1}}});
  auto one = make_topics({"p"}, {{1}});
  auto r = lbd::metric_topic_corr(s, "a", "c", one);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.value, 0.0);
  auto same = make_topics({"p"}, {{1}, {1}});
  EXPECT_TRUE(lbd::metric_topic_corr(s, "a", "c", same).degenerate);
}

TEST(TopicCorr, MatchesTextbookPearson) {
  lbd::Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(20), 6 + rng.uniform_index(10), 6);
    Vec sa, sc;
    for (const auto& cen : oracle_centroids(f)) {
      sa.push_back(oracle::cosine(cen, vec(f.space, "a")));
      sc.push_back(oracle::cosine(cen, vec(f.space, "c")));
    }
    auto r = lbd::metric_topic_corr(f.space, "a", "c", f.topics);
    EXPECT_FALSE(r.degenerate);
    EXPECT_GE(r.value, -1.0);
    EXPECT_LE(r.value, 1.0);
    EXPECT_TRUE(testutil::rel_close(r.value, oracle::pearson(sa, sc), 1e-9));
  }
}

TEST(Pearson, IdenticalNonConstantIsExactlyOne) {
  lbd::Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    Vec x = testutil::random_vector(rng, 2 + rng.uniform_index(20));
    EXPECT_EQ(lbd::pearson(x, x).value, 1.0);
  }
}

TEST(Betweenness, ThreeNodeLine) {
  lbd::PointGraph g{3, {{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}};
  EXPECT_EQ(lbd::betweenness(g), (Vec{0, 1, 0}));
}

TEST(Betweenness, MatchesPairEnumerationOracle) {
  lbd::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 3 + rng.uniform_index(10);
    std::vector<Vec> w(n, Vec(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        // Integer weights so equal-length paths occur.
        if (rng.uniform01() < 0.4) w[i][j] = w[j][i] = static_cast<double>(1 + rng.uniform_index(3));
      }
    }
    auto got = lbd::betweenness(lbd::PointGraph{n, w});
    EXPECT_TRUE(close_vec(got, oracle::betweenness(w), 1e-9));
  }
}

TEST(TopicWalk, ThreeNodePath) {
  auto s = make_space({{"a", {1, 0}}, {"c", {0, 1}}, {"t", {1, 1}}});
  auto topics = make_topics({"t"}, {{1}});
  EXPECT_DOUBLE_EQ(lbd::metric_topic_walk_betweenness(s, "a", "c", topics, 1), (0.0 + 1.0 + 0.0) / 3.0);
}

TEST(TopicWalk, MutualNeighboursGiveZero) {
  auto s = make_space({{"a", {1, 0.01}}, {"c", {1, -0.01}}, {"p", {-1, 0.1}}, {"q", {-1, -0.1}}});
  auto topics = make_topics({"p", "q"}, {{1, 0}, {0, 1}});
  EXPECT_EQ(lbd::metric_topic_walk_betweenness(s, "a", "c", topics, 1), 0.0);
}

TEST(TopicWalk, MatchesBruteForceOracle) {
  lbd::Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(10), 8 + rng.uniform_index(10), 8);
    std::size_t m = 1 + rng.uniform_index(4);
    double want = oracle::topic_walk(oracle_centroids(f), vec(f.space, "a"), vec(f.space, "c"), m);
    double got = lbd::metric_topic_walk_betweenness(f.space, "a", "c", f.topics, m);
    EXPECT_TRUE(testutil::rel_close(got, want, 1e-9)) << trial;
  }
}

TEST(Metrics, SymmetricAndBitwiseRepeatable) {
  lbd::Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    auto f = random_fixture(rng, 2 + rng.uniform_index(10), 8, 1 + static_cast<int>(rng.uniform_index(8)));
    auto x = lbd::evaluate_metrics(f.space, "a", "c", f.topics);
    auto y = lbd::evaluate_metrics(f.space, "c", "a", f.topics);
    auto z = lbd::evaluate_metrics(f.space, "a", "c", f.topics);
    EXPECT_EQ(x.metrics, y.metrics);
    EXPECT_EQ(x.metrics, z.metrics);
    EXPECT_EQ(x.metrics.l2, lbd::metric_l2(f.space, "a", "c"));
    EXPECT_EQ(x.metrics.centr_l2, lbd::metric_centr_l2(f.space, "a", "c", f.topics));
    EXPECT_EQ(x.metrics.topic_per_word, lbd::metric_topic_per_word(f.space, "a", "c", f.topics));
    EXPECT_EQ(x.metrics.topic_corr, lbd::metric_topic_corr(f.space, "a", "c", f.topics).value);
    EXPECT_EQ(x.metrics.topic_walk_btwn, lbd::metric_topic_walk_betweenness(f.space, "a", "c", f.topics));
    for (double v : x.metrics.base()) EXPECT_TRUE(std::isfinite(v));
    EXPECT_GE(x.metrics.centr_l2, 0.0);
    EXPECT_GE(x.metrics.topic_per_word, 0.0);
  }
}

// Training set whose metrics are noisy functions of the label; metric
// `signal` carries the most information.
std::vector<lbd::LabeledMetrics> synthetic_training(lbd::Rng& rng, std::size_t n, std::size_t signal) {
  std::vector<lbd::LabeledMetrics> out;
  for (std::size_t r = 0; r < n; ++r) {
    bool pos = r % 2 == 0;
    std::array<double, lbd::kBaseMetricCount> v{};
    for (std::size_t i = 0; i < lbd::kBaseMetricCount; ++i) {
      double strength = i == signal ? 1.5 : 0.3;
      double x = rng.normal() + (pos ? strength : 0.0);
      // Orient so positives look better under the metric's convention.
      v[i] = lbd::kMetricOrientation[i] > 0 ? x : 10.0 - x;
      if (i == 3) v[i] = std::tanh(x / 3.0);
      if (i == 4) v[i] = std::exp(x) / 10.0;
    }
    out.push_back({lbd::MetricVector::from_base(v), pos});
  }
  return out;
}

double metric_auc(const std::vector<lbd::LabeledMetrics>& t, std::size_t i) {
  Vec s;
  std::vector<bool> pos;
  for (const auto& x : t) {
    s.push_back(lbd::kMetricOrientation[i] * x.metrics.base()[i]);
    pos.push_back(x.positive);
  }
  return oracle::auc(s, pos);
}

TEST(PolyMulti, PerfectSingleMetricSeparation) {
  lbd::Rng rng(10);
  std::vector<lbd::LabeledMetrics> t;
  for (int r = 0; r < 40; ++r) {
    bool pos = r % 2 == 0;
    auto v = lbd::MetricVector::from_base({pos ? 1.0 + rng.uniform01() : 3.0 + rng.uniform01(), rng.uniform01(),
                                           rng.uniform01(), rng.uniform(-1, 1), rng.uniform01()});
    t.push_back({v, pos});
  }
  auto m = lbd::fit_poly_multi(t, 50, 3);
  EXPECT_EQ(m.training_auc, 1.0);
}

TEST(PolyMulti, DeterministicAndThreadIndependent) {
  lbd::Rng rng(11);
  auto t = synthetic_training(rng, 60, 2);
  auto a = lbd::fit_poly_multi(t, 1, 42);
  auto b = lbd::fit_poly_multi(t, 1, 42);
  EXPECT_EQ(a.exponents, b.exponents);
  auto c = lbd::fit_poly_multi(t, 900, 42, 1);
  auto d = lbd::fit_poly_multi(t, 900, 42, 4);
  EXPECT_EQ(c.exponents, d.exponents);
  EXPECT_EQ(c.training_auc, d.training_auc);
}

TEST(PolyMulti, AtLeastBestSingleMetric) {
  lbd::Rng rng(12);
  for (std::size_t signal = 0; signal < lbd::kBaseMetricCount; ++signal) {
    auto t = synthetic_training(rng, 200, signal);
    double best = 0;
    for (std::size_t i = 0; i < lbd::kBaseMetricCount; ++i) best = std::max(best, metric_auc(t, i));
    auto m = lbd::fit_poly_multi(t, 2000, signal + 1);
    EXPECT_GE(m.training_auc, best - 0.01) << signal;
  }
}

TEST(PolyMulti, DegenerateMetricExcludedWithWarning) {
  lbd::Rng rng(13);
  auto t = synthetic_training(rng, 30, 0);
  for (auto& x : t) x.metrics.topic_corr = 0.25;
  testutil::WarningCapture w;
  auto m = lbd::fit_poly_multi(t, 100, 1);
  EXPECT_FALSE(m.included[3]);
  EXPECT_EQ(m.exponents[3], 0.0);
  ASSERT_EQ(w.messages.size(), 1u);
  EXPECT_NE(w.messages[0].find("topic_corr"), std::string::npos);
}

TEST(PolyMulti, PreconditionsAndPlaceholders) {
  lbd::Rng rng(14);
  auto t = synthetic_training(rng, 9, 0);
  EXPECT_THROW(lbd::fit_poly_multi(t, 10, 1), lbd::Error);
  t = synthetic_training(rng, 20, 0);
  for (auto& x : t) x.positive = true;
  EXPECT_THROW(lbd::fit_poly_multi(t, 10, 1), lbd::Error);
  t = synthetic_training(rng, 20, 0);
  EXPECT_THROW(lbd::fit_poly_multi(t, 0, 1), std::invalid_argument);

  // A failed pair's worst-case placeholder must not stretch the normaliser.
  t[1].metrics = lbd::MetricVector::from_base(lbd::kWorstMetricValues);
  auto m = lbd::fit_poly_multi(t, 10, 1);
  EXPECT_LT(-m.norm_min[0], 100.0);
  EXPECT_EQ(m.normalized(0, lbd::kWorstMetricValues[0]), lbd::kNormalizedFloor);
}

lbd::PolyModel random_model(lbd::Rng& rng) {
  lbd::PolyModel m;
  for (std::size_t i = 0; i < lbd::kBaseMetricCount; ++i) {
    m.exponents[i] = rng.uniform(0, 5);
    m.norm_min[i] = rng.uniform(-3, 0);
    m.norm_max[i] = m.norm_min[i] + rng.uniform(0.1, 3);
    m.included[i] = rng.uniform01() < 0.8;
  }
  return m;
}

TEST(Score, ZeroExponentsGiveOne) {
  lbd::Rng rng(15);
  auto m = random_model(rng);
  m.exponents = {};
  auto v = lbd::MetricVector::from_base({3, 1, 2, -0.5, 0.1});
  EXPECT_EQ(lbd::score(m, v), 1.0);
}

TEST(Score, SingleMetricEqualsNormalisedValue) {
  lbd::PolyModel m;
  m.included = {true, false, false, false, false};
  m.exponents = {1, 0, 0, 0, 0};
  m.norm_min[0] = -4;
  m.norm_max[0] = -1;
  auto v = lbd::MetricVector::from_base({2, 0, 0, 0, 0});
  EXPECT_DOUBLE_EQ(lbd::score(m, v), (-2.0 + 4.0) / 3.0);
  EXPECT_EQ(lbd::score(m, lbd::MetricVector::from_base({0.5, 0, 0, 0, 0})), 1.0);
  EXPECT_EQ(lbd::score(m, lbd::MetricVector::from_base({9, 0, 0, 0, 0})), 1e-6);
}

TEST(Score, MatchesProductRecomputation) {
  lbd::Rng rng(16);
  for (int trial = 0; trial < 200; ++trial) {
    auto m = random_model(rng);
    std::array<double, lbd::kBaseMetricCount> v{};
    for (auto& x : v) x = rng.uniform(-4, 4);
    long double want = 1;
    for (std::size_t i = 0; i < lbd::kBaseMetricCount; ++i) {
      if (!m.included[i]) continue;
      long double o = lbd::kMetricOrientation[i] * v[i];
      long double x = (o - m.norm_min[i]) / (m.norm_max[i] - m.norm_min[i]);
      x = std::min<long double>(1, std::max<long double>(1e-6, x));
      want *= std::pow(x, static_cast<long double>(m.exponents[i]));
    }
    EXPECT_TRUE(testutil::rel_close(lbd::score(m, lbd::MetricVector::from_base(v)), static_cast<double>(want), 1e-12));
  }
}

TEST(Score, SingleMetricRankingInvariantUnderMonotoneTransform) {
  lbd::Rng rng(17);
  auto t = synthetic_training(rng, 80, 0);
  auto cube = t;
  for (auto& x : cube) x.metrics.l2 = std::pow(x.metrics.l2, 3) + 7;
  auto restrict_to_l2 = [](lbd::PolyModel m) {
    m.exponents = {1.7, 0, 0, 0, 0};
    return m;
  };
  auto ma = restrict_to_l2(lbd::fit_poly_multi(t, 10, 1));
  auto mb = restrict_to_l2(lbd::fit_poly_multi(cube, 10, 1));
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) {
      bool x = lbd::score(ma, t[i].metrics) < lbd::score(ma, t[j].metrics);
      bool y = lbd::score(mb, cube[i].metrics) < lbd::score(mb, cube[j].metrics);
      EXPECT_EQ(x, y);
    }
  }
}

TEST(PolyModelJson, RoundTrip) {
  lbd::Rng rng(18);
  auto t = synthetic_training(rng, 40, 1);
  auto m = lbd::fit_poly_multi(t, 300, 7);
  auto back = lbd::poly_model_from_json(nlohmann::json::parse(lbd::to_json(m).dump()));
  EXPECT_EQ(back.exponents, m.exponents);
  EXPECT_EQ(back.norm_min, m.norm_min);
  EXPECT_EQ(back.norm_max, m.norm_max);
  EXPECT_EQ(back.included, m.included);
  EXPECT_EQ(back.orientation, m.orientation);
  EXPECT_EQ(back.training_auc, m.training_auc);
  EXPECT_EQ(back.budget, 300);
  EXPECT_THROW(lbd::poly_model_from_json(nlohmann::json::object()), lbd::LoadError);
}

TEST(Auc, MatchesPairwiseOracle) {
  lbd::Rng rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + rng.uniform_index(300);
    Vec s;
    std::vector<bool> pos;
    for (std::size_t i = 0; i < n; ++i) {
      s.push_back(static_cast<double>(rng.uniform_index(20)));
      pos.push_back(i < 1 || (i > 1 && rng.uniform01() < 0.5));
    }
    std::unique_ptr<bool[]> b(new bool[n]);
    for (std::size_t i = 0; i < n; ++i) b[i] = pos[i];
    EXPECT_TRUE(testutil::rel_close(lbd::auc(s, std::span<const bool>(b.get(), n)), oracle::auc(s, pos), 1e-12));
  }
}

}  // namespace
