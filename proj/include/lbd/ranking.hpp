#pragma once

// Embedding-based plausibility metrics for a term pair and its topic model,
// and the fitted product-of-powers combination of them (PolyMulti).

#include <array>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbd/common.hpp"
#include "lbd/embedding.hpp"
#include "lbd/lda.hpp"
#include "lbd/network.hpp"
#include "lbd/roc.hpp"

namespace lbd {

inline constexpr std::size_t kBaseMetricCount = 5;
inline constexpr std::array<std::string_view, kBaseMetricCount> kBaseMetricNames = {
    "l2", "centr_l2", "topic_per_word", "topic_corr", "topic_walk_btwn"};
// +1 higher is more plausible, -1 lower is more plausible.
inline constexpr std::array<int, kBaseMetricCount> kMetricOrientation = {-1, -1, -1, +1, +1};

// Placeholder values for pairs whose query failed: each is the worst value
// its metric can take.
inline constexpr double kWorstDistance = std::numeric_limits<double>::max();
inline constexpr std::array<double, kBaseMetricCount> kWorstMetricValues = {kWorstDistance, kWorstDistance,
                                                                             kWorstDistance, -1.0, 0.0};

struct MetricVector {
  double l2 = 0.0;
  double centr_l2 = 0.0;
  double topic_per_word = 0.0;
  double topic_corr = 0.0;
  double topic_walk_btwn = 0.0;
  std::optional<double> poly_multi;

  std::array<double, kBaseMetricCount> base() const {
    return {l2, centr_l2, topic_per_word, topic_corr, topic_walk_btwn};
  }
  static MetricVector from_base(const std::array<double, kBaseMetricCount>& v) {
    return MetricVector{v[0], v[1], v[2], v[3], v[4], std::nullopt};
  }
  bool operator==(const MetricVector&) const = default;
};

enum class TopicAggregation { min, mean };

struct MetricOptions {
  std::size_t neighbors_n = 3;
  TopicAggregation aggregation = TopicAggregation::min;
};

inline double metric_l2(const EmbeddingSpace& space, std::string_view a, std::string_view c) {
  auto va = embed_term(space, a);
  auto vc = embed_term(space, c);
  return l2_distance(va, vc);
}

// Probability-weighted mean of the in-vocabulary word vectors of one topic.
inline std::vector<double> topic_centroid(const EmbeddingSpace& space, std::span<const std::string> words,
                                          std::span<const double> probs) {
  std::vector<double> out(space.dim(), 0.0);
  double mass = 0.0;
  for (std::size_t w = 0; w < words.size(); ++w) {
    auto idx = space.index_of(words[w]);
    if (!idx || probs[w] <= 0.0) continue;
    auto v = space.row(*idx);
    for (std::size_t k = 0; k < v.size(); ++k) out[k] += probs[w] * static_cast<double>(v[k]);
    mass += probs[w];
  }
  if (!(mass > 0.0)) throw Error("topic has no in-vocabulary probability mass");
  for (auto& x : out) x /= mass;
  return out;
}

inline std::vector<double> topic_centroid(const EmbeddingSpace& space, const TopicModel& topics, int t) {
  return topic_centroid(space, topics.vocabulary, topics.word_dists.at(static_cast<std::size_t>(t)));
}

namespace ranking_detail {

inline std::vector<double> midpoint(std::span<const double> a, std::span<const double> c) {
  std::vector<double> mid(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) mid[k] = (a[k] + c[k]) / 2.0;
  return mid;
}

inline double aggregate(const std::vector<double>& values, TopicAggregation how) {
  if (values.empty()) throw Error("topic model has no topics");
  if (how == TopicAggregation::min) return *std::min_element(values.begin(), values.end());
  double s = 0.0;
  for (double v : values) s += v;
  return s / static_cast<double>(values.size());
}

// Embedding rows for the topic vocabulary, resolved once per model.
struct ResolvedTopics {
  std::vector<std::optional<std::size_t>> rows;
  std::vector<std::vector<double>> centroids;
};

inline ResolvedTopics resolve(const EmbeddingSpace& space, const TopicModel& topics) {
  ResolvedTopics r;
  r.rows.reserve(topics.vocabulary.size());
  for (const auto& w : topics.vocabulary) r.rows.push_back(space.index_of(w));
  for (int t = 0; t < topics.k; ++t) r.centroids.push_back(topic_centroid(space, topics, t));
  return r;
}

inline double per_word_distance(const EmbeddingSpace& space, const TopicModel& topics, const ResolvedTopics& r,
                                int t, std::span<const double> mid) {
  const auto& dist = topics.word_dists[static_cast<std::size_t>(t)];
  double total = 0.0, mass = 0.0;
  std::vector<double> v(space.dim());
  for (std::size_t w = 0; w < dist.size(); ++w) {
    if (!r.rows[w] || dist[w] <= 0.0) continue;
    auto row = space.row(*r.rows[w]);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = row[k];
    total += dist[w] * l2_distance(v, mid);
    mass += dist[w];
  }
  if (!(mass > 0.0)) throw Error("topic has no in-vocabulary probability mass");
  return total / mass;
}

}  // namespace ranking_detail

inline double metric_centr_l2(const EmbeddingSpace& space, std::string_view a, std::string_view c,
                              const TopicModel& topics, TopicAggregation how = TopicAggregation::min) {
  auto mid = ranking_detail::midpoint(embed_term(space, a), embed_term(space, c));
  std::vector<double> d;
  for (int t = 0; t < topics.k; ++t) d.push_back(l2_distance(topic_centroid(space, topics, t), mid));
  return ranking_detail::aggregate(d, how);
}

inline double metric_topic_per_word(const EmbeddingSpace& space, std::string_view a, std::string_view c,
                                    const TopicModel& topics, TopicAggregation how = TopicAggregation::min) {
  auto mid = ranking_detail::midpoint(embed_term(space, a), embed_term(space, c));
  auto r = ranking_detail::resolve(space, topics);
  std::vector<double> d;
  for (int t = 0; t < topics.k; ++t) d.push_back(ranking_detail::per_word_distance(space, topics, r, t, mid));
  return ranking_detail::aggregate(d, how);
}

struct Correlation {
  double value = 0.0;
  bool degenerate = false;
};

// Pearson correlation; defined as 0 (flagged) for fewer than two points or a
// constant sequence.
inline Correlation pearson(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n < 2) return {0.0, true};
  bool x_const = std::all_of(x.begin(), x.end(), [&](double v) { return v == x[0]; });
  bool y_const = std::all_of(y.begin(), y.end(), [&](double v) { return v == y[0]; });
  if (x_const || y_const) return {0.0, true};
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) return {0.0, true};
  return {std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0), false};
}

inline Correlation topic_corr_from_centroids(std::span<const double> va, std::span<const double> vc,
                                             const std::vector<std::vector<double>>& centroids) {
  std::vector<double> sa, sc;
  for (const auto& cen : centroids) {
    sa.push_back(cosine_similarity(cen, va));
    sc.push_back(cosine_similarity(cen, vc));
  }
  return pearson(sa, sc);
}

inline Correlation metric_topic_corr(const EmbeddingSpace& space, std::string_view a, std::string_view c,
                                     const TopicModel& topics) {
  auto va = embed_term(space, a);
  auto vc = embed_term(space, c);
  std::vector<std::vector<double>> centroids;
  for (int t = 0; t < topics.k; ++t) centroids.push_back(topic_centroid(space, topics, t));
  return topic_corr_from_centroids(va, vc, centroids);
}

// Small weighted graph used by the topic-walk metric.
struct PointGraph {
  std::size_t n = 0;
  // weight[i][j] > 0 when an edge exists; 0 otherwise.
  std::vector<std::vector<double>> weight;
};

// Each point links to its `neighbors` nearest others by cosine distance
// (ties by index); the union is taken as an undirected graph. If `a` and `c`
// end up in different components, the globally closest cross-component pair
// is linked repeatedly until they are joined.
inline PointGraph build_point_graph(const std::vector<std::vector<double>>& points, std::size_t neighbors,
                                    std::size_t a, std::size_t c) {
  const std::size_t n = points.size();
  PointGraph g{n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0))};
  std::vector<std::vector<double>> dist(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) dist[i][j] = std::max(kMinEdgeWeight, 1.0 - cosine_similarity(points[i], points[j]));
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::pair<double, std::size_t>> cand;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(dist[i][j], j);
    }
    std::size_t m = std::min(neighbors, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(m), cand.end());
    for (std::size_t t = 0; t < m; ++t) {
      g.weight[i][cand[t].second] = cand[t].first;
      g.weight[cand[t].second][i] = cand[t].first;
    }
  }
  auto components = [&] {
    std::vector<std::size_t> comp(n, n);
    std::size_t next = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (comp[s] != n) continue;
      std::vector<std::size_t> stack{s};
      comp[s] = next;
      while (!stack.empty()) {
        auto u = stack.back();
        stack.pop_back();
        for (std::size_t v = 0; v < n; ++v) {
          if (g.weight[u][v] > 0.0 && comp[v] == n) {
            comp[v] = next;
            stack.push_back(v);
          }
        }
      }
      ++next;
    }
    return comp;
  };
  auto comp = components();
  while (comp[a] != comp[c]) {
    std::size_t bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (comp[i] != comp[j] && dist[i][j] < best) {
          best = dist[i][j];
          bi = i;
          bj = j;
        }
      }
    }
    g.weight[bi][bj] = g.weight[bj][bi] = best;
    comp = components();
  }
  return g;
}

namespace ranking_detail {

inline bool nearly_equal(double x, double y) { return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)}); }

// O(n^2) Dijkstra from s; returns distances, shortest-path counts and the
// settle order.
inline void dijkstra_dense(const PointGraph& g, std::size_t s, std::vector<double>& dist,
                           std::vector<double>& sigma, std::vector<std::size_t>& order,
                           std::vector<std::vector<std::size_t>>* preds) {
  const std::size_t n = g.n;
  dist.assign(n, std::numeric_limits<double>::infinity());
  sigma.assign(n, 0.0);
  order.clear();
  if (preds) preds->assign(n, {});
  std::vector<bool> done(n, false);
  dist[s] = 0.0;
  sigma[s] = 1.0;
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!done[v] && dist[v] < std::numeric_limits<double>::infinity() && (u == n || dist[v] < dist[u])) u = v;
    }
    if (u == n) break;
    done[u] = true;
    order.push_back(u);
    for (std::size_t v = 0; v < n; ++v) {
      double w = g.weight[u][v];
      if (w <= 0.0 || done[v]) continue;
      double nd = dist[u] + w;
      if (dist[v] == std::numeric_limits<double>::infinity() || (nd < dist[v] && !nearly_equal(nd, dist[v]))) {
        dist[v] = nd;
        sigma[v] = sigma[u];
        if (preds) (*preds)[v] = {u};
      } else if (nearly_equal(nd, dist[v])) {
        sigma[v] += sigma[u];
        if (preds) (*preds)[v].push_back(u);
      }
    }
  }
}

}  // namespace ranking_detail

// Brandes betweenness for weighted graphs, normalised by the number of
// ordered (source, target) pairs that exclude the node: (n-1)(n-2).
inline std::vector<double> betweenness(const PointGraph& g) {
  const std::size_t n = g.n;
  std::vector<double> bc(n, 0.0);
  if (n < 3) return bc;
  std::vector<double> dist, sigma, delta(n);
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds;
  for (std::size_t s = 0; s < n; ++s) {
    ranking_detail::dijkstra_dense(g, s, dist, sigma, order, &preds);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      std::size_t w = *it;
      for (auto v : preds[w]) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s) bc[w] += delta[w];
    }
  }
  double pairs = static_cast<double>((n - 1) * (n - 2));
  for (auto& x : bc) x /= pairs;
  return bc;
}

// Shortest path a -> c (ties by smaller predecessor index).
inline std::vector<std::size_t> point_graph_path(const PointGraph& g, std::size_t a, std::size_t c) {
  std::vector<double> dist, sigma;
  std::vector<std::size_t> order;
  std::vector<std::vector<std::size_t>> preds;
  ranking_detail::dijkstra_dense(g, a, dist, sigma, order, &preds);
  if (dist[c] == std::numeric_limits<double>::infinity()) throw Error("topic walk graph is disconnected");
  std::vector<std::size_t> path{c};
  while (path.back() != a) {
    const auto& p = preds[path.back()];
    path.push_back(*std::min_element(p.begin(), p.end()));
  }
  std::reverse(path.begin(), path.end());
  return path;
}

inline double topic_walk_from_centroids(std::span<const double> va, std::span<const double> vc,
                                        const std::vector<std::vector<double>>& centroids, std::size_t neighbors) {
  // The two terms are ordered canonically so the score is symmetric in (a, c).
  bool swap = std::lexicographical_compare(vc.begin(), vc.end(), va.begin(), va.end());
  std::vector<std::vector<double>> points = centroids;
  points.emplace_back(swap ? vc.begin() : va.begin(), swap ? vc.end() : va.end());
  points.emplace_back(swap ? va.begin() : vc.begin(), swap ? va.end() : vc.end());
  const std::size_t a = points.size() - 2, c = points.size() - 1;
  auto g = build_point_graph(points, neighbors, a, c);
  auto bc = betweenness(g);
  auto path = point_graph_path(g, a, c);
  double s = 0.0;
  for (auto v : path) s += bc[v];
  return s / static_cast<double>(path.size());
}

inline double metric_topic_walk_betweenness(const EmbeddingSpace& space, std::string_view a, std::string_view c,
                                            const TopicModel& topics, std::size_t neighbors_n = 3) {
  auto va = embed_term(space, a);
  auto vc = embed_term(space, c);
  std::vector<std::vector<double>> centroids;
  for (int t = 0; t < topics.k; ++t) centroids.push_back(topic_centroid(space, topics, t));
  return topic_walk_from_centroids(va, vc, centroids, neighbors_n);
}

struct MetricEvaluation {
  MetricVector metrics;
  bool degenerate_correlation = false;
};

// All five base metrics with topic centroids computed once.
inline MetricEvaluation evaluate_metrics(const EmbeddingSpace& space, std::string_view a, std::string_view c,
                                         const TopicModel& topics, const MetricOptions& opt = {}) {
  using namespace ranking_detail;
  auto va = embed_term(space, a);
  auto vc = embed_term(space, c);
  auto mid = midpoint(va, vc);
  auto resolved = resolve(space, topics);
  MetricEvaluation out;
  out.metrics.l2 = l2_distance(va, vc);
  std::vector<double> centr, per_word;
  for (int t = 0; t < topics.k; ++t) {
    centr.push_back(l2_distance(resolved.centroids[static_cast<std::size_t>(t)], mid));
    per_word.push_back(per_word_distance(space, topics, resolved, t, mid));
  }
  out.metrics.centr_l2 = aggregate(centr, opt.aggregation);
  out.metrics.topic_per_word = aggregate(per_word, opt.aggregation);
  auto corr = topic_corr_from_centroids(va, vc, resolved.centroids);
  out.metrics.topic_corr = corr.value;
  out.degenerate_correlation = corr.degenerate;
  out.metrics.topic_walk_btwn = topic_walk_from_centroids(va, vc, resolved.centroids, opt.neighbors_n);
  return out;
}

struct LabeledMetrics {
  MetricVector metrics;
  bool positive = false;
};

inline constexpr double kNormalizedFloor = 1e-6;

struct PolyModel {
  std::array<int, kBaseMetricCount> orientation = kMetricOrientation;
  std::array<double, kBaseMetricCount> exponents{};
  std::array<double, kBaseMetricCount> norm_min{};
  std::array<double, kBaseMetricCount> norm_max{};
  std::array<bool, kBaseMetricCount> included{};
  double training_auc = 0.0;
  std::uint64_t seed = 0;
  long long budget = 0;

  // Oriented, min-max scaled into [1e-6, 1]; 1 for excluded metrics.
  double normalized(std::size_t i, double value) const {
    if (!included[i]) return 1.0;
    double o = orientation[i] * value;
    double x = (o - norm_min[i]) / (norm_max[i] - norm_min[i]);
    if (!(x >= kNormalizedFloor)) x = kNormalizedFloor;
    return std::min(x, 1.0);
  }
};

// Product of normalized metrics raised to the fitted exponents; higher is
// more plausible.
inline double score(const PolyModel& model, const MetricVector& m) {
  auto v = m.base();
  double s = 1.0;
  for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
    if (model.included[i]) s *= std::pow(model.normalized(i, v[i]), model.exponents[i]);
  }
  return s;
}

inline bool is_placeholder(std::size_t metric, double value) {
  return kMetricOrientation[metric] < 0 && value == kWorstDistance;
}

// Random search over exponents in [0, 5]^5 maximizing training AUC. The first
// candidates are each single metric alone and then all metrics equally
// weighted; later candidates alternate between uniform draws and Gaussian
// steps around the incumbent. Candidates are drawn in fixed-size batches so
// the result does not depend on the number of worker threads; the winner is
// the highest AUC, earliest candidate on ties.
inline PolyModel fit_poly_multi(const std::vector<LabeledMetrics>& training, long long budget, std::uint64_t seed,
                                unsigned threads = 1) {
  if (budget < 1) throw std::invalid_argument("budget must be at least 1");
  if (training.size() < 10) throw Error("PolyMulti fit needs at least 10 examples");
  std::vector<bool> labels_vec;
  for (const auto& t : training) labels_vec.push_back(t.positive);
  std::size_t n_pos = static_cast<std::size_t>(std::count(labels_vec.begin(), labels_vec.end(), true));
  if (n_pos == 0 || n_pos == training.size()) throw Error("PolyMulti fit needs both labels");

  PolyModel model;
  model.seed = seed;
  model.budget = budget;
  for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& t : training) {
      double v = t.metrics.base()[i];
      if (is_placeholder(i, v) || !std::isfinite(v)) continue;
      double o = model.orientation[i] * v;
      lo = std::min(lo, o);
      hi = std::max(hi, o);
    }
    model.norm_min[i] = std::isfinite(lo) ? lo : 0.0;
    model.norm_max[i] = std::isfinite(hi) ? hi : 0.0;
    model.included[i] = std::isfinite(lo) && std::isfinite(hi) && hi > lo;
    if (!model.included[i]) warn(str_cat("metric ", kBaseMetricNames[i], " has a degenerate range; excluded from PolyMulti"));
  }

  const std::size_t n = training.size();
  std::vector<std::array<double, kBaseMetricCount>> logs(n);
  for (std::size_t r = 0; r < n; ++r) {
    auto v = training[r].metrics.base();
    for (std::size_t i = 0; i < kBaseMetricCount; ++i) logs[r][i] = std::log(model.normalized(i, v[i]));
  }
  std::unique_ptr<bool[]> labels(new bool[n]);
  for (std::size_t r = 0; r < n; ++r) labels[r] = training[r].positive;

  using Exponents = std::array<double, kBaseMetricCount>;
  auto evaluate = [&](const Exponents& e) {
    std::vector<double> s(n, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
        if (model.included[i] && e[i] != 0.0) s[r] += e[i] * logs[r][i];
      }
    }
    return auc(s, std::span<const bool>(labels.get(), n));
  };

  std::vector<Exponents> seeds;
  for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
    if (!model.included[i]) continue;
    Exponents e{};
    e[i] = 1.0;
    seeds.push_back(e);
  }
  {
    Exponents e{};
    for (std::size_t i = 0; i < kBaseMetricCount; ++i) e[i] = model.included[i] ? 1.0 : 0.0;
    seeds.push_back(e);
  }

  Rng rng(seed);
  Exponents best_e{};
  double best_auc = -1.0;
  constexpr std::size_t kBatch = 256;
  long long generated = 0;
  while (generated < budget) {
    std::size_t batch = static_cast<std::size_t>(std::min<long long>(kBatch, budget - generated));
    std::vector<Exponents> cand(batch);
    for (std::size_t b = 0; b < batch; ++b) {
      auto idx = static_cast<std::size_t>(generated) + b;
      if (idx < seeds.size()) {
        cand[b] = seeds[idx];
        continue;
      }
      bool local = best_auc >= 0.0 && rng.uniform01() < 0.5;
      for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
        double x = local ? best_e[i] + 0.5 * rng.normal() : rng.uniform(0.0, 5.0);
        cand[b][i] = model.included[i] ? std::clamp(x, 0.0, 5.0) : 0.0;
      }
    }
    std::vector<double> aucs(batch);
    parallel_for(batch, threads, [&](std::size_t b) { aucs[b] = evaluate(cand[b]); });
    for (std::size_t b = 0; b < batch; ++b) {
      if (aucs[b] > best_auc) {
        best_auc = aucs[b];
        best_e = cand[b];
      }
    }
    generated += static_cast<long long>(batch);
  }
  model.exponents = best_e;
  std::vector<double> final_scores;
  for (const auto& t : training) final_scores.push_back(score(model, t.metrics));
  model.training_auc = auc(final_scores, std::span<const bool>(labels.get(), n));
  return model;
}

inline nlohmann::json to_json(const PolyModel& m) {
  nlohmann::json metrics = nlohmann::json::array();
  for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
    metrics.push_back({{"name", std::string(kBaseMetricNames[i])},
                       {"orientation", m.orientation[i]},
                       {"exponent", m.exponents[i]},
                       {"min", m.norm_min[i]},
                       {"max", m.norm_max[i]},
                       {"included", m.included[i]}});
  }
  return {{"metrics", metrics}, {"training_auc", m.training_auc}, {"seed", m.seed}, {"budget", m.budget}};
}

inline PolyModel poly_model_from_json(const nlohmann::json& j) {
  PolyModel m;
  try {
    const auto& metrics = j.at("metrics");
    if (metrics.size() != kBaseMetricCount) throw LoadError("PolyMulti model: expected 5 metrics");
    for (std::size_t i = 0; i < kBaseMetricCount; ++i) {
      const auto& e = metrics[i];
      if (e.at("name").get<std::string>() != kBaseMetricNames[i]) throw LoadError("PolyMulti model: metric order");
      m.orientation[i] = e.at("orientation").get<int>();
      m.exponents[i] = e.at("exponent").get<double>();
      m.norm_min[i] = e.at("min").get<double>();
      m.norm_max[i] = e.at("max").get<double>();
      m.included[i] = e.at("included").get<bool>();
    }
    m.training_auc = j.at("training_auc").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.budget = j.at("budget").get<long long>();
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("PolyMulti model: ") + e.what());
  }
  return m;
}

}  // namespace lbd
