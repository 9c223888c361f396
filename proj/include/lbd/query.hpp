#pragma once

// Term-pair queries: shortest path, document cloud around the path, and an
// LDA topic model of the cloud.

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbd/common.hpp"
#include "lbd/corpus.hpp"
#include "lbd/embedding.hpp"
#include "lbd/lda.hpp"
#include "lbd/network.hpp"

namespace lbd {

inline constexpr double kUnreachable = std::numeric_limits<double>::infinity();

// Optional restriction of a search to part of the network. Large builds can
// pass a region containing both endpoints; an empty function means everything.
using Region = std::function<bool(NodeIndex)>;

// Single-source shortest distances (Dijkstra, binary heap).
inline std::vector<double> shortest_distances(const Adjacency& adj, NodeIndex source,
                                              const Region& region = nullptr) {
  std::vector<double> dist(adj.node_count(), kUnreachable);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    for (const auto& arc : adj.neighbours(u)) {
      if (region && !region(arc.to)) continue;
      double nd = d + arc.weight;
      if (nd < dist[arc.to]) {
        dist[arc.to] = nd;
        heap.emplace(nd, arc.to);
      }
    }
  }
  return dist;
}

struct PathResult {
  std::vector<NodeIndex> nodes;
  double total_weight = 0.0;
};

// Minimum-weight path from a to c. Among (numerically) equal-weight paths the
// one with the lexicographically smallest node-key sequence is returned.
inline PathResult find_path(const KnowledgeNetwork& net, const Adjacency& adj, NodeIndex a, NodeIndex c,
                            const Region& region = nullptr) {
  if (a == c) throw DegeneratePairError("query endpoints are the same node: " + net.node(a).key);
  auto from_a = shortest_distances(adj, a, region);
  if (from_a[c] == kUnreachable) {
    throw DisconnectedError(str_cat("no path between ", net.node(a).key, " and ", net.node(c).key));
  }
  auto to_c = shortest_distances(adj, c, region);
  const double total = from_a[c];
  const double eps = 1e-10 * std::max(total, 1e-300);

  PathResult path;
  path.nodes.push_back(a);
  NodeIndex u = a;
  double walked = 0.0;
  while (u != c) {
    std::optional<NodeIndex> best;
    double best_w = 0.0;
    for (const auto& arc : adj.neighbours(u)) {
      if (region && !region(arc.to)) continue;
      if (!(to_c[arc.to] < to_c[u])) continue;
      if (walked + arc.weight + to_c[arc.to] > total + eps) continue;
      if (!best || net.node(arc.to) < net.node(*best)) {
        best = arc.to;
        best_w = arc.weight;
      }
    }
    if (!best) throw Error("internal error: shortest path reconstruction stalled");
    walked += best_w;
    u = *best;
    path.nodes.push_back(u);
  }
  path.total_weight = walked;
  return path;
}

inline PathResult find_path(const KnowledgeNetwork& net, const Adjacency& adj, const NodeId& a, const NodeId& c,
                            const Region& region = nullptr) {
  auto ia = net.find(a);
  if (!ia) throw UnknownTermError(a.key);
  auto ic = net.find(c);
  if (!ic) throw UnknownTermError(c.key);
  return find_path(net, adj, *ia, *ic, region);
}

struct DocumentCloud {
  // Sorted, unique document nodes.
  std::vector<NodeIndex> doc_ids;
  // For each path node (in path order), its nearest documents by distance.
  std::vector<std::pair<NodeIndex, std::vector<NodeIndex>>> per_node_contributions;
};

// The p document nodes nearest to `source` by weighted distance, ordered by
// (distance, node index). A document source counts itself at distance 0.
inline std::vector<NodeIndex> nearest_documents(const KnowledgeNetwork& net, const Adjacency& adj,
                                                NodeIndex source, std::size_t p) {
  std::vector<NodeIndex> out;
  std::vector<double> dist(adj.node_count(), kUnreachable);
  std::vector<bool> settled(adj.node_count(), false);
  using Item = std::pair<double, NodeIndex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty() && out.size() < p) {
    auto [d, u] = heap.top();
    heap.pop();
    if (settled[u]) continue;
    settled[u] = true;
    if (net.node(u).layer == Layer::document) out.push_back(u);
    for (const auto& arc : adj.neighbours(u)) {
      double nd = d + arc.weight;
      if (!settled[arc.to] && nd < dist[arc.to]) {
        dist[arc.to] = nd;
        heap.emplace(nd, arc.to);
      }
    }
  }
  return out;
}

inline DocumentCloud extract_cloud(const KnowledgeNetwork& net, const Adjacency& adj, const PathResult& path,
                                   std::size_t p, unsigned threads = 1) {
  if (p < 1) throw std::invalid_argument("cloud size p must be at least 1");
  DocumentCloud cloud;
  cloud.per_node_contributions.resize(path.nodes.size());
  parallel_for(path.nodes.size(), threads, [&](std::size_t i) {
    cloud.per_node_contributions[i] = {path.nodes[i], nearest_documents(net, adj, path.nodes[i], p)};
  });
  for (const auto& [node, docs] : cloud.per_node_contributions) {
    cloud.doc_ids.insert(cloud.doc_ids.end(), docs.begin(), docs.end());
  }
  std::sort(cloud.doc_ids.begin(), cloud.doc_ids.end());
  cloud.doc_ids.erase(std::unique(cloud.doc_ids.begin(), cloud.doc_ids.end()), cloud.doc_ids.end());
  return cloud;
}

struct QueryConfig {
  std::size_t p = 5000;
  int k = 20;
  int lda_iterations = 500;
  double alpha = 0.0;  // 0 = 50 / k
  double beta = 0.01;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool prefer_entity = false;
};

// Everything a query needs, immutable once built.
struct HypothesisSystem {
  TokenizedCorpus corpus;
  PhraseVocabulary phrases;
  StopwordSet stopwords;
  EmbeddingSpace space;
  KnowledgeNetwork network;
  std::optional<Adjacency> adjacency;
  std::unordered_map<std::string, std::size_t> doc_index;

  // Call after the network or corpus changes.
  void index() {
    adjacency.emplace(network);
    doc_index.clear();
    for (std::size_t i = 0; i < corpus.size(); ++i) doc_index.emplace(corpus[i].id, i);
  }

  // Cleans a free-text term the way documents were cleaned, then merges
  // phrases; multi-token results are joined into one phrase key.
  std::string normalize_term(std::string_view term) const {
    auto tokens = apply_phrases(clean_text(term, stopwords), phrases);
    return join(tokens, std::string(1, kPhraseJoiner));
  }

  // Phrase layer first (raw key, then normalized text), then entity layer;
  // prefer_entity swaps the order.
  std::optional<NodeIndex> resolve(std::string_view term, bool prefer_entity = false) const {
    auto phrase = [&]() -> std::optional<NodeIndex> {
      if (auto raw = network.find(NodeId{Layer::phrase, std::string(term)})) return raw;
      std::string key = normalize_term(term);
      if (key.empty()) return std::nullopt;
      return network.find(NodeId{Layer::phrase, key});
    };
    auto entity = [&]() { return network.find(NodeId{Layer::entity, std::string(term)}); };
    if (prefer_entity) {
      if (auto e = entity()) return e;
      return phrase();
    }
    if (auto p = phrase()) return p;
    return entity();
  }

  // Embedding key for a resolved phrase node, or for a free-text term.
  std::optional<std::string> embedding_key(std::string_view term) const {
    if (space.contains(term)) return std::string(term);
    std::string key = normalize_term(term);
    if (!key.empty() && space.contains(key)) return key;
    return std::nullopt;
  }
};

struct HypothesisResult {
  NodeId a;
  NodeId c;
  PathResult path;
  std::vector<double> path_edge_weights;
  DocumentCloud cloud;
  TopicModel topics;
  QueryConfig config;
};

inline HypothesisResult run_query(const HypothesisSystem& sys, std::string_view a, std::string_view c,
                                  const QueryConfig& config) {
  if (!sys.adjacency) throw Error("system is not indexed");
  if (a == c) throw DegeneratePairError("degenerate pair: both terms are '" + std::string(a) + "'");
  auto ia = sys.resolve(a, config.prefer_entity);
  if (!ia) throw UnknownTermError(std::string(a));
  auto ic = sys.resolve(c, config.prefer_entity);
  if (!ic) throw UnknownTermError(std::string(c));
  if (*ia == *ic) throw DegeneratePairError("degenerate pair: both terms resolve to " + sys.network.node(*ia).key);

  HypothesisResult result;
  result.config = config;
  result.a = sys.network.node(*ia);
  result.c = sys.network.node(*ic);
  result.path = find_path(sys.network, *sys.adjacency, *ia, *ic);
  for (std::size_t i = 0; i + 1 < result.path.nodes.size(); ++i) {
    result.path_edge_weights.push_back(sys.network.find_edge(result.path.nodes[i], result.path.nodes[i + 1])->weight);
  }
  result.cloud = extract_cloud(sys.network, *sys.adjacency, result.path, config.p, config.threads);
  if (result.cloud.doc_ids.empty()) throw Error("document cloud is empty: the network has no reachable documents");

  std::vector<const std::vector<std::string>*> docs;
  docs.reserve(result.cloud.doc_ids.size());
  for (auto node : result.cloud.doc_ids) {
    auto it = sys.doc_index.find(sys.network.node(node).key);
    if (it == sys.doc_index.end()) throw Error("document node without corpus entry: " + sys.network.node(node).key);
    docs.push_back(&sys.corpus[it->second].tokens);
  }
  result.topics = fit_lda(docs, LdaOptions{config.k, config.lda_iterations, config.alpha, config.beta, config.seed});
  return result;
}

inline nlohmann::json node_json(const NodeId& n) {
  return {{"layer", std::string(to_string(n.layer))}, {"key", n.key}};
}

inline nlohmann::json to_json(const HypothesisSystem& sys, const HypothesisResult& r) {
  nlohmann::json path_nodes = nlohmann::json::array();
  for (auto n : r.path.nodes) path_nodes.push_back(node_json(sys.network.node(n)));
  nlohmann::json topics = nlohmann::json::array();
  for (int t = 0; t < r.topics.k; ++t) {
    nlohmann::json words = nlohmann::json::array();
    for (const auto& w : r.topics.top_words[static_cast<std::size_t>(t)]) {
      words.push_back({{"token", w}, {"probability", r.topics.probability(t, w)}});
    }
    topics.push_back({{"topic", t},
                      {"tokens_assigned", r.topics.topic_doc_counts[static_cast<std::size_t>(t)]},
                      {"top_words", words}});
  }
  return {{"pair", {{"a", node_json(r.a)}, {"c", node_json(r.c)}}},
          {"config",
           {{"p", r.config.p},
            {"k", r.config.k},
            {"lda_iterations", r.config.lda_iterations},
            {"seed", r.config.seed}}},
          {"path", {{"nodes", path_nodes}, {"edge_weights", r.path_edge_weights}, {"total_weight", r.path.total_weight}}},
          {"cloud_size", r.cloud.doc_ids.size()},
          {"topics", topics}};
}

}  // namespace lbd
