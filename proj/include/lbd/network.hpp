#pragma once

// Layered knowledge network: document and phrase nearest-neighbour layers,
// TF-IDF cross edges and a curated entity backbone.

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbd/common.hpp"
#include "lbd/corpus.hpp"
#include "lbd/embedding.hpp"

namespace lbd {

enum class Layer : std::uint8_t { document = 0, phrase = 1, entity = 2 };

inline char layer_code(Layer layer) {
  switch (layer) {
    case Layer::document:
      return 'D';
    case Layer::phrase:
      return 'P';
    case Layer::entity:
      return 'E';
  }
  return '?';
}

inline std::optional<Layer> parse_layer_code(std::string_view code) {
  if (code == "D") return Layer::document;
  if (code == "P") return Layer::phrase;
  if (code == "E") return Layer::entity;
  return std::nullopt;
}

inline std::string_view to_string(Layer layer) {
  switch (layer) {
    case Layer::document:
      return "document";
    case Layer::phrase:
      return "phrase";
    case Layer::entity:
      return "entity";
  }
  return "?";
}

struct NodeId {
  Layer layer = Layer::phrase;
  std::string key;

  bool operator==(const NodeId&) const = default;
  // Key first so paths compare by their node-key sequence.
  std::strong_ordering operator<=>(const NodeId& o) const {
    if (auto c = key <=> o.key; c != 0) return c;
    return layer <=> o.layer;
  }
};

struct NodeIdHash {
  std::size_t operator()(const NodeId& n) const {
    return std::hash<std::string>()(n.key) * 3 + static_cast<std::size_t>(n.layer);
  }
};

enum class EdgeTag : std::uint8_t { doc_knn = 0, phrase_knn = 1, cross_tfidf = 2, backbone = 3 };
inline constexpr int kEdgeTagCount = 4;

inline std::string_view to_string(EdgeTag tag) {
  switch (tag) {
    case EdgeTag::doc_knn:
      return "doc_knn";
    case EdgeTag::phrase_knn:
      return "phrase_knn";
    case EdgeTag::cross_tfidf:
      return "cross_tfidf";
    case EdgeTag::backbone:
      return "backbone";
  }
  return "?";
}

inline std::optional<EdgeTag> parse_edge_tag(std::string_view text) {
  for (int t = 0; t < kEdgeTagCount; ++t) {
    if (to_string(static_cast<EdgeTag>(t)) == text) return static_cast<EdgeTag>(t);
  }
  return std::nullopt;
}

using NodeIndex = std::uint32_t;

struct Edge {
  NodeIndex u;
  NodeIndex v;
  double weight;
  EdgeTag tag;

  bool operator==(const Edge&) const = default;
};

// An edge named by its endpoints, as produced by the layer builders.
struct KeyedEdge {
  NodeId a;
  NodeId b;
  double weight;
  EdgeTag tag;
};

// Undirected weighted graph with at most one edge per unordered node pair,
// no self-loops and strictly positive finite weights.
class KnowledgeNetwork {
 public:
  NodeIndex add_node(const NodeId& node) {
    auto it = index_.find(node);
    if (it != index_.end()) return it->second;
    auto idx = static_cast<NodeIndex>(nodes_.size());
    nodes_.push_back(node);
    index_.emplace(node, idx);
    return idx;
  }

  std::optional<NodeIndex> find(const NodeId& node) const {
    auto it = index_.find(node);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  // False when the pair already has an edge (the existing edge is kept).
  bool add_edge(NodeIndex u, NodeIndex v, double weight, EdgeTag tag) {
    if (u == v) throw std::invalid_argument("self-loop on node " + nodes_.at(u).key);
    if (u >= nodes_.size() || v >= nodes_.size()) throw std::out_of_range("edge endpoint out of range");
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw std::invalid_argument(str_cat("edge weight must be positive and finite, got ", weight));
    }
    auto key = pair_key(u, v);
    if (edge_index_.count(key)) return false;
    edge_index_.emplace(key, edges_.size());
    edges_.push_back(Edge{std::min(u, v), std::max(u, v), weight, tag});
    return true;
  }

  bool add_edge(const KeyedEdge& e) { return add_edge(add_node(e.a), add_node(e.b), e.weight, e.tag); }

  const Edge* find_edge(NodeIndex u, NodeIndex v) const {
    auto it = edge_index_.find(pair_key(u, v));
    return it == edge_index_.end() ? nullptr : &edges_[it->second];
  }

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const NodeId& node(NodeIndex i) const { return nodes_.at(i); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  void scale_weights(EdgeTag tag, double factor) {
    for (auto& e : edges_) {
      if (e.tag == tag) e.weight *= factor;
    }
  }

  // Order-insensitive comparison: same nodes, same edges by endpoint keys.
  bool equivalent(const KnowledgeNetwork& other) const {
    if (node_count() != other.node_count() || edge_count() != other.edge_count()) return false;
    for (const auto& n : nodes_) {
      if (!other.find(n)) return false;
    }
    for (const auto& e : edges_) {
      auto u = other.find(nodes_[e.u]);
      auto v = other.find(nodes_[e.v]);
      const Edge* o = other.find_edge(*u, *v);
      if (!o || o->weight != e.weight || o->tag != e.tag) return false;
    }
    return true;
  }

 private:
  static std::uint64_t pair_key(NodeIndex u, NodeIndex v) {
    return (static_cast<std::uint64_t>(std::min(u, v)) << 32) | std::max(u, v);
  }

  std::vector<NodeId> nodes_;
  std::unordered_map<NodeId, NodeIndex, NodeIdHash> index_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, std::size_t> edge_index_;
};

inline constexpr double kMinEdgeWeight = 1e-6;
inline constexpr double kBackboneWeight = 0.5;
inline constexpr double kAliasWeight = 0.5;

inline EdgeTag knn_tag(Layer layer) {
  return layer == Layer::document ? EdgeTag::doc_knn : EdgeTag::phrase_knn;
}

namespace knn_detail {

inline std::vector<std::vector<double>> unit_rows(
    const std::vector<std::pair<std::string, std::vector<double>>>& vectors) {
  std::vector<std::vector<double>> rows;
  rows.reserve(vectors.size());
  for (const auto& [key, v] : vectors) {
    double n = norm(v);
    std::vector<double> u(v.size(), 0.0);
    if (n > 0.0) {
      for (std::size_t k = 0; k < v.size(); ++k) u[k] = v[k] / n;
    }
    rows.push_back(std::move(u));
  }
  return rows;
}

// Cosine distance between unit rows; zero rows sit at distance 1 from all.
inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
  return 1.0 - std::clamp(dot(a, b), -1.0, 1.0);
}

inline double clamp_weight(double d) { return std::clamp(d, kMinEdgeWeight, 2.0); }

inline std::vector<KeyedEdge> collect_edges(
    const std::vector<std::pair<std::string, std::vector<double>>>& vectors,
    const std::vector<std::vector<std::pair<double, std::size_t>>>& neighbours, Layer layer) {
  std::map<std::pair<std::size_t, std::size_t>, double> unique;
  for (std::size_t i = 0; i < neighbours.size(); ++i) {
    for (const auto& [d, j] : neighbours[i]) unique.emplace(std::minmax(i, j), clamp_weight(d));
  }
  std::vector<KeyedEdge> out;
  out.reserve(unique.size());
  for (const auto& [pair, w] : unique) {
    out.push_back(KeyedEdge{NodeId{layer, vectors[pair.first].first},
                            NodeId{layer, vectors[pair.second].first}, w, knn_tag(layer)});
  }
  return out;
}

inline std::vector<std::pair<double, std::size_t>> top_k(std::vector<std::pair<double, std::size_t>>& cand,
                                                         std::size_t k) {
  k = std::min(k, cand.size());
  std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
  cand.resize(k);
  return cand;
}

}  // namespace knn_detail

// Exact k nearest neighbours by cosine distance; weight = clamp(1 - cos, 1e-6, 2).
// Mirror pairs are merged into one undirected edge.
inline std::vector<KeyedEdge> build_knn_layer(
    const std::vector<std::pair<std::string, std::vector<double>>>& vectors, std::size_t k,
    Layer layer, unsigned threads = 1) {
  using namespace knn_detail;
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (vectors.size() < k + 1) {
    throw Error(str_cat("kNN layer needs at least k+1 = ", k + 1, " vectors, got ", vectors.size()));
  }
  auto rows = unit_rows(vectors);
  const std::size_t n = rows.size();
  std::vector<std::vector<std::pair<double, std::size_t>>> neighbours(n);
  parallel_for(n, threads, [&](std::size_t i) {
    std::vector<std::pair<double, std::size_t>> cand;
    cand.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) cand.emplace_back(distance(rows[i], rows[j]), j);
    }
    neighbours[i] = top_k(cand, k);
  });
  return collect_edges(vectors, neighbours, layer);
}

struct ApproxKnnOptions {
  int trees = 8;
  std::size_t leaf_size = 32;
  int refine_rounds = 1;
  std::uint64_t seed = 1;
};

// Random-projection forest candidates, optionally refined with
// neighbour-of-neighbour passes, then reranked exactly.
inline std::vector<KeyedEdge> build_knn_layer_approx(
    const std::vector<std::pair<std::string, std::vector<double>>>& vectors, std::size_t k,
    Layer layer, const ApproxKnnOptions& opt = {}) {
  using namespace knn_detail;
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  if (vectors.size() < k + 1) {
    throw Error(str_cat("kNN layer needs at least k+1 = ", k + 1, " vectors, got ", vectors.size()));
  }
  auto rows = unit_rows(vectors);
  const std::size_t n = rows.size();
  const std::size_t dim = rows.front().size();
  Rng rng(opt.seed);
  std::vector<std::set<std::size_t>> candidates(n);

  std::function<void(std::vector<std::size_t>)> split = [&](std::vector<std::size_t> ids) {
    if (ids.size() <= std::max(opt.leaf_size, k + 1)) {
      for (auto i : ids) {
        for (auto j : ids) {
          if (i != j) candidates[i].insert(j);
        }
      }
      return;
    }
    std::size_t a = ids[rng.uniform_index(ids.size())], b = ids[rng.uniform_index(ids.size())];
    std::vector<double> normal(dim);
    double offset = 0.0;
    for (std::size_t d = 0; d < dim; ++d) {
      normal[d] = rows[a][d] - rows[b][d];
      offset += normal[d] * (rows[a][d] + rows[b][d]) * 0.5;
    }
    std::vector<std::size_t> left, right;
    for (auto i : ids) (dot(rows[i], normal) < offset ? left : right).push_back(i);
    if (left.empty() || right.empty()) {
      rng.shuffle(ids);
      left.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(ids.size() / 2));
      right.assign(ids.begin() + static_cast<std::ptrdiff_t>(ids.size() / 2), ids.end());
    }
    split(std::move(left));
    split(std::move(right));
  };
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  for (int t = 0; t < opt.trees; ++t) split(all);

  auto rank = [&](std::size_t i, const std::set<std::size_t>& cand) {
    std::vector<std::pair<double, std::size_t>> scored;
    for (auto j : cand) scored.emplace_back(distance(rows[i], rows[j]), j);
    return top_k(scored, k);
  };
  std::vector<std::vector<std::pair<double, std::size_t>>> neighbours(n);
  for (std::size_t i = 0; i < n; ++i) neighbours[i] = rank(i, candidates[i]);
  for (int round = 0; round < opt.refine_rounds; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      std::set<std::size_t> cand;
      for (const auto& [d, j] : neighbours[i]) {
        cand.insert(j);
        for (const auto& [d2, l] : neighbours[j]) {
          if (l != i) cand.insert(l);
        }
      }
      neighbours[i] = rank(i, cand);
    }
  }
  return collect_edges(vectors, neighbours, layer);
}

// Each document links to its top_m tokens by TF-IDF weight (ties by token);
// zero-weight tokens never link. Weight = 1 / (1 + tfidf).
inline std::vector<KeyedEdge> build_cross_edges(
    const TfIdfTable& tfidf, std::size_t top_m,
    const std::function<bool(const std::string&)>& eligible = nullptr) {
  if (top_m < 1) throw std::invalid_argument("top_m must be at least 1");
  std::vector<KeyedEdge> out;
  for (std::size_t r = 0; r < tfidf.n_docs(); ++r) {
    std::vector<const TfIdfTable::Entry*> cand;
    for (const auto& e : tfidf.row(r)) {
      if (e.weight > 0.0 && (!eligible || eligible(e.token))) cand.push_back(&e);
    }
    std::size_t m = std::min(top_m, cand.size());
    std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(m), cand.end(),
                      [](const auto* x, const auto* y) {
                        return x->weight != y->weight ? x->weight > y->weight : x->token < y->token;
                      });
    for (std::size_t i = 0; i < m; ++i) {
      out.push_back(KeyedEdge{NodeId{Layer::document, tfidf.doc_ids()[r]},
                              NodeId{Layer::phrase, cand[i]->token}, 1.0 / (1.0 + cand[i]->weight),
                              EdgeTag::cross_tfidf});
    }
  }
  return out;
}

// Curated entity layer. Links connect declared entities; aliases map an
// entity to free text that is cleaned into a phrase token.
struct OntologyBackbone {
  std::set<std::string> entities;
  std::set<std::pair<std::string, std::string>> links;
  std::map<std::string, std::set<std::string>> aliases;

  bool empty() const { return entities.empty(); }
};

// TSV lines: "entity\t<name>", "link\t<a>\t<b>", "alias\t<entity>\t<text>".
inline OntologyBackbone load_backbone(std::istream& in) {
  OntologyBackbone bb;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::pair<std::string, std::string>>> pending_links, pending_aliases;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    if (f[0] == "entity" && f.size() == 2 && !f[1].empty()) {
      bb.entities.insert(f[1]);
    } else if (f[0] == "link" && f.size() == 3) {
      pending_links.push_back({line_no, {f[1], f[2]}});
    } else if (f[0] == "alias" && f.size() == 3) {
      pending_aliases.push_back({line_no, {f[1], f[2]}});
    } else {
      throw LoadError(str_cat("backbone line ", line_no, ": unrecognised record"));
    }
  }
  for (const auto& [no, link] : pending_links) {
    if (!bb.entities.count(link.first) || !bb.entities.count(link.second)) {
      throw LoadError(str_cat("backbone line ", no, ": link references undeclared entity"));
    }
    if (link.first == link.second) throw LoadError(str_cat("backbone line ", no, ": self link"));
    bb.links.insert(std::minmax(link.first, link.second));
  }
  for (const auto& [no, alias] : pending_aliases) {
    if (!bb.entities.count(alias.first)) {
      throw LoadError(str_cat("backbone line ", no, ": alias for undeclared entity"));
    }
    bb.aliases[alias.first].insert(alias.second);
  }
  return bb;
}

inline OntologyBackbone load_backbone_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open backbone file " + path);
  return load_backbone(in);
}

// Adds entity nodes, entity links and entity-alias edges. Existing edges are
// never removed or reweighted. Aliases that resolve to no phrase node in the
// network are skipped with a warning.
inline void attach_backbone(KnowledgeNetwork& network, const OntologyBackbone& backbone,
                            const EmbeddingSpace& space, const StopwordSet& stopwords) {
  for (const auto& e : backbone.entities) network.add_node(NodeId{Layer::entity, e});
  for (const auto& [a, b] : backbone.links) {
    network.add_edge(*network.find(NodeId{Layer::entity, a}), *network.find(NodeId{Layer::entity, b}),
                     kBackboneWeight, EdgeTag::backbone);
  }
  for (const auto& [entity, texts] : backbone.aliases) {
    auto ent = *network.find(NodeId{Layer::entity, entity});
    for (const auto& text : texts) {
      auto tokens = clean_text(text, stopwords);
      std::string token = join(tokens, std::string(1, kPhraseJoiner));
      auto phrase = network.find(NodeId{Layer::phrase, token});
      if (token.empty() || !phrase || !space.contains(token)) {
        warn(str_cat("alias '", text, "' of entity '", entity, "' matches no phrase node; skipped"));
        continue;
      }
      network.add_edge(ent, *phrase, kAliasWeight, EdgeTag::backbone);
    }
  }
}

// Divides every edge weight by the mean weight of its tag, so each tag's
// mean becomes 1.
inline void normalize_weights(KnowledgeNetwork& network) {
  std::array<double, kEdgeTagCount> sum{};
  std::array<std::size_t, kEdgeTagCount> count{};
  for (const auto& e : network.edges()) {
    sum[static_cast<int>(e.tag)] += e.weight;
    ++count[static_cast<int>(e.tag)];
  }
  for (int t = 0; t < kEdgeTagCount; ++t) {
    if (count[t] == 0) continue;
    double mean = sum[t] / static_cast<double>(count[t]);
    network.scale_weights(static_cast<EdgeTag>(t), 1.0 / mean);
  }
}

enum class NetworkFormat { text, binary };

inline constexpr std::uint32_t kNetworkVersion = 1;
inline constexpr char kNetworkTextMagic[] = "lbd-network";
inline constexpr char kNetworkBinaryMagic[4] = {'L', 'B', 'D', 'N'};

// Text: header "lbd-network\t<version>\t<nodes>\t<edges>", then
// "N\t<layer>\t<key>" rows and "E\t<u>\t<v>\t<weight>\t<tag>" rows.
// Binary (little-endian host layout): magic, u32 version, u64 nodes, u64 edges,
// nodes as (u8 layer, u32 length, bytes), edges as (u32, u32, f64, u8).
inline void save_network(const KnowledgeNetwork& net, std::ostream& out, NetworkFormat format) {
  if (format == NetworkFormat::text) {
    out << kNetworkTextMagic << '\t' << kNetworkVersion << '\t' << net.node_count() << '\t'
        << net.edge_count() << '\n';
    for (const auto& n : net.nodes()) {
      if (n.key.find_first_of("\t\n\r") != std::string::npos) {
        throw Error("node key contains a tab or newline: " + n.key);
      }
      out << "N\t" << layer_code(n.layer) << '\t' << n.key << '\n';
    }
    for (const auto& e : net.edges()) {
      out << "E\t" << e.u << '\t' << e.v << '\t' << format_double(e.weight) << '\t' << to_string(e.tag) << '\n';
    }
    return;
  }
  auto put = [&](const auto& value) { out.write(reinterpret_cast<const char*>(&value), sizeof(value)); };
  out.write(kNetworkBinaryMagic, 4);
  put(kNetworkVersion);
  put(static_cast<std::uint64_t>(net.node_count()));
  put(static_cast<std::uint64_t>(net.edge_count()));
  for (const auto& n : net.nodes()) {
    put(static_cast<std::uint8_t>(n.layer));
    put(static_cast<std::uint32_t>(n.key.size()));
    out.write(n.key.data(), static_cast<std::streamsize>(n.key.size()));
  }
  for (const auto& e : net.edges()) {
    put(e.u);
    put(e.v);
    put(e.weight);
    put(static_cast<std::uint8_t>(e.tag));
  }
}

namespace network_detail {

inline KnowledgeNetwork load_text(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw LoadError("network file: missing header");
  auto h = split(line, '\t');
  if (h.size() != 4 || h[0] != kNetworkTextMagic) throw LoadError("network file: malformed header");
  std::uint64_t version, n_nodes, n_edges;
  try {
    version = static_cast<std::uint64_t>(parse_int(h[1]));
    n_nodes = static_cast<std::uint64_t>(parse_int(h[2]));
    n_edges = static_cast<std::uint64_t>(parse_int(h[3]));
  } catch (const std::exception&) {
    throw LoadError("network file: malformed header");
  }
  if (version != kNetworkVersion) throw LoadError(str_cat("network file: unsupported version ", version));
  KnowledgeNetwork net;
  for (std::uint64_t i = 0; i < n_nodes; ++i) {
    if (!std::getline(in, line)) throw LoadError("network file: truncated node table");
    auto f = split(line, '\t');
    auto layer = f.size() == 3 && f[0] == "N" ? parse_layer_code(f[1]) : std::nullopt;
    if (!layer) throw LoadError(str_cat("network file: bad node row ", i));
    if (net.add_node(NodeId{*layer, f[2]}) != i) throw LoadError(str_cat("network file: duplicate node ", f[2]));
  }
  for (std::uint64_t i = 0; i < n_edges; ++i) {
    if (!std::getline(in, line)) throw LoadError("network file: truncated edge table");
    auto f = split(line, '\t');
    auto tag = f.size() == 5 && f[0] == "E" ? parse_edge_tag(f[4]) : std::nullopt;
    if (!tag) throw LoadError(str_cat("network file: bad edge row ", i));
    try {
      auto u = static_cast<NodeIndex>(parse_int(f[1]));
      auto v = static_cast<NodeIndex>(parse_int(f[2]));
      if (!net.add_edge(u, v, parse_double(f[3]), *tag)) throw LoadError("duplicate edge");
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoadError(str_cat("network file: bad edge row ", i, " (", e.what(), ")"));
    }
  }
  return net;
}

inline KnowledgeNetwork load_binary(std::istream& in) {
  auto get = [&](auto& value) {
    if (!in.read(reinterpret_cast<char*>(&value), sizeof(value))) throw LoadError("network file: truncated");
  };
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kNetworkBinaryMagic, 4) != 0) {
    throw LoadError("network file: bad magic");
  }
  std::uint32_t version;
  std::uint64_t n_nodes, n_edges;
  get(version);
  if (version != kNetworkVersion) throw LoadError(str_cat("network file: unsupported version ", version));
  get(n_nodes);
  get(n_edges);
  KnowledgeNetwork net;
  for (std::uint64_t i = 0; i < n_nodes; ++i) {
    std::uint8_t layer;
    std::uint32_t len;
    get(layer);
    get(len);
    if (layer > 2) throw LoadError("network file: bad layer");
    std::string key(len, '\0');
    if (len && !in.read(key.data(), len)) throw LoadError("network file: truncated");
    if (net.add_node(NodeId{static_cast<Layer>(layer), key}) != i) throw LoadError("network file: duplicate node");
  }
  for (std::uint64_t i = 0; i < n_edges; ++i) {
    NodeIndex u, v;
    double w;
    std::uint8_t tag;
    get(u);
    get(v);
    get(w);
    get(tag);
    if (tag >= kEdgeTagCount) throw LoadError("network file: bad edge tag");
    try {
      if (!net.add_edge(u, v, w, static_cast<EdgeTag>(tag))) throw LoadError("network file: duplicate edge");
    } catch (const LoadError&) {
      throw;
    } catch (const std::exception& e) {
      throw LoadError(str_cat("network file: bad edge ", i, " (", e.what(), ")"));
    }
  }
  return net;
}

}  // namespace network_detail

// Detects the format from the first bytes.
inline KnowledgeNetwork load_network(std::istream& in) {
  char first = static_cast<char>(in.peek());
  if (!in) throw LoadError("network file: empty");
  return first == kNetworkBinaryMagic[0] ? network_detail::load_binary(in) : network_detail::load_text(in);
}

inline void save_network_file(const KnowledgeNetwork& net, const std::string& path, NetworkFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write network file " + path);
  save_network(net, out, format);
  if (!out) throw IoError("error writing network file " + path);
}

inline KnowledgeNetwork load_network_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open network file " + path);
  return load_network(in);
}

// Compressed adjacency for read-only traversal.
class Adjacency {
 public:
  struct Arc {
    NodeIndex to;
    double weight;
  };

  explicit Adjacency(const KnowledgeNetwork& net) : offsets_(net.node_count() + 1, 0) {
    for (const auto& e : net.edges()) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 1; i < offsets_.size(); ++i) offsets_[i] += offsets_[i - 1];
    arcs_.resize(offsets_.back());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : net.edges()) {
      arcs_[fill[e.u]++] = Arc{e.v, e.weight};
      arcs_[fill[e.v]++] = Arc{e.u, e.weight};
    }
    for (std::size_t i = 0; i + 1 < offsets_.size(); ++i) {
      std::sort(arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]),
                arcs_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]),
                [](const Arc& a, const Arc& b) { return a.to < b.to; });
    }
  }

  std::span<const Arc> neighbours(NodeIndex u) const {
    return {arcs_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::size_t node_count() const noexcept { return offsets_.size() - 1; }

 private:
  std::vector<std::size_t> offsets_;
  std::vector<Arc> arcs_;
};

}  // namespace lbd
