#pragma once

// Skip-gram negative-sampling phrase embeddings, TF-IDF weights and
// TF-IDF weighted document centroids.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "lbd/common.hpp"
#include "lbd/corpus.hpp"

namespace lbd {

class EmbeddingSpace {
 public:
  EmbeddingSpace() = default;
  EmbeddingSpace(std::size_t dim, std::vector<std::string> tokens, std::vector<float> data)
      : dim_(dim), tokens_(std::move(tokens)), data_(std::move(data)) {
    if (data_.size() != dim_ * tokens_.size()) throw std::invalid_argument("embedding matrix size mismatch");
    index_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
      if (!index_.emplace(tokens_[i], i).second) throw std::invalid_argument("duplicate token " + tokens_[i]);
    }
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return tokens_.size(); }
  const std::vector<std::string>& tokens() const noexcept { return tokens_; }
  bool contains(std::string_view token) const { return index_.count(std::string(token)) > 0; }

  std::optional<std::size_t> index_of(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const float> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  std::vector<double> row_as_double(std::size_t i) const {
    auto r = row(i);
    return {r.begin(), r.end()};
  }

  const std::vector<float>& data() const noexcept { return data_; }

  bool operator==(const EmbeddingSpace& o) const {
    return dim_ == o.dim_ && tokens_ == o.tokens_ && data_ == o.data_;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<float> data_;
};

// The stored vector of a term; OovError when the term was never trained.
inline std::vector<double> embed_term(const EmbeddingSpace& space, std::string_view term) {
  auto idx = space.index_of(term);
  if (!idx) throw OovError(std::string(term));
  return space.row_as_double(*idx);
}

struct SgnsOptions {
  std::size_t dim = 100;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  long long min_count = 2;
  double learning_rate = 0.025;
  std::uint64_t seed = 1;
  // 1 = deterministic; >1 = lock-free asynchronous updates (not reproducible).
  unsigned threads = 1;
};

namespace sgns_detail {

inline constexpr double kMaxExp = 6.0;

inline double sigmoid(double x) {
  if (x > kMaxExp) return 1.0;
  if (x < -kMaxExp) return 0.0;
  return 1.0 / (1.0 + std::exp(-x));
}

// Sampling distribution over the vocabulary proportional to count^0.75.
class NegativeTable {
 public:
  explicit NegativeTable(const std::vector<long long>& counts) {
    cumulative_.reserve(counts.size());
    double total = 0.0;
    for (auto c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative_.push_back(total);
    }
    for (auto& c : cumulative_) c /= total;
  }

  std::size_t sample(Rng& rng) const {
    double u = rng.uniform01();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
  }

 private:
  std::vector<double> cumulative_;
};

template <bool kShared>
inline float load(float& x) {
  if constexpr (kShared) {
    return std::atomic_ref<float>(x).load(std::memory_order_relaxed);
  } else {
    return x;
  }
}

template <bool kShared>
inline void add(float& x, float delta) {
  if constexpr (kShared) {
    std::atomic_ref<float> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta, std::memory_order_relaxed);
  } else {
    x += delta;
  }
}

struct Model {
  std::size_t dim;
  std::vector<float> input;   // phrase vectors (the result)
  std::vector<float> output;  // context vectors
};

// Trains on the given documents (vocabulary indices). `processed` is the
// running count of centre words, shared across threads for learning-rate decay.
template <bool kShared>
void train_shard(Model& model, const std::vector<std::vector<std::size_t>>& docs,
                 std::size_t begin, std::size_t end, const SgnsOptions& opt,
                 const NegativeTable& negatives, Rng& rng, std::atomic<long long>& processed,
                 long long total_work) {
  const std::size_t dim = model.dim;
  std::vector<float> grad(dim);
  for (std::size_t d = begin; d < end; ++d) {
    const auto& sentence = docs[d];
    const long long n = static_cast<long long>(sentence.size());
    for (long long i = 0; i < n; ++i) {
      long long done = processed.fetch_add(1, std::memory_order_relaxed);
      double progress = static_cast<double>(done) / static_cast<double>(total_work + 1);
      float alpha = static_cast<float>(opt.learning_rate * std::max(1e-4, 1.0 - progress));
      const std::size_t centre = sentence[static_cast<std::size_t>(i)];
      float* in = &model.input[centre * dim];
      const long long shrink = static_cast<long long>(rng.uniform_index(static_cast<std::uint64_t>(opt.window)));
      for (long long j = i - opt.window + shrink; j <= i + opt.window - shrink; ++j) {
        if (j < 0 || j >= n || j == i) continue;
        const std::size_t context = sentence[static_cast<std::size_t>(j)];
        std::fill(grad.begin(), grad.end(), 0.0f);
        for (int s = 0; s <= opt.negatives; ++s) {
          std::size_t target;
          float label;
          if (s == 0) {
            target = context;
            label = 1.0f;
          } else {
            target = negatives.sample(rng);
            if (target == context) continue;
            label = 0.0f;
          }
          float* out = &model.output[target * dim];
          double f = 0.0;
          for (std::size_t k = 0; k < dim; ++k) f += static_cast<double>(load<kShared>(in[k])) * load<kShared>(out[k]);
          float g = static_cast<float>((label - sigmoid(f)) * alpha);
          for (std::size_t k = 0; k < dim; ++k) grad[k] += g * load<kShared>(out[k]);
          for (std::size_t k = 0; k < dim; ++k) add<kShared>(out[k], g * load<kShared>(in[k]));
        }
        for (std::size_t k = 0; k < dim; ++k) add<kShared>(in[k], grad[k]);
      }
    }
  }
}

}  // namespace sgns_detail

// Skip-gram with negative sampling over every token with count >= min_count.
// Vocabulary order is descending count, then lexicographic.
inline EmbeddingSpace train_embeddings(const TokenizedCorpus& corpus, const SgnsOptions& opt) {
  using namespace sgns_detail;
  if (opt.dim < 2) throw std::invalid_argument("embedding dim must be at least 2");
  if (opt.window < 1 || opt.negatives < 0 || opt.epochs < 1) throw std::invalid_argument("invalid SGNS options");
  if (corpus.empty()) throw Error("cannot train embeddings on an empty corpus");

  std::unordered_map<std::string, long long> counts;
  for (const auto& doc : corpus) {
    for (const auto& t : doc.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, long long>> vocab;
  for (auto& [t, c] : counts) {
    if (c >= opt.min_count) vocab.emplace_back(t, c);
  }
  if (vocab.size() < 2) throw Error("degenerate vocabulary: fewer than 2 distinct trainable tokens");
  std::sort(vocab.begin(), vocab.end(), [](const auto& x, const auto& y) {
    return x.second != y.second ? x.second > y.second : x.first < y.first;
  });

  std::unordered_map<std::string, std::size_t> index;
  std::vector<std::string> tokens;
  std::vector<long long> freq;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    index.emplace(vocab[i].first, i);
    tokens.push_back(vocab[i].first);
    freq.push_back(vocab[i].second);
  }

  std::vector<std::vector<std::size_t>> docs;
  docs.reserve(corpus.size());
  long long words = 0;
  for (const auto& doc : corpus) {
    std::vector<std::size_t> ids;
    for (const auto& t : doc.tokens) {
      auto it = index.find(t);
      if (it != index.end()) ids.push_back(it->second);
    }
    words += static_cast<long long>(ids.size());
    docs.push_back(std::move(ids));
  }

  const std::size_t dim = opt.dim;
  Model model{dim, std::vector<float>(tokens.size() * dim), std::vector<float>(tokens.size() * dim, 0.0f)};
  Rng init_rng(opt.seed);
  for (auto& x : model.input) {
    x = static_cast<float>((init_rng.uniform01() - 0.5) / static_cast<double>(dim));
  }

  NegativeTable table(freq);
  std::atomic<long long> processed{0};
  const long long total_work = words * opt.epochs;
  for (int epoch = 0; epoch < opt.epochs; ++epoch) {
    if (opt.threads <= 1) {
      Rng rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch) + 1);
      train_shard<false>(model, docs, 0, docs.size(), opt, table, rng, processed, total_work);
    } else {
      std::vector<std::thread> pool;
      const std::size_t shards = opt.threads;
      const std::size_t block = (docs.size() + shards - 1) / shards;
      for (std::size_t t = 0; t < shards; ++t) {
        std::size_t begin = t * block, end = std::min(docs.size(), begin + block);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end, t] {
          Rng rng(opt.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(epoch) * 1000003ULL + t + 1);
          train_shard<true>(model, docs, begin, end, opt, table, rng, processed, total_work);
        });
      }
      for (auto& th : pool) th.join();
    }
  }
  return EmbeddingSpace(dim, std::move(tokens), std::move(model.input));
}

// Text format: "dim <d> vocab <n>" then one "<token> <d floats>" line per token.
inline void save_embeddings(const EmbeddingSpace& space, std::ostream& out) {
  out << "dim " << space.dim() << " vocab " << space.size() << '\n';
  char buf[32];
  for (std::size_t i = 0; i < space.size(); ++i) {
    out << space.tokens()[i];
    for (float x : space.row(i)) {
      std::snprintf(buf, sizeof(buf), "%.9g", static_cast<double>(x));
      out << ' ' << buf;
    }
    out << '\n';
  }
}

inline EmbeddingSpace load_embeddings(std::istream& in) {
  std::string word_dim, word_vocab;
  std::size_t dim = 0, n = 0;
  if (!(in >> word_dim >> dim >> word_vocab >> n) || word_dim != "dim" || word_vocab != "vocab" || dim == 0) {
    throw LoadError("embedding file: malformed header");
  }
  std::vector<std::string> tokens;
  std::vector<float> data;
  tokens.reserve(n);
  data.reserve(n * dim);
  std::string token, value;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(in >> token)) throw LoadError(str_cat("embedding file: truncated at row ", i));
    tokens.push_back(token);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!(in >> value)) throw LoadError(str_cat("embedding file: truncated at row ", i));
      char* end = nullptr;
      float x = std::strtof(value.c_str(), &end);
      if (end != value.c_str() + value.size() || !std::isfinite(x)) {
        throw LoadError(str_cat("embedding file: bad value in row ", i));
      }
      data.push_back(x);
    }
  }
  try {
    return EmbeddingSpace(dim, std::move(tokens), std::move(data));
  } catch (const std::invalid_argument& e) {
    throw LoadError(std::string("embedding file: ") + e.what());
  }
}

// Raw-tf times natural-log idf. Every token occurring in a document gets an
// entry; tokens present in all documents carry weight 0.
class TfIdfTable {
 public:
  struct Entry {
    std::string token;
    double weight;
  };

  std::size_t n_docs() const noexcept { return rows_.size(); }
  const std::vector<std::string>& doc_ids() const noexcept { return doc_ids_; }
  const std::unordered_map<std::string, long long>& doc_freq() const noexcept { return doc_freq_; }

  std::optional<std::size_t> row_of(std::string_view doc_id) const {
    auto it = row_index_.find(std::string(doc_id));
    if (it == row_index_.end()) return std::nullopt;
    return it->second;
  }

  // Entries sorted by token.
  const std::vector<Entry>& row(std::size_t r) const { return rows_[r]; }

  double weight(std::string_view doc_id, std::string_view token) const {
    auto r = row_of(doc_id);
    if (!r) return 0.0;
    const auto& entries = rows_[*r];
    auto it = std::lower_bound(entries.begin(), entries.end(), token,
                               [](const Entry& e, std::string_view t) { return e.token < t; });
    return (it != entries.end() && it->token == token) ? it->weight : 0.0;
  }

  friend TfIdfTable compute_tfidf(const TokenizedCorpus& corpus);

 private:
  std::vector<std::string> doc_ids_;
  std::unordered_map<std::string, std::size_t> row_index_;
  std::vector<std::vector<Entry>> rows_;
  std::unordered_map<std::string, long long> doc_freq_;
};

inline TfIdfTable compute_tfidf(const TokenizedCorpus& corpus) {
  TfIdfTable table;
  std::vector<std::map<std::string, long long>> tf(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (const auto& t : corpus[d].tokens) ++tf[d][t];
    for (const auto& [t, c] : tf[d]) ++table.doc_freq_[t];
  }
  const double n = static_cast<double>(corpus.size());
  table.rows_.resize(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    table.doc_ids_.push_back(corpus[d].id);
    table.row_index_.emplace(corpus[d].id, d);
    auto& row = table.rows_[d];
    row.reserve(tf[d].size());
    for (const auto& [t, c] : tf[d]) {
      double idf = std::log(n / static_cast<double>(table.doc_freq_.at(t)));
      row.push_back({t, static_cast<double>(c) * idf});
    }
  }
  return table;
}

struct DocumentVector {
  std::string id;
  std::vector<double> vector;
};

// TF-IDF weighted mean of the in-vocabulary token vectors; zero when the
// total weight is zero.
inline DocumentVector doc_centroid(const EmbeddingSpace& space, std::string_view doc_id,
                                   const TfIdfTable& tfidf) {
  auto r = tfidf.row_of(doc_id);
  if (!r) throw std::invalid_argument("document not covered by TF-IDF table: " + std::string(doc_id));
  DocumentVector out{std::string(doc_id), std::vector<double>(space.dim(), 0.0)};
  double total = 0.0;
  for (const auto& e : tfidf.row(*r)) {
    auto idx = space.index_of(e.token);
    if (!idx || e.weight <= 0.0) continue;
    auto v = space.row(*idx);
    for (std::size_t k = 0; k < v.size(); ++k) out.vector[k] += e.weight * static_cast<double>(v[k]);
    total += e.weight;
  }
  if (total > 0.0) {
    for (auto& x : out.vector) x /= total;
  }
  return out;
}

inline DocumentVector doc_centroid(const EmbeddingSpace& space, const TokenizedDocument& doc,
                                   const TfIdfTable& tfidf) {
  return doc_centroid(space, doc.id, tfidf);
}

}  // namespace lbd
