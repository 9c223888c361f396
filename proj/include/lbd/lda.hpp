#pragma once

// Latent Dirichlet allocation fitted by collapsed Gibbs sampling.

#include <algorithm>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lbd/common.hpp"

namespace lbd {

inline constexpr std::size_t kTopWordsPerTopic = 10;

struct TopicModel {
  int k = 0;
  // Sorted token list; word_dists[t][w] is P(vocabulary[w] | topic t).
  std::vector<std::string> vocabulary;
  std::vector<std::vector<double>> word_dists;
  // Tokens assigned to each topic by the final sweep.
  std::vector<long long> topic_doc_counts;
  std::vector<std::vector<std::string>> top_words;

  double probability(int topic, std::string_view token) const {
    auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), token);
    if (it == vocabulary.end() || *it != token) return 0.0;
    return word_dists[static_cast<std::size_t>(topic)][static_cast<std::size_t>(it - vocabulary.begin())];
  }
};

struct LdaOptions {
  int k = 20;
  int iterations = 500;
  // Non-positive alpha means the customary 50 / k.
  double alpha = 0.0;
  double beta = 0.01;
  std::uint64_t seed = 1;
};

// Topic distributions are the smoothed counts of the final assignment:
//   P(w | t) = (n_tw + beta) / (n_t + V beta).
inline TopicModel fit_lda(const std::vector<const std::vector<std::string>*>& docs, const LdaOptions& opt) {
  if (opt.k < 1) throw std::invalid_argument("topic count must be at least 1");
  if (opt.iterations < 0) throw std::invalid_argument("iterations must be non-negative");
  if (!(opt.beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const std::size_t k = static_cast<std::size_t>(opt.k);
  const double alpha = opt.alpha > 0.0 ? opt.alpha : 50.0 / static_cast<double>(opt.k);
  const double beta = opt.beta;

  TopicModel model;
  model.k = opt.k;
  {
    std::vector<std::string> vocab;
    for (const auto* d : docs) vocab.insert(vocab.end(), d->begin(), d->end());
    std::sort(vocab.begin(), vocab.end());
    vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
    model.vocabulary = std::move(vocab);
  }
  if (model.vocabulary.empty()) throw Error("LDA input has no tokens: every document is empty");
  const std::size_t v_size = model.vocabulary.size();
  std::unordered_map<std::string_view, std::uint32_t> word_id;
  word_id.reserve(v_size);
  for (std::size_t w = 0; w < v_size; ++w) word_id.emplace(model.vocabulary[w], static_cast<std::uint32_t>(w));

  std::vector<std::vector<std::uint32_t>> words(docs.size());
  std::vector<std::vector<std::uint32_t>> topic(docs.size());
  std::vector<std::uint32_t> doc_topic(docs.size() * k, 0);
  std::vector<std::uint32_t> topic_word(k * v_size, 0);
  std::vector<long long> topic_total(k, 0);

  Rng rng(opt.seed);
  for (std::size_t d = 0; d < docs.size(); ++d) {
    words[d].reserve(docs[d]->size());
    topic[d].reserve(docs[d]->size());
    for (const auto& token : *docs[d]) {
      auto w = word_id.at(token);
      auto t = static_cast<std::uint32_t>(rng.uniform_index(k));
      words[d].push_back(w);
      topic[d].push_back(t);
      ++doc_topic[d * k + t];
      ++topic_word[t * v_size + w];
      ++topic_total[t];
    }
  }

  const double v_beta = static_cast<double>(v_size) * beta;
  std::vector<double> cumulative(k);
  for (int it = 0; it < opt.iterations; ++it) {
    for (std::size_t d = 0; d < docs.size(); ++d) {
      auto* dt = &doc_topic[d * k];
      for (std::size_t i = 0; i < words[d].size(); ++i) {
        const auto w = words[d][i];
        auto t = topic[d][i];
        --dt[t];
        --topic_word[t * v_size + w];
        --topic_total[t];
        double total = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
          total += (dt[j] + alpha) * (topic_word[j * v_size + w] + beta) /
                   (static_cast<double>(topic_total[j]) + v_beta);
          cumulative[j] = total;
        }
        double u = rng.uniform01() * total;
        t = static_cast<std::uint32_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        if (t >= k) t = static_cast<std::uint32_t>(k - 1);
        topic[d][i] = t;
        ++dt[t];
        ++topic_word[t * v_size + w];
        ++topic_total[t];
      }
    }
  }

  model.word_dists.assign(k, std::vector<double>(v_size));
  model.topic_doc_counts = topic_total;
  model.top_words.resize(k);
  for (std::size_t t = 0; t < k; ++t) {
    const double denom = static_cast<double>(topic_total[t]) + v_beta;
    auto& dist = model.word_dists[t];
    for (std::size_t w = 0; w < v_size; ++w) dist[w] = (topic_word[t * v_size + w] + beta) / denom;
    std::vector<std::uint32_t> order(v_size);
    for (std::size_t w = 0; w < v_size; ++w) order[w] = static_cast<std::uint32_t>(w);
    std::size_t top = std::min(kTopWordsPerTopic, v_size);
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(top), order.end(),
                      [&](auto a, auto b) { return dist[a] != dist[b] ? dist[a] > dist[b] : a < b; });
    for (std::size_t i = 0; i < top; ++i) model.top_words[t].push_back(model.vocabulary[order[i]]);
  }
  return model;
}

inline TopicModel fit_lda(const std::vector<std::vector<std::string>>& docs, const LdaOptions& opt) {
  std::vector<const std::vector<std::string>*> ptrs;
  ptrs.reserve(docs.size());
  for (const auto& d : docs) ptrs.push_back(&d);
  return fit_lda(ptrs, opt);
}

}  // namespace lbd
