#pragma once

// Generators for synthetic corpora with known structure.

#include <cmath>
#include <string>
#include <vector>

#include "lbd/common.hpp"
#include "lbd/corpus.hpp"
#include "lbd/validation.hpp"

namespace lbd::synth {

// Zipf(s) sampler over ranks [0, n).
class ZipfSampler {
 public:
  ZipfSampler(std::size_t n, double s) : cdf_(n) {
    double total = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      total += 1.0 / std::pow(static_cast<double>(r + 1), s);
      cdf_[r] = total;
    }
    for (auto& c : cdf_) c /= total;
  }
  std::size_t operator()(Rng& rng) const {
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), rng.uniform01());
    return std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()), cdf_.size() - 1);
  }

 private:
  std::vector<double> cdf_;
};

inline std::string numbered(std::string_view prefix, std::size_t i, int width = 3) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*zu", width, i);
  return std::string(prefix) + buf;
}

// Log-normal length with the given median, at least 5 tokens.
inline std::size_t draw_length(Rng& rng, std::size_t median, double sigma = 0.35) {
  double len = static_cast<double>(median) * std::exp(sigma * rng.normal());
  return std::max<std::size_t>(5, static_cast<std::size_t>(std::lround(len)));
}

struct BridgeOptions {
  std::size_t triples = 50;
  std::size_t distractors = 50;
  std::size_t documents = 2000;
  std::size_t median_length = 100;
  std::size_t topic_words = 10;
  std::size_t background_vocab = 2000;
  // Per-token probabilities inside a themed document.
  double term_rate = 0.04;
  double topic_rate = 0.30;
  double distractor_rate = 0.03;
  // Share of documents published after the cut year that mention A and C
  // together (invisible to a system built at the cut year).
  double post_cut_share = 0.02;
  int cut_year = 2014;
  std::uint64_t seed = 1;
};

struct BridgeWorld {
  Corpus corpus;
  std::vector<PredicateRecord> predicates;
  std::vector<std::string> a_terms, b_terms, c_terms, distractors;
};

inline std::string a_term(std::size_t i) { return numbered("aterm", i); }
inline std::string b_term(std::size_t i) { return numbered("bterm", i); }
inline std::string c_term(std::size_t i) { return numbered("cterm", i); }

// Triples (A_i, B_i, C_i): documents up to the cut year pair A_i with B_i or
// B_i with C_i, never A_i with C_i; each triple has its own topic words.
// Predicates record A-B and B-C before the cut and A-C after it; distractor
// terms appear at random and form a chain of pre-cut predicates.
inline BridgeWorld bridge_world(const BridgeOptions& opt) {
  if (opt.triples < 1 || opt.documents < 1) throw std::invalid_argument("bridge world needs triples and documents");
  BridgeWorld w;
  Rng rng(opt.seed);
  ZipfSampler background(opt.background_vocab, 1.0);
  for (std::size_t i = 0; i < opt.triples; ++i) {
    w.a_terms.push_back(a_term(i));
    w.b_terms.push_back(b_term(i));
    w.c_terms.push_back(c_term(i));
  }
  for (std::size_t j = 0; j < opt.distractors; ++j) w.distractors.push_back(numbered("dist", j));
  auto topic_word = [](std::size_t triple, std::size_t j) { return numbered("tw", triple) + numbered("x", j, 2); };

  for (std::size_t d = 0; d < opt.documents; ++d) {
    const std::size_t triple = rng.uniform_index(opt.triples);
    bool post_cut = rng.uniform01() < opt.post_cut_share;
    int theme = post_cut ? 2 : static_cast<int>(rng.uniform_index(2));
    const std::string& first = theme == 1 ? w.b_terms[triple] : w.a_terms[triple];
    const std::string& second = theme == 0 ? w.b_terms[triple] : w.c_terms[triple];
    std::size_t len = draw_length(rng, opt.median_length);
    std::vector<std::string> tokens;
    tokens.reserve(len + 2);
    // Each themed document names both of its terms at least once.
    tokens.push_back(first);
    tokens.push_back(second);
    for (std::size_t t = 2; t < len; ++t) {
      double u = rng.uniform01();
      if (u < opt.term_rate) {
        tokens.push_back(rng.uniform01() < 0.5 ? first : second);
      } else if (u < opt.term_rate + opt.topic_rate) {
        tokens.push_back(topic_word(triple, rng.uniform_index(opt.topic_words)));
      } else if (u < opt.term_rate + opt.topic_rate + opt.distractor_rate && !w.distractors.empty()) {
        tokens.push_back(w.distractors[rng.uniform_index(w.distractors.size())]);
      } else {
        tokens.push_back(numbered("bg", background(rng), 4));
      }
    }
    rng.shuffle(tokens);
    Document doc;
    doc.id = numbered("doc", d, 6);
    doc.title = tokens.front();
    std::vector<std::string> rest(tokens.begin() + 1, tokens.end());
    doc.body = join(rest, " ");
    doc.pub_year = post_cut ? opt.cut_year + 1 + static_cast<int>(rng.uniform_index(3))
                            : opt.cut_year - 14 + static_cast<int>(rng.uniform_index(15));
    doc.kind = opt.median_length >= 500 ? DocKind::full_text : DocKind::abstract;
    w.corpus.push_back(std::move(doc));
  }

  for (std::size_t i = 0; i < opt.triples; ++i) {
    w.predicates.push_back({w.a_terms[i], w.b_terms[i], opt.cut_year - 4});
    w.predicates.push_back({w.b_terms[i], w.c_terms[i], opt.cut_year - 3});
    w.predicates.push_back({w.a_terms[i], w.c_terms[i], opt.cut_year + 2});
  }
  for (std::size_t j = 0; j + 1 < w.distractors.size(); ++j) {
    w.predicates.push_back({w.distractors[j], w.distractors[j + 1], opt.cut_year - 6});
  }
  return w;
}

struct CliqueWorld {
  Corpus corpus;
  std::vector<std::string> clique_a, clique_b;
};

// Every document draws its words uniformly from one of two disjoint cliques.
inline CliqueWorld two_clique_world(std::size_t documents, std::size_t clique_size, std::size_t doc_length,
                                    std::uint64_t seed) {
  CliqueWorld w;
  Rng rng(seed);
  for (std::size_t i = 0; i < clique_size; ++i) {
    w.clique_a.push_back(numbered("alpha", i));
    w.clique_b.push_back(numbered("omega", i));
  }
  for (std::size_t d = 0; d < documents; ++d) {
    const auto& clique = (d % 2 == 0) ? w.clique_a : w.clique_b;
    std::vector<std::string> tokens;
    for (std::size_t t = 0; t < doc_length; ++t) tokens.push_back(clique[rng.uniform_index(clique.size())]);
    w.corpus.push_back(Document{numbered("doc", d, 6), "", join(tokens, " "), 2000, DocKind::abstract});
  }
  return w;
}

struct PlantedTopics {
  std::vector<std::vector<std::string>> docs;
  std::vector<std::string> vocabulary;
  // distributions[t][w] over `vocabulary`.
  std::vector<std::vector<double>> distributions;
};

// Topics with disjoint supports of `words_per_topic` words each, Zipf-shaped
// weights; each document mixes topics with Dirichlet(alpha) proportions.
inline PlantedTopics planted_topics(std::size_t topics, std::size_t words_per_topic, std::size_t documents,
                                    std::size_t doc_length, double alpha, std::uint64_t seed) {
  PlantedTopics out;
  Rng rng(seed);
  const std::size_t v = topics * words_per_topic;
  for (std::size_t t = 0; t < topics; ++t) {
    for (std::size_t j = 0; j < words_per_topic; ++j) out.vocabulary.push_back(numbered("t", t, 2) + numbered("w", j, 3));
  }
  out.distributions.assign(topics, std::vector<double>(v, 0.0));
  std::vector<ZipfSampler> samplers;
  for (std::size_t t = 0; t < topics; ++t) {
    double total = 0.0;
    for (std::size_t j = 0; j < words_per_topic; ++j) total += 1.0 / static_cast<double>(j + 1);
    for (std::size_t j = 0; j < words_per_topic; ++j) {
      out.distributions[t][t * words_per_topic + j] = 1.0 / static_cast<double>(j + 1) / total;
    }
    samplers.emplace_back(words_per_topic, 1.0);
  }
  for (std::size_t d = 0; d < documents; ++d) {
    std::vector<double> theta(topics);
    double s = 0.0;
    for (auto& x : theta) s += (x = rng.gamma(alpha));
    std::vector<std::string> doc;
    for (std::size_t i = 0; i < doc_length; ++i) {
      double u = rng.uniform01() * s, acc = 0.0;
      std::size_t t = 0;
      for (; t + 1 < topics; ++t) {
        acc += theta[t];
        if (u < acc) break;
      }
      doc.push_back(out.vocabulary[t * words_per_topic + samplers[t](rng)]);
    }
    out.docs.push_back(std::move(doc));
  }
  return out;
}

}  // namespace lbd::synth
