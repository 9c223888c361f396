#pragma once

// Document ingestion, cleaning, phrase mining, sampling and corpus statistics.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbd/common.hpp"
#include "lbd/porter.hpp"
#include "lbd/stopwords_data.hpp"

namespace lbd {

// Joins the unigrams of a merged n-gram token. Never produced by cleaning.
inline constexpr char kPhraseJoiner = '_';

enum class DocKind { abstract, full_text };

inline std::string_view to_string(DocKind kind) {
  return kind == DocKind::abstract ? "abstract" : "full_text";
}

inline std::optional<DocKind> parse_doc_kind(std::string_view text) {
  if (text == "abstract") return DocKind::abstract;
  if (text == "full_text") return DocKind::full_text;
  return std::nullopt;
}

struct Document {
  std::string id;
  std::string title;
  std::string body;
  int pub_year = 0;
  DocKind kind = DocKind::abstract;
};

using Corpus = std::vector<Document>;

struct TokenizedDocument {
  std::string id;
  std::vector<std::string> tokens;
  int pub_year = 0;
  DocKind kind = DocKind::abstract;

  bool operator==(const TokenizedDocument&) const = default;
};

using TokenizedCorpus = std::vector<TokenizedDocument>;

using StopwordSet = std::unordered_set<std::string>;

struct IngestResult {
  Corpus corpus;
  std::size_t rejected = 0;
  std::vector<std::string> messages;
};

// Parses one JSONL record per line. Malformed records and duplicate ids are
// rejected with a warning; blank lines are ignored.
inline IngestResult ingest_jsonl(std::istream& in) {
  if (!in) throw IoError("corpus stream is not readable");
  IngestResult result;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  auto reject = [&](const std::string& why) {
    ++result.rejected;
    std::string msg = str_cat("line ", line_no, ": ", why);
    warn(msg);
    result.messages.push_back(std::move(msg));
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    nlohmann::json record;
    try {
      record = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      reject(str_cat("invalid JSON (", e.what(), ")"));
      continue;
    }
    if (!record.is_object()) {
      reject("record is not an object");
      continue;
    }
    Document doc;
    try {
      doc.id = record.at("id").get<std::string>();
      doc.title = record.at("title").get<std::string>();
      doc.body = record.at("body").get<std::string>();
      const auto& year = record.at("pub_year");
      if (!year.is_number_integer()) throw std::invalid_argument("pub_year is not an integer");
      doc.pub_year = year.get<int>();
      auto kind = parse_doc_kind(record.at("kind").get<std::string>());
      if (!kind) throw std::invalid_argument("kind must be abstract or full_text");
      doc.kind = *kind;
    } catch (const std::exception& e) {
      reject(str_cat("missing or invalid field (", e.what(), ")"));
      continue;
    }
    if (doc.id.empty()) {
      reject("empty id");
      continue;
    }
    if (doc.pub_year <= 0) {
      reject("pub_year must be positive");
      continue;
    }
    if (doc.title.empty() && doc.body.empty()) {
      reject("title and body both empty");
      continue;
    }
    if (!seen.insert(doc.id).second) {
      reject("duplicate id " + doc.id);
      continue;
    }
    result.corpus.push_back(std::move(doc));
  }
  if (in.bad()) throw IoError("error while reading corpus stream");
  return result;
}

inline IngestResult ingest_jsonl_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file " + path);
  return ingest_jsonl(in);
}

inline void write_jsonl(const Corpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus) {
    nlohmann::json record = {{"id", doc.id},
                             {"title", doc.title},
                             {"body", doc.body},
                             {"pub_year", doc.pub_year},
                             {"kind", std::string(to_string(doc.kind))}};
    out << record.dump() << '\n';
  }
}

inline StopwordSet default_stopwords() {
  StopwordSet out;
  for (auto stem : kDefaultStopwordStems) out.emplace(stem);
  return out;
}

// One stem per line; blank lines and '#' comments ignored.
inline StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open stopword file " + path);
  StopwordSet out;
  std::string line;
  while (std::getline(in, line)) {
    auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    auto end = line.find_last_not_of(" \t\r");
    std::string word = line.substr(start, end - start + 1);
    for (auto& ch : word) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    out.insert(word);
  }
  return out;
}

namespace corpus_detail {

// ASCII letters/digits and any non-ASCII byte (kept so UTF-8 letters survive).
inline bool is_word_byte(unsigned char c) { return std::isalnum(c) || c >= 0x80; }

inline void split_words(std::string_view text, std::vector<std::string>& out) {
  std::string current;
  auto flush = [&] {
    while (!current.empty() && current.back() == '-') current.pop_back();
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    auto c = static_cast<unsigned char>(text[i]);
    if (is_word_byte(c)) {
      current.push_back(static_cast<char>(c < 0x80 ? std::tolower(c) : c));
    } else if (c == '-' && !current.empty() && current.back() != '-' && i + 1 < text.size() &&
               is_word_byte(static_cast<unsigned char>(text[i + 1]))) {
      current.push_back('-');
    } else {
      flush();
    }
  }
  flush();
}

}  // namespace corpus_detail

// Lowercases, strips punctuation (intra-word hyphens survive), stems, and
// drops stopword stems. Title and body are tokenized as one text.
inline std::vector<std::string> clean_text(std::string_view text, const StopwordSet& stopwords) {
  std::vector<std::string> words;
  corpus_detail::split_words(text, words);
  std::vector<std::string> out;
  out.reserve(words.size());
  for (auto& w : words) {
    std::string stem = porter_stem(w);
    // Stemming a hyphenated word can expose a trailing hyphen ("x-e" -> "x-").
    while (!stem.empty() && stem.back() == '-') stem.pop_back();
    if (stem.empty() || stopwords.count(stem)) continue;
    out.push_back(std::move(stem));
  }
  return out;
}

inline std::vector<std::string> clean_and_tokenize(const Document& doc,
                                                   const StopwordSet& stopwords) {
  std::string text = doc.title;
  if (!text.empty() && !doc.body.empty()) text.push_back(' ');
  text += doc.body;
  return clean_text(text, stopwords);
}

inline TokenizedCorpus tokenize_corpus(const Corpus& corpus, const StopwordSet& stopwords,
                                       unsigned threads = 1) {
  TokenizedCorpus out(corpus.size());
  parallel_for(corpus.size(), threads, [&](std::size_t i) {
    const auto& doc = corpus[i];
    out[i] = TokenizedDocument{doc.id, clean_and_tokenize(doc, stopwords), doc.pub_year, doc.kind};
  });
  return out;
}

struct PhraseStats {
  long long corpus_count = 0;
  long long doc_frequency = 0;
  double score = 0.0;

  bool operator==(const PhraseStats&) const = default;
};

// Multi-word phrases keyed by their unigrams joined with a single space.
class PhraseVocabulary {
 public:
  void insert(std::string gram, PhraseStats stats) {
    std::size_t n = 1 + static_cast<std::size_t>(std::count(gram.begin(), gram.end(), ' '));
    max_n_ = std::max(max_n_, n);
    phrases_[std::move(gram)] = stats;
  }

  bool contains(const std::string& gram) const { return phrases_.count(gram) > 0; }
  const PhraseStats* find(const std::string& gram) const {
    auto it = phrases_.find(gram);
    return it == phrases_.end() ? nullptr : &it->second;
  }
  std::size_t size() const { return phrases_.size(); }
  bool empty() const { return phrases_.empty(); }
  std::size_t max_n() const { return max_n_; }
  const std::map<std::string, PhraseStats>& entries() const { return phrases_; }

  // Descending score, then lexicographic.
  std::vector<std::pair<std::string, PhraseStats>> ranked() const {
    std::vector<std::pair<std::string, PhraseStats>> out(phrases_.begin(), phrases_.end());
    std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
      return x.second.score > y.second.score;
    });
    return out;
  }

  bool operator==(const PhraseVocabulary& other) const { return phrases_ == other.phrases_; }

 private:
  std::map<std::string, PhraseStats> phrases_;
  std::size_t max_n_ = 0;
};

inline void write_phrase_tsv(const PhraseVocabulary& vocab, std::ostream& out) {
  for (const auto& [gram, stats] : vocab.ranked()) {
    out << gram << '\t' << stats.corpus_count << '\t' << stats.doc_frequency << '\t'
        << format_double(stats.score) << '\n';
  }
}

inline PhraseVocabulary read_phrase_tsv(std::istream& in) {
  PhraseVocabulary vocab;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) throw LoadError(str_cat("phrase file line ", line_no, ": expected 4 fields"));
    try {
      vocab.insert(fields[0], PhraseStats{parse_int(fields[1]), parse_int(fields[2]),
                                          parse_double(fields[3])});
    } catch (const std::invalid_argument&) {
      throw LoadError(str_cat("phrase file line ", line_no, ": bad number"));
    }
  }
  return vocab;
}

// Collocation mining by pointwise mutual information:
//   score(w1..wn) = log( P(gram) / prod P(wi) ),  P(x) = count(x) / total tokens.
// n-grams never span document boundaries.
inline PhraseVocabulary mine_phrases(const TokenizedCorpus& corpus, std::size_t max_n,
                                     long long min_count, double min_score) {
  if (max_n < 2) throw std::invalid_argument("max_n must be at least 2");
  if (min_count < 1) throw std::invalid_argument("min_count must be at least 1");
  PhraseVocabulary vocab;
  std::unordered_map<std::string, long long> unigram;
  long long total = 0;
  for (const auto& doc : corpus) {
    for (const auto& t : doc.tokens) ++unigram[t];
    total += static_cast<long long>(doc.tokens.size());
  }
  if (total == 0) return vocab;

  struct Counts {
    long long count = 0;
    long long docs = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Counts> grams;
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    const auto& tokens = corpus[d].tokens;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::string key = tokens[i];
      for (std::size_t n = 2; n <= max_n && i + n <= tokens.size(); ++n) {
        key.push_back(' ');
        key += tokens[i + n - 1];
        auto& c = grams[key];
        ++c.count;
        if (c.last_doc != d) {
          ++c.docs;
          c.last_doc = d;
        }
      }
    }
  }

  const double log_total = std::log(static_cast<double>(total));
  for (const auto& [key, c] : grams) {
    if (c.count < min_count) continue;
    double score = std::log(static_cast<double>(c.count)) - log_total;
    std::size_t start = 0;
    while (start <= key.size()) {
      auto end = key.find(' ', start);
      if (end == std::string::npos) end = key.size();
      auto it = unigram.find(key.substr(start, end - start));
      score -= std::log(static_cast<double>(it->second)) - log_total;
      start = end + 1;
    }
    if (score >= min_score) vocab.insert(key, PhraseStats{c.count, c.docs, score});
  }
  return vocab;
}

// Greedy leftmost, longest-match merging of known phrases.
inline std::vector<std::string> apply_phrases(const std::vector<std::string>& tokens,
                                              const PhraseVocabulary& vocab) {
  if (vocab.empty()) return tokens;
  std::vector<std::string> out;
  out.reserve(tokens.size());
  std::size_t i = 0;
  while (i < tokens.size()) {
    std::size_t longest = std::min(vocab.max_n(), tokens.size() - i);
    bool merged = false;
    for (std::size_t n = longest; n >= 2; --n) {
      std::string key = tokens[i];
      for (std::size_t j = 1; j < n; ++j) key += ' ' + tokens[i + j];
      if (vocab.contains(key)) {
        std::replace(key.begin(), key.end(), ' ', kPhraseJoiner);
        out.push_back(std::move(key));
        i += n;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(tokens[i++]);
  }
  return out;
}

inline TokenizedCorpus apply_phrases(const TokenizedCorpus& corpus, const PhraseVocabulary& vocab) {
  TokenizedCorpus out = corpus;
  for (auto& doc : out) doc.tokens = apply_phrases(doc.tokens, vocab);
  return out;
}

// Multi-word token back to a phrase-vocabulary key ("a_b" -> "a b").
inline std::string phrase_key(std::string_view token) {
  std::string key(token);
  std::replace(key.begin(), key.end(), kPhraseJoiner, ' ');
  return key;
}

struct CorpusStats {
  long long total_words = 0;
  long long unique_words = 0;
  long long corpus_size = 0;
  long long median_words_per_doc = 0;

  bool operator==(const CorpusStats&) const = default;
};

inline CorpusStats corpus_stats(const TokenizedCorpus& corpus) {
  CorpusStats stats;
  if (corpus.empty()) return stats;
  std::unordered_set<std::string_view> vocab;
  std::vector<long long> lengths;
  lengths.reserve(corpus.size());
  for (const auto& doc : corpus) {
    stats.total_words += static_cast<long long>(doc.tokens.size());
    lengths.push_back(static_cast<long long>(doc.tokens.size()));
    for (const auto& t : doc.tokens) vocab.insert(t);
  }
  stats.unique_words = static_cast<long long>(vocab.size());
  stats.corpus_size = static_cast<long long>(corpus.size());
  auto mid = lengths.begin() + static_cast<std::ptrdiff_t>((lengths.size() - 1) / 2);
  std::nth_element(lengths.begin(), mid, lengths.end());
  stats.median_words_per_doc = *mid;
  return stats;
}

inline void write_stats_header(std::ostream& out) {
  out << "corpus\ttotal_words\tunique_words\tcorpus_size\tmedian_words_per_doc\n";
}

inline void write_stats_row(std::ostream& out, std::string_view name, const CorpusStats& s) {
  out << name << '\t' << s.total_words << '\t' << s.unique_words << '\t' << s.corpus_size << '\t'
      << s.median_words_per_doc << '\n';
}

// Keeps documents published in or before cut_year.
template <typename Doc>
std::vector<Doc> cut_year_filter(const std::vector<Doc>& corpus, int cut_year) {
  std::vector<Doc> out;
  for (const auto& doc : corpus) {
    if (doc.pub_year <= cut_year) out.push_back(doc);
  }
  return out;
}

// Nested uniform samples without replacement: level i+1 keeps ceil(n_i / 2)
// documents of level i. Document order within each level follows the input.
template <typename Doc>
std::vector<std::vector<Doc>> halve_sample(const std::vector<Doc>& corpus, int levels,
                                           std::uint64_t seed) {
  if (levels < 1) throw std::invalid_argument("levels must be at least 1");
  Rng rng(seed);
  std::vector<std::vector<Doc>> out;
  out.push_back(corpus);
  std::vector<std::size_t> current(corpus.size());
  for (std::size_t i = 0; i < current.size(); ++i) current[i] = i;
  for (int level = 1; level <= levels; ++level) {
    std::vector<std::size_t> picked = current;
    rng.shuffle(picked);
    picked.resize((current.size() + 1) / 2);
    std::sort(picked.begin(), picked.end());
    std::vector<Doc> sample;
    sample.reserve(picked.size());
    for (auto idx : picked) sample.push_back(corpus[idx]);
    out.push_back(std::move(sample));
    current = std::move(picked);
  }
  return out;
}

// Tokenized corpus file: one document per line,
//   id \t pub_year \t kind \t space-separated tokens
inline void write_tokenized(const TokenizedCorpus& corpus, std::ostream& out) {
  for (const auto& doc : corpus) {
    out << doc.id << '\t' << doc.pub_year << '\t' << to_string(doc.kind) << '\t';
    for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
      if (i) out << ' ';
      out << doc.tokens[i];
    }
    out << '\n';
  }
}

inline TokenizedCorpus read_tokenized(std::istream& in) {
  TokenizedCorpus corpus;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split(line, '\t');
    if (fields.size() != 4) throw LoadError(str_cat("tokenized corpus line ", line_no, ": expected 4 fields"));
    TokenizedDocument doc;
    doc.id = fields[0];
    try {
      doc.pub_year = static_cast<int>(parse_int(fields[1]));
    } catch (const std::invalid_argument&) {
      throw LoadError(str_cat("tokenized corpus line ", line_no, ": bad year"));
    }
    auto kind = parse_doc_kind(fields[2]);
    if (!kind) throw LoadError(str_cat("tokenized corpus line ", line_no, ": bad kind"));
    doc.kind = *kind;
    if (!fields[3].empty()) doc.tokens = split(fields[3], ' ');
    corpus.push_back(std::move(doc));
  }
  return corpus;
}

}  // namespace lbd
