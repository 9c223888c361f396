#pragma once

// End-to-end system construction (corpus -> embedding -> network), its
// configuration, and the on-disk system directory with a manifest.

#include <openssl/evp.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbd/common.hpp"
#include "lbd/corpus.hpp"
#include "lbd/embedding.hpp"
#include "lbd/network.hpp"
#include "lbd/query.hpp"
#include "lbd/ranking.hpp"
#include "lbd/validation.hpp"

namespace lbd {

// Bad command-line or configuration input.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct PipelineConfig {
  std::size_t dim = 100;
  std::size_t knn_k = 10;
  std::size_t cross_top_m = 20;
  std::size_t p = 5000;
  int k_topics = 20;
  int lda_iterations = 500;
  int cut_year = 2014;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool deterministic = false;

  std::size_t phrase_max_n = 3;
  long long phrase_min_count = 5;
  double phrase_min_score = 3.0;
  int window = 5;
  int negatives = 5;
  int epochs = 5;
  long long min_count = 2;
  double learning_rate = 0.025;
  bool approx_knn = false;
  int approx_trees = 8;
  double lda_alpha = 0.0;
  double lda_beta = 0.01;
  std::size_t neighbors_n = 3;
  TopicAggregation aggregation = TopicAggregation::min;
  std::size_t validation_size = 2000;
  long long poly_budget = 1000000;
  NetworkFormat network_format = NetworkFormat::text;

  // Threads for SGNS; deterministic mode pins the reproducible single-writer
  // trainer. Every other stage is thread-count independent.
  unsigned embedding_threads() const { return deterministic ? 1u : threads; }

  SgnsOptions sgns() const {
    return SgnsOptions{dim, window, negatives, epochs, min_count, learning_rate, seed, embedding_threads()};
  }
  QueryConfig query() const {
    QueryConfig q;
    q.p = p;
    q.k = k_topics;
    q.lda_iterations = lda_iterations;
    q.alpha = lda_alpha;
    q.beta = lda_beta;
    q.seed = seed;
    q.threads = threads;
    return q;
  }
  MetricOptions metrics() const { return MetricOptions{neighbors_n, aggregation}; }
};

namespace config_detail {

template <typename T>
T parse_positive(const std::string& key, const std::string& value) {
  long long v;
  try {
    v = parse_int(value);
  } catch (const std::exception&) {
    throw UsageError(str_cat("config ", key, ": expected an integer, got '", value, "'"));
  }
  if (v < 1) throw UsageError(str_cat("config ", key, ": must be positive"));
  return static_cast<T>(v);
}

inline double parse_real(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const std::exception&) {
    throw UsageError(str_cat("config ", key, ": expected a number, got '", value, "'"));
  }
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw UsageError(str_cat("config ", key, ": expected true or false, got '", value, "'"));
}

}  // namespace config_detail

inline void set_config_value(PipelineConfig& c, const std::string& key, const std::string& value) {
  using namespace config_detail;
  if (key == "dim") c.dim = parse_positive<std::size_t>(key, value);
  else if (key == "knn_k") c.knn_k = parse_positive<std::size_t>(key, value);
  else if (key == "cross_top_m") c.cross_top_m = parse_positive<std::size_t>(key, value);
  else if (key == "p") c.p = parse_positive<std::size_t>(key, value);
  else if (key == "k_topics") c.k_topics = parse_positive<int>(key, value);
  else if (key == "lda_iterations") c.lda_iterations = parse_positive<int>(key, value);
  else if (key == "cut_year") c.cut_year = parse_positive<int>(key, value);
  else if (key == "seed") {
    try {
      c.seed = parse_uint64(value);
    } catch (const std::invalid_argument&) {
      throw UsageError(str_cat("config seed: expected an unsigned integer, got '", value, "'"));
    }
    if (c.seed == 0) throw UsageError("config seed: must be positive");
  }
  else if (key == "threads") c.threads = parse_positive<unsigned>(key, value);
  else if (key == "deterministic") c.deterministic = parse_bool(key, value);
  else if (key == "phrase_max_n") {
    c.phrase_max_n = parse_positive<std::size_t>(key, value);
    if (c.phrase_max_n < 2) throw UsageError("config phrase_max_n: must be at least 2");
  } else if (key == "phrase_min_count") c.phrase_min_count = parse_positive<long long>(key, value);
  else if (key == "phrase_min_score") c.phrase_min_score = parse_real(key, value);
  else if (key == "window") c.window = parse_positive<int>(key, value);
  else if (key == "negatives") c.negatives = parse_positive<int>(key, value);
  else if (key == "epochs") c.epochs = parse_positive<int>(key, value);
  else if (key == "min_count") c.min_count = parse_positive<long long>(key, value);
  else if (key == "learning_rate") c.learning_rate = parse_real(key, value);
  else if (key == "approx_knn") c.approx_knn = parse_bool(key, value);
  else if (key == "approx_trees") c.approx_trees = parse_positive<int>(key, value);
  else if (key == "lda_alpha") c.lda_alpha = parse_real(key, value);
  else if (key == "lda_beta") c.lda_beta = parse_real(key, value);
  else if (key == "neighbors_n") c.neighbors_n = parse_positive<std::size_t>(key, value);
  else if (key == "aggregation") {
    if (value == "min") c.aggregation = TopicAggregation::min;
    else if (value == "mean") c.aggregation = TopicAggregation::mean;
    else throw UsageError("config aggregation: expected min or mean");
  } else if (key == "validation_size") c.validation_size = parse_positive<std::size_t>(key, value);
  else if (key == "poly_budget") c.poly_budget = parse_positive<long long>(key, value);
  else if (key == "network_format") {
    if (value == "text") c.network_format = NetworkFormat::text;
    else if (value == "binary") c.network_format = NetworkFormat::binary;
    else throw UsageError("config network_format: expected text or binary");
  } else {
    throw UsageError("unknown config key '" + key + "'");
  }
}

// Flat "key = value" lines; '#' starts a comment line.
inline void read_config(PipelineConfig& c, std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(str_cat("config line ", line_no, ": expected key = value"));
    set_config_value(c, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

inline void read_config_file(PipelineConfig& c, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  read_config(c, in);
}

// Defaults, then the config file (if any), then overrides in order: later
// settings win.
inline PipelineConfig resolve_config(const std::string& config_file,
                                     const std::vector<std::pair<std::string, std::string>>& overrides) {
  PipelineConfig cfg;
  if (!config_file.empty()) read_config_file(cfg, config_file);
  for (const auto& [k, v] : overrides) set_config_value(cfg, k, v);
  return cfg;
}

inline std::vector<std::pair<std::string, std::string>> config_entries(const PipelineConfig& c) {
  auto d = [](double v) { return format_double(v); };
  return {{"dim", std::to_string(c.dim)},
          {"knn_k", std::to_string(c.knn_k)},
          {"cross_top_m", std::to_string(c.cross_top_m)},
          {"p", std::to_string(c.p)},
          {"k_topics", std::to_string(c.k_topics)},
          {"lda_iterations", std::to_string(c.lda_iterations)},
          {"cut_year", std::to_string(c.cut_year)},
          {"seed", std::to_string(c.seed)},
          {"threads", std::to_string(c.threads)},
          {"deterministic", c.deterministic ? "true" : "false"},
          {"phrase_max_n", std::to_string(c.phrase_max_n)},
          {"phrase_min_count", std::to_string(c.phrase_min_count)},
          {"phrase_min_score", d(c.phrase_min_score)},
          {"window", std::to_string(c.window)},
          {"negatives", std::to_string(c.negatives)},
          {"epochs", std::to_string(c.epochs)},
          {"min_count", std::to_string(c.min_count)},
          {"learning_rate", d(c.learning_rate)},
          {"approx_knn", c.approx_knn ? "true" : "false"},
          {"approx_trees", std::to_string(c.approx_trees)},
          {"lda_alpha", d(c.lda_alpha)},
          {"lda_beta", d(c.lda_beta)},
          {"neighbors_n", std::to_string(c.neighbors_n)},
          {"aggregation", c.aggregation == TopicAggregation::min ? "min" : "mean"},
          {"validation_size", std::to_string(c.validation_size)},
          {"poly_budget", std::to_string(c.poly_budget)},
          {"network_format", c.network_format == NetworkFormat::text ? "text" : "binary"}};
}

inline void write_config(const PipelineConfig& c, std::ostream& out) {
  for (const auto& [k, v] : config_entries(c)) out << k << " = " << v << '\n';
}

struct StageRecord {
  std::string name;
  double seconds = 0.0;
  std::size_t peak_memory_bytes = 0;
};

// Wraps stage failures so the message names the stage.
class StageError : public Error {
 public:
  StageError(const std::string& stage, const std::string& what)
      : Error("stage '" + stage + "' failed: " + what), stage_(stage) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct BuildResult {
  HypothesisSystem system;
  std::vector<StageRecord> stages;
};

namespace pipeline_detail {

template <typename Fn>
auto run_stage(std::vector<StageRecord>& stages, const std::string& name, Fn&& fn) {
  Stopwatch sw;
  auto record = [&] { stages.push_back({name, sw.seconds(), peak_memory_bytes()}); };
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      record();
    } else {
      auto out = fn();
      record();
      return out;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

}  // namespace pipeline_detail

// Builds the network over the documents published up to the cut year.
inline BuildResult build_system(const Corpus& corpus, const OntologyBackbone* backbone, const PipelineConfig& cfg,
                                StopwordSet stopwords = default_stopwords()) {
  using pipeline_detail::run_stage;
  BuildResult out;
  auto& sys = out.system;
  sys.stopwords = std::move(stopwords);
  const unsigned threads = std::max(1u, cfg.threads);

  auto unigrams = run_stage(out.stages, "tokenize", [&] {
    auto visible = cut_year_filter(corpus, cfg.cut_year);
    if (visible.empty()) throw Error(str_cat("no documents published in or before ", cfg.cut_year));
    return tokenize_corpus(visible, sys.stopwords, threads);
  });
  run_stage(out.stages, "phrases", [&] {
    sys.phrases = mine_phrases(unigrams, cfg.phrase_max_n, cfg.phrase_min_count, cfg.phrase_min_score);
    sys.corpus = apply_phrases(unigrams, sys.phrases);
  });
  unigrams.clear();
  run_stage(out.stages, "embedding", [&] { sys.space = train_embeddings(sys.corpus, cfg.sgns()); });
  run_stage(out.stages, "network", [&] {
    auto tfidf = compute_tfidf(sys.corpus);
    std::vector<std::pair<std::string, std::vector<double>>> docs(sys.corpus.size());
    parallel_for(docs.size(), threads, [&](std::size_t i) {
      auto c = doc_centroid(sys.space, sys.corpus[i], tfidf);
      docs[i] = {std::move(c.id), std::move(c.vector)};
    });
    std::vector<std::pair<std::string, std::vector<double>>> phrases;
    phrases.reserve(sys.space.size());
    for (std::size_t i = 0; i < sys.space.size(); ++i) phrases.emplace_back(sys.space.tokens()[i], sys.space.row_as_double(i));

    auto knn = [&](const auto& vectors, Layer layer) {
      if (cfg.approx_knn) {
        return build_knn_layer_approx(vectors, cfg.knn_k, layer, ApproxKnnOptions{cfg.approx_trees, 32, 1, cfg.seed});
      }
      return build_knn_layer(vectors, cfg.knn_k, layer, threads);
    };
    // Every document and vocabulary token becomes a node, even if isolated.
    for (const auto& d : docs) sys.network.add_node(NodeId{Layer::document, d.first});
    for (const auto& p : phrases) sys.network.add_node(NodeId{Layer::phrase, p.first});
    for (const auto& e : knn(docs, Layer::document)) sys.network.add_edge(e);
    for (const auto& e : knn(phrases, Layer::phrase)) sys.network.add_edge(e);
    auto in_vocab = [&](const std::string& t) { return sys.space.contains(t); };
    for (const auto& e : build_cross_edges(tfidf, cfg.cross_top_m, in_vocab)) sys.network.add_edge(e);
    if (backbone) attach_backbone(sys.network, *backbone, sys.space, sys.stopwords);
    normalize_weights(sys.network);
  });
  sys.index();
  return out;
}

// Lowercase hex SHA-256 of a byte stream.
inline std::string sha256_hex(std::istream& in) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw Error("SHA-256 init failed");
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string s;
  for (unsigned i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return sha256_hex(in);
}

inline std::string sha256_string(const std::string& s) {
  std::istringstream in(s);
  return sha256_hex(in);
}

inline constexpr int kSystemFormatVersion = 1;

struct SystemFiles {
  static constexpr const char* config = "config.txt";
  static constexpr const char* tokens = "tokens.tsv";
  static constexpr const char* phrases = "phrases.tsv";
  static constexpr const char* stopwords = "stopwords.txt";
  static constexpr const char* embeddings = "embeddings.txt";
  static constexpr const char* network = "network.lbdn";
  static constexpr const char* manifest = "manifest.json";
};

struct InputDigest {
  std::string role;
  std::string path;
  std::string sha256;
};

// Writes every artifact, then manifest.json holding the config, input and
// artifact digests, and stage timings.
inline nlohmann::json save_system(const std::filesystem::path& dir, const BuildResult& build,
                                  const PipelineConfig& cfg, const std::vector<InputDigest>& inputs) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const auto& sys = build.system;
  auto open = [&](const char* name, std::ios::openmode mode = std::ios::out) {
    std::ofstream f(dir / name, mode);
    if (!f) throw IoError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open(SystemFiles::config);
    write_config(cfg, f);
  }
  {
    auto f = open(SystemFiles::tokens);
    write_tokenized(sys.corpus, f);
  }
  {
    auto f = open(SystemFiles::phrases);
    write_phrase_tsv(sys.phrases, f);
  }
  {
    std::vector<std::string> sw(sys.stopwords.begin(), sys.stopwords.end());
    std::sort(sw.begin(), sw.end());
    auto f = open(SystemFiles::stopwords);
    for (const auto& w : sw) f << w << '\n';
  }
  {
    auto f = open(SystemFiles::embeddings);
    save_embeddings(sys.space, f);
  }
  {
    auto f = open(SystemFiles::network, std::ios::out | std::ios::binary);
    save_network(sys.network, f, cfg.network_format);
  }

  nlohmann::json manifest;
  manifest["format_version"] = kSystemFormatVersion;
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [k, v] : config_entries(cfg)) config[k] = v;
  manifest["config"] = config;
  nlohmann::json in = nlohmann::json::array();
  for (const auto& d : inputs) in.push_back({{"role", d.role}, {"path", d.path}, {"sha256", d.sha256}});
  manifest["inputs"] = in;
  nlohmann::json artifacts = nlohmann::json::object();
  for (const char* name : {SystemFiles::config, SystemFiles::tokens, SystemFiles::phrases, SystemFiles::stopwords,
                           SystemFiles::embeddings, SystemFiles::network}) {
    artifacts[name] = sha256_file(dir / name);
  }
  manifest["artifacts"] = artifacts;
  manifest["counts"] = {{"documents", sys.corpus.size()},
                        {"vocabulary", sys.space.size()},
                        {"phrases", sys.phrases.entries().size()},
                        {"nodes", sys.network.node_count()},
                        {"edges", sys.network.edge_count()}};
  nlohmann::json stages = nlohmann::json::array();
  double total = 0.0;
  for (const auto& s : build.stages) {
    stages.push_back({{"name", s.name}, {"seconds", s.seconds}, {"peak_memory_bytes", s.peak_memory_bytes}});
    total += s.seconds;
  }
  manifest["stages"] = stages;
  manifest["total_seconds"] = total;
  manifest["peak_memory_bytes"] = peak_memory_bytes();
  {
    auto f = open(SystemFiles::manifest);
    f << manifest.dump(2) << '\n';
  }
  return manifest;
}

// Checks the manifest's required keys and types.
inline void validate_manifest(const nlohmann::json& m) {
  auto require = [&](bool ok, const std::string& what) {
    if (!ok) throw LoadError("manifest: " + what);
  };
  require(m.is_object(), "not an object");
  require(m.contains("format_version") && m["format_version"].is_number_integer(), "format_version");
  require(m["format_version"].get<int>() == kSystemFormatVersion, "unsupported format_version");
  require(m.contains("config") && m["config"].is_object(), "config");
  require(m.contains("inputs") && m["inputs"].is_array(), "inputs");
  for (const auto& i : m["inputs"]) {
    require(i.contains("role") && i.contains("path") && i.contains("sha256") && i["sha256"].is_string() &&
                i["sha256"].get<std::string>().size() == 64,
            "input entry");
  }
  require(m.contains("artifacts") && m["artifacts"].is_object(), "artifacts");
  for (const char* name : {SystemFiles::config, SystemFiles::tokens, SystemFiles::phrases, SystemFiles::stopwords,
                           SystemFiles::embeddings, SystemFiles::network}) {
    require(m["artifacts"].contains(name) && m["artifacts"][name].is_string(), std::string("artifact ") + name);
  }
  require(m.contains("stages") && m["stages"].is_array(), "stages");
  for (const auto& s : m["stages"]) {
    require(s.contains("name") && s.contains("seconds") && s["seconds"].is_number() && s.contains("peak_memory_bytes"),
            "stage entry");
  }
  require(m.contains("total_seconds") && m["total_seconds"].is_number(), "total_seconds");
  require(m.contains("peak_memory_bytes") && m["peak_memory_bytes"].is_number_integer(), "peak_memory_bytes");
}

inline nlohmann::json read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / SystemFiles::manifest);
  if (!in) throw IoError("no manifest in " + dir.string());
  try {
    auto m = nlohmann::json::parse(in);
    validate_manifest(m);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw LoadError(std::string("manifest: ") + e.what());
  }
}

struct LoadedSystem {
  HypothesisSystem system;
  PipelineConfig config;
  nlohmann::json manifest;
};

inline LoadedSystem load_system(const std::filesystem::path& dir) {
  LoadedSystem out;
  out.manifest = read_manifest(dir);
  auto open = [&](const char* name, std::ios::openmode mode = std::ios::in) {
    std::ifstream f(dir / name, mode);
    if (!f) throw IoError("cannot read " + (dir / name).string());
    return f;
  };
  {
    auto f = open(SystemFiles::config);
    read_config(out.config, f);
  }
  auto& sys = out.system;
  {
    auto f = open(SystemFiles::tokens);
    sys.corpus = read_tokenized(f);
  }
  {
    auto f = open(SystemFiles::phrases);
    sys.phrases = read_phrase_tsv(f);
  }
  sys.stopwords = load_stopwords((dir / SystemFiles::stopwords).string());
  {
    auto f = open(SystemFiles::embeddings);
    sys.space = load_embeddings(f);
  }
  {
    auto f = open(SystemFiles::network, std::ios::in | std::ios::binary);
    sys.network = load_network(f);
  }
  sys.index();
  return out;
}

// Every phrase-layer key and entity name, sorted: the candidate universe for
// noise pairs.
inline std::vector<std::string> system_terms(const HypothesisSystem& sys) {
  std::vector<std::string> out;
  for (const auto& n : sys.network.nodes()) {
    if (n.layer != Layer::document) out.push_back(n.key);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// A term is resolvable when it maps to a network node and has an embedding.
inline TermPredicate resolvable_in(const HypothesisSystem& sys) {
  return [&sys](const std::string& term) { return sys.resolve(term).has_value() && sys.embedding_key(term).has_value(); };
}

// One validation set shared by every system: positives and the noise
// universe are restricted to predicate terms that all systems can resolve
// and embed.
inline ValidationSet draw_validation_set(const std::vector<PredicateRecord>& records,
                                         const std::vector<const HypothesisSystem*>& systems,
                                         const PipelineConfig& cfg) {
  TermPredicate resolvable = [&](const std::string& t) {
    for (const auto* s : systems) {
      if (!resolvable_in(*s)(t)) return false;
    }
    return true;
  };
  std::vector<std::string> terms;
  for (const auto& r : records) {
    terms.push_back(r.subject);
    terms.push_back(r.object);
  }
  return make_validation_set(records, cfg.cut_year, terms, resolvable, cfg.validation_size, cfg.seed);
}

}  // namespace lbd
