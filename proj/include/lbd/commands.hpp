#pragma once

// The command implementations behind the `lbd` tool. Each takes explicit
// paths and a resolved PipelineConfig; argument parsing lives in the tool.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbd/common.hpp"
#include "lbd/corpus.hpp"
#include "lbd/pipeline.hpp"
#include "lbd/query.hpp"
#include "lbd/ranking.hpp"
#include "lbd/validation.hpp"

namespace lbd::cmd {

namespace fs = std::filesystem;

inline void require_file(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError(what + " path is required");
  if (!fs::is_regular_file(path)) throw UsageError(what + " not found: " + path);
}

inline void require_dir(const std::string& path, const std::string& what) {
  if (path.empty()) throw UsageError(what + " path is required");
  if (!fs::is_directory(path)) throw UsageError(what + " not found: " + path);
}

inline void log(const std::string& message) { std::cerr << message << '\n'; }

inline Corpus read_corpus(const std::string& path) {
  auto ingest = ingest_jsonl_file(path);
  if (ingest.rejected) log(str_cat(path, ": ", ingest.rejected, " record(s) rejected"));
  return ingest.corpus;
}

struct BuildArgs {
  std::string corpus;
  std::string backbone;
  std::string stopwords;
  std::string out;
};

inline nlohmann::json build(const BuildArgs& args, const PipelineConfig& cfg) {
  require_file(args.corpus, "corpus");
  if (!args.backbone.empty()) require_file(args.backbone, "backbone");
  if (!args.stopwords.empty()) require_file(args.stopwords, "stopword list");
  if (args.out.empty()) throw UsageError("output directory is required");

  std::vector<InputDigest> inputs{{"corpus", args.corpus, sha256_file(args.corpus)}};
  auto corpus = read_corpus(args.corpus);
  std::optional<OntologyBackbone> backbone;
  if (!args.backbone.empty()) {
    backbone = load_backbone_file(args.backbone);
    inputs.push_back({"backbone", args.backbone, sha256_file(args.backbone)});
  }
  StopwordSet stopwords = default_stopwords();
  if (!args.stopwords.empty()) {
    stopwords = load_stopwords(args.stopwords);
    inputs.push_back({"stopwords", args.stopwords, sha256_file(args.stopwords)});
  }
  auto result = build_system(corpus, backbone ? &*backbone : nullptr, cfg, std::move(stopwords));
  for (const auto& s : result.stages) log(str_cat("stage ", s.name, ": ", s.seconds, " s"));
  return save_system(args.out, result, cfg, inputs);
}

// One stats row per corpus, cleaned the way a build would clean it (no
// phrase merging, no cut-year filter).
inline void stats(const std::vector<std::string>& corpora, std::ostream& out, unsigned threads) {
  if (corpora.empty()) throw UsageError("at least one corpus is required");
  for (const auto& c : corpora) require_file(c, "corpus");
  write_stats_header(out);
  auto sw = default_stopwords();
  for (const auto& path : corpora) {
    auto tokens = tokenize_corpus(read_corpus(path), sw, threads);
    write_stats_row(out, fs::path(path).stem().string(), corpus_stats(tokens));
  }
}

// Writes level_0.jsonl (the input) through level_<levels>.jsonl.
inline std::vector<std::string> sample(const std::string& corpus_path, int levels, const std::string& out_dir,
                                       std::uint64_t seed) {
  require_file(corpus_path, "corpus");
  if (levels < 1) throw UsageError("levels must be at least 1");
  if (out_dir.empty()) throw UsageError("output directory is required");
  auto nested = halve_sample(read_corpus(corpus_path), levels, seed);
  fs::create_directories(out_dir);
  std::vector<std::string> files;
  for (std::size_t i = 0; i < nested.size(); ++i) {
    auto path = (fs::path(out_dir) / str_cat("level_", i, ".jsonl")).string();
    std::ofstream f(path);
    if (!f) throw IoError("cannot write " + path);
    write_jsonl(nested[i], f);
    files.push_back(path);
  }
  return files;
}

inline nlohmann::json query(const std::string& system_dir, const std::string& a, const std::string& c,
                            const PipelineConfig& cfg, bool with_metrics, bool prefer_entity) {
  require_dir(system_dir, "system directory");
  auto loaded = load_system(system_dir);
  auto q = cfg.query();
  q.prefer_entity = prefer_entity;
  auto result = run_query(loaded.system, a, c, q);
  auto j = to_json(loaded.system, result);
  if (with_metrics) {
    auto ka = loaded.system.embedding_key(a);
    auto kc = loaded.system.embedding_key(c);
    if (!ka) throw OovError(a);
    if (!kc) throw OovError(c);
    auto eval = evaluate_metrics(loaded.system.space, *ka, *kc, result.topics, cfg.metrics());
    j["metrics"] = {{"l2", eval.metrics.l2},
                    {"centr_l2", eval.metrics.centr_l2},
                    {"topic_per_word", eval.metrics.topic_per_word},
                    {"topic_corr", eval.metrics.topic_corr},
                    {"topic_walk_btwn", eval.metrics.topic_walk_btwn},
                    {"degenerate_correlation", eval.degenerate_correlation}};
  }
  return j;
}

struct ValidateArgs {
  std::string system;
  std::string predicates;
  // Existing validation set to reuse; drawn from the predicates otherwise.
  std::string pairs;
  std::string pairs_out;
  std::string model;
  std::string out;
  std::string name;
};

struct ValidateOutcome {
  ScoreTable table;
  SystemRun run;
};

inline std::string run_sidecar_path(const std::string& table_path) { return table_path + ".run.json"; }

inline void write_run_sidecar(const std::string& table_path, const SystemRun& run) {
  std::ofstream f(run_sidecar_path(table_path));
  if (!f) throw IoError("cannot write " + run_sidecar_path(table_path));
  f << nlohmann::json{{"system", run.system},
                      {"runtime_seconds", run.runtime_seconds},
                      {"peak_memory_bytes", run.peak_memory_bytes}}
           .dump(2)
    << '\n';
}

inline std::optional<SystemRun> read_run_sidecar(const std::string& table_path) {
  std::ifstream f(run_sidecar_path(table_path));
  if (!f) return std::nullopt;
  try {
    auto j = nlohmann::json::parse(f);
    return SystemRun{j.at("system").get<std::string>(), j.at("runtime_seconds").get<double>(),
                     j.at("peak_memory_bytes").get<std::size_t>()};
  } catch (const nlohmann::json::exception& e) {
    throw LoadError("run record " + run_sidecar_path(table_path) + ": " + e.what());
  }
}

inline std::string system_name(const std::string& dir, const std::string& name) {
  if (!name.empty()) return name;
  auto p = fs::path(dir);
  if (p.filename().empty()) p = p.parent_path();
  return p.filename().string();
}

inline ValidateOutcome validate_loaded(const HypothesisSystem& sys, const ValidationSet& vs, const PipelineConfig& cfg,
                                       const std::string& name, const std::optional<PolyModel>& model) {
  BatchOptions opt{cfg.query(), cfg.metrics(), std::max(1u, cfg.threads)};
  std::vector<double> seconds;
  Stopwatch sw;
  ValidateOutcome out;
  out.table = evaluate_batch(sys, vs, opt, &seconds);
  out.table.metadata["system"] = name;
  if (model) apply_poly_model(out.table, *model);
  std::size_t failed = 0;
  for (const auto& r : out.table.rows) failed += r.flag != kFlagOk && r.flag != "degenerate_correlation";
  if (failed) log(str_cat(name, ": ", failed, " pair(s) failed and were scored worst-case"));
  out.run = {name, sw.seconds(), peak_memory_bytes()};
  return out;
}

inline ValidateOutcome validate(const ValidateArgs& args, const PipelineConfig& cfg) {
  require_dir(args.system, "system directory");
  if (args.pairs.empty()) require_file(args.predicates, "predicate file");
  else require_file(args.pairs, "validation set");
  if (!args.model.empty()) require_file(args.model, "PolyMulti model");
  if (args.out.empty()) throw UsageError("output score table path is required");

  auto loaded = load_system(args.system);
  ValidationSet vs;
  if (!args.pairs.empty()) {
    std::ifstream f(args.pairs);
    vs = read_validation_set(f);
  } else {
    auto preds = load_predicates_file(args.predicates);
    if (preds.malformed) log(str_cat(args.predicates, ": ", preds.malformed, " malformed line(s) skipped"));
    vs = draw_validation_set(preds.records, {&loaded.system}, cfg);
  }
  if (!args.pairs_out.empty()) {
    std::ofstream f(args.pairs_out);
    if (!f) throw IoError("cannot write " + args.pairs_out);
    write_validation_set(vs, f);
  }
  std::optional<PolyModel> model;
  if (!args.model.empty()) {
    std::ifstream f(args.model);
    try {
      model = poly_model_from_json(nlohmann::json::parse(f));
    } catch (const nlohmann::json::exception& e) {
      throw LoadError(std::string("PolyMulti model: ") + e.what());
    }
  }
  auto outcome = validate_loaded(loaded.system, vs, cfg, system_name(args.system, args.name), model);
  write_score_table_file(outcome.table, args.out);
  write_run_sidecar(args.out, outcome.run);
  return outcome;
}

// Fits PolyMulti on one score table; optionally writes the table with the
// poly_multi column filled in.
inline PolyModel fit_metric(const std::string& scores, const std::string& model_out, const std::string& scored_out,
                            const PipelineConfig& cfg) {
  require_file(scores, "score table");
  if (model_out.empty()) throw UsageError("model output path is required");
  auto table = read_score_table_file(scores);
  auto model = fit_poly_multi(training_examples(table), cfg.poly_budget, cfg.seed,
                              cfg.deterministic ? 1u : std::max(1u, cfg.threads));
  std::ofstream f(model_out);
  if (!f) throw IoError("cannot write " + model_out);
  f << to_json(model).dump(2) << '\n';
  if (!scored_out.empty()) {
    apply_poly_model(table, model);
    write_score_table_file(table, scored_out);
  }
  return model;
}

struct CompareArgs {
  // Either existing score tables...
  std::vector<std::string> scores;
  // ...or built systems validated here against one shared validation set.
  std::vector<std::string> systems;
  std::string predicates;
  bool fit_poly = true;
  std::string out;
};

inline Comparison compare(const CompareArgs& args, const PipelineConfig& cfg) {
  if (args.out.empty()) throw UsageError("output directory is required");
  if (args.scores.empty() == args.systems.empty()) throw UsageError("give either score tables or system directories");
  std::vector<ScoreTable> tables;
  std::vector<SystemRun> runs;
  if (!args.scores.empty()) {
    bool all_runs = true;
    for (const auto& s : args.scores) {
      require_file(s, "score table");
      tables.push_back(read_score_table_file(s));
      auto run = read_run_sidecar(s);
      all_runs = all_runs && run.has_value();
      runs.push_back(run.value_or(SystemRun{tables.back().system(), 0.0, 0}));
    }
    if (!all_runs) runs.clear();
  } else {
    require_file(args.predicates, "predicate file");
    for (const auto& s : args.systems) require_dir(s, "system directory");
    std::vector<LoadedSystem> loaded;
    for (const auto& s : args.systems) loaded.push_back(load_system(s));
    std::vector<const HypothesisSystem*> ptrs;
    for (const auto& l : loaded) ptrs.push_back(&l.system);
    auto preds = load_predicates_file(args.predicates);
    auto vs = draw_validation_set(preds.records, ptrs, cfg);
    fs::create_directories(args.out);
    {
      std::ofstream f(fs::path(args.out) / "validation_set.tsv");
      write_validation_set(vs, f);
    }
    for (std::size_t i = 0; i < loaded.size(); ++i) {
      auto name = system_name(args.systems[i], "");
      auto outcome = validate_loaded(loaded[i].system, vs, cfg, name, std::nullopt);
      if (args.fit_poly) {
        auto model = fit_poly_multi(training_examples(outcome.table), cfg.poly_budget, cfg.seed,
                                    cfg.deterministic ? 1u : std::max(1u, cfg.threads));
        apply_poly_model(outcome.table, model);
      }
      auto path = (fs::path(args.out) / str_cat("scores_", i, ".tsv")).string();
      write_score_table_file(outcome.table, path);
      tables.push_back(std::move(outcome.table));
      runs.push_back(outcome.run);
    }
  }
  return compare_systems(tables, runs, args.out);
}

}  // namespace lbd::cmd
