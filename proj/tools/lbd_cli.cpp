// lbd: build hypothesis-generation systems, query them and validate them.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lbd/commands.hpp"

namespace {

struct Common {
  std::string config_file;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  bool deterministic = false;
  // Named overrides: key -> value, recorded only when the flag was given.
  std::map<std::string, std::string> named;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_file, "key = value configuration file");
  sub->add_option("--set", c.sets, "override a configuration key (key=value), repeatable");
  sub->add_option("--seed", c.seed, "random seed");
  sub->add_option("--threads", c.threads, "worker threads");
  sub->add_flag("--deterministic", c.deterministic, "pin reproducible single-writer modes");
}

void add_named(CLI::App* sub, Common& c, const std::string& key, const std::string& help) {
  std::string flag = "--" + key;
  for (auto& ch : flag) {
    if (ch == '_') ch = '-';
  }
  sub->add_option_function<std::string>(flag, [&c, key](const std::string& v) { c.named[key] = v; }, help);
}

// Precedence: flag > file > default.
lbd::PipelineConfig resolve(const Common& c, CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> overrides;
  for (const auto& s : c.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos) throw lbd::UsageError("--set expects key=value, got '" + s + "'");
    overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  for (const auto& kv : c.named) overrides.push_back(kv);
  if (sub->count("--seed")) overrides.emplace_back("seed", std::to_string(c.seed));
  if (sub->count("--threads")) overrides.emplace_back("threads", std::to_string(c.threads));
  if (c.deterministic) overrides.emplace_back("deterministic", "true");
  return lbd::resolve_config(c.config_file, overrides);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Literature-based hypothesis generation"};
  app.require_subcommand(1);
  Common common;

  lbd::cmd::BuildArgs build_args;
  auto* build = app.add_subcommand("build", "build a system directory from a JSONL corpus");
  build->add_option("--corpus", build_args.corpus, "corpus JSONL")->required();
  build->add_option("--backbone", build_args.backbone, "entity backbone TSV");
  build->add_option("--stopwords", build_args.stopwords, "stopword stems, one per line");
  build->add_option("--out", build_args.out, "output system directory")->required();
  for (const char* key : {"dim", "knn_k", "cross_top_m", "cut_year"}) add_named(build, common, key, "see config");
  add_common(build, common);

  std::vector<std::string> stats_corpora;
  auto* stats = app.add_subcommand("stats", "corpus statistics as TSV on standard output");
  stats->add_option("--corpus", stats_corpora, "corpus JSONL, repeatable")->required();
  add_common(stats, common);

  std::string sample_corpus, sample_out;
  int sample_levels = 1;
  auto* sample = app.add_subcommand("sample", "nested halving samples of a corpus");
  sample->add_option("--corpus", sample_corpus, "corpus JSONL")->required();
  sample->add_option("--levels", sample_levels, "number of halvings")->required();
  sample->add_option("--out", sample_out, "output directory")->required();
  add_common(sample, common);

  std::string q_system, q_a, q_c, q_out;
  bool q_metrics = false, q_entity = false;
  auto* query = app.add_subcommand("query", "shortest path, document cloud and topics for a term pair");
  query->add_option("--system", q_system, "system directory")->required();
  query->add_option("--a", q_a, "first term")->required();
  query->add_option("--c", q_c, "second term")->required();
  query->add_option("--out", q_out, "write JSON here instead of standard output");
  query->add_flag("--metrics", q_metrics, "also report the ranking metrics");
  query->add_flag("--prefer-entity", q_entity, "resolve terms against entities first");
  for (const char* key : {"p", "k_topics", "lda_iterations"}) add_named(query, common, key, "see config");
  add_common(query, common);

  lbd::cmd::ValidateArgs v_args;
  auto* validate = app.add_subcommand("validate", "score a validation set against a system");
  validate->add_option("--system", v_args.system, "system directory")->required();
  validate->add_option("--predicates", v_args.predicates, "predicate TSV (subject, object, first_year)");
  validate->add_option("--pairs", v_args.pairs, "reuse this validation set instead of drawing one");
  validate->add_option("--pairs-out", v_args.pairs_out, "save the validation set used");
  validate->add_option("--model", v_args.model, "PolyMulti model JSON to fill the poly_multi column");
  validate->add_option("--name", v_args.name, "system name recorded in the table");
  validate->add_option("--out", v_args.out, "score table TSV")->required();
  for (const char* key : {"p", "k_topics", "lda_iterations", "cut_year", "validation_size"}) {
    add_named(validate, common, key, "see config");
  }
  add_common(validate, common);

  std::string f_scores, f_model, f_scored;
  auto* fit = app.add_subcommand("fit-metric", "fit the PolyMulti combination on a score table");
  fit->add_option("--scores", f_scores, "score table TSV")->required();
  fit->add_option("--out", f_model, "model JSON")->required();
  fit->add_option("--scored-out", f_scored, "write the table with poly_multi filled in");
  add_named(fit, common, "poly_budget", "candidate exponent vectors to try");
  add_common(fit, common);

  lbd::cmd::CompareArgs c_args;
  bool c_no_fit = false;
  auto* compare = app.add_subcommand("compare", "AUC matrix, ROC plots and summary across systems");
  compare->add_option("--scores", c_args.scores, "score table TSV, repeatable");
  compare->add_option("--system", c_args.systems, "system directory, repeatable");
  compare->add_option("--predicates", c_args.predicates, "predicate TSV (with --system)");
  compare->add_flag("--no-fit", c_no_fit, "skip fitting PolyMulti per system (with --system)");
  compare->add_option("--out", c_args.out, "report directory")->required();
  for (const char* key : {"p", "k_topics", "lda_iterations", "cut_year", "validation_size", "poly_budget"}) {
    add_named(compare, common, key, "see config");
  }
  add_common(compare, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    auto* sub = app.get_subcommands().front();
    auto cfg = resolve(common, sub);
    if (sub == build) {
      lbd::cmd::build(build_args, cfg);
    } else if (sub == stats) {
      lbd::cmd::stats(stats_corpora, std::cout, cfg.threads);
    } else if (sub == sample) {
      for (const auto& f : lbd::cmd::sample(sample_corpus, sample_levels, sample_out, cfg.seed)) std::cout << f << '\n';
    } else if (sub == query) {
      auto j = lbd::cmd::query(q_system, q_a, q_c, cfg, q_metrics, q_entity);
      if (q_out.empty()) {
        std::cout << j.dump(2) << '\n';
      } else {
        std::ofstream f(q_out);
        if (!f) throw lbd::IoError("cannot write " + q_out);
        f << j.dump(2) << '\n';
      }
    } else if (sub == validate) {
      lbd::cmd::validate(v_args, cfg);
    } else if (sub == fit) {
      auto model = lbd::cmd::fit_metric(f_scores, f_model, f_scored, cfg);
      std::cerr << "training AUC " << model.training_auc << '\n';
    } else if (sub == compare) {
      c_args.fit_poly = !c_no_fit;
      lbd::cmd::compare(c_args, cfg);
    }
  } catch (const lbd::UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
