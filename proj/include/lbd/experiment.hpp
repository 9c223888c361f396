#pragma once

// Scoring a built system against a validation set: the batch run, an
// in-sample PolyMulti fit and the per-metric AUCs. Shared by the acceptance
// harness and the demos.

#include <map>
#include <string>
#include <vector>

#include "lbd/pipeline.hpp"
#include "lbd/ranking.hpp"
#include "lbd/validation.hpp"

namespace lbd {

struct SystemScore {
  ScoreTable table;
  PolyModel model;
  // Metric name -> AUC, including "poly_multi".
  std::map<std::string, double> auc;
  double mean_query_seconds = 0.0;
  std::size_t failed_pairs = 0;
};

// PolyMulti is fitted on the same table it is scored on.
inline SystemScore score_system(const HypothesisSystem& sys, const ValidationSet& vs, const PipelineConfig& cfg) {
  SystemScore out;
  std::vector<double> seconds;
  BatchOptions opt{cfg.query(), cfg.metrics(), 1};
  out.table = evaluate_batch(sys, vs, opt, &seconds);
  for (double s : seconds) out.mean_query_seconds += s / static_cast<double>(seconds.size());
  for (const auto& r : out.table.rows) out.failed_pairs += r.flag != kFlagOk && r.flag != "degenerate_correlation";
  out.model = fit_poly_multi(training_examples(out.table), cfg.poly_budget, cfg.seed,
                             cfg.deterministic ? 1u : std::max(1u, cfg.threads));
  apply_poly_model(out.table, out.model);
  for (const auto& m : table_metric_names(out.table)) out.auc[m] = metric_roc(out.table, m).auc;
  return out;
}

}  // namespace lbd
