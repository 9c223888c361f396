#pragma once

// Validation pairs from a predicate table, batch scoring of a system, ROC
// analysis and multi-system comparison reports.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lbd/common.hpp"
#include "lbd/query.hpp"
#include "lbd/ranking.hpp"
#include "lbd/roc.hpp"

namespace lbd {

struct PredicateRecord {
  std::string subject;
  std::string object;
  int first_year = 0;

  bool operator==(const PredicateRecord&) const = default;
};

struct PredicateLoad {
  std::vector<PredicateRecord> records;
  std::size_t malformed = 0;
};

// TSV "subject \t object \t first_year". Malformed lines are skipped with a
// warning; blank lines and '#' comments are ignored.
inline PredicateLoad load_predicates(std::istream& in) {
  PredicateLoad out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    auto f = split(line, '\t');
    std::string problem;
    PredicateRecord r;
    if (f.size() != 3) {
      problem = "expected 3 fields";
    } else if (f[0].empty() || f[1].empty()) {
      problem = "empty term";
    } else if (f[0] == f[1]) {
      problem = "subject equals object";
    } else {
      try {
        auto year = parse_int(f[2]);
        if (year <= 0 || year > std::numeric_limits<int>::max()) {
          problem = "year must be positive";
        } else {
          r = {f[0], f[1], static_cast<int>(year)};
        }
      } catch (const std::invalid_argument&) {
        problem = "non-integer year";
      }
    }
    if (problem.empty()) {
      out.records.push_back(std::move(r));
    } else {
      ++out.malformed;
      warn(str_cat("predicate line ", line_no, ": ", problem, "; skipped"));
    }
  }
  if (in.bad()) throw IoError("error while reading predicates");
  return out;
}

inline PredicateLoad load_predicates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open predicate file " + path);
  return load_predicates(in);
}

// Unordered term pair stored with a <= b.
struct TermPair {
  std::string a;
  std::string b;

  TermPair() = default;
  TermPair(std::string x, std::string y) {
    if (y < x) std::swap(x, y);
    a = std::move(x);
    b = std::move(y);
  }
  auto operator<=>(const TermPair&) const = default;
};

using TermPredicate = std::function<bool(const std::string&)>;

// Pairs whose earliest record is after cut_year and whose terms both pass
// `resolvable`; sorted and unique.
inline std::vector<TermPair> build_positive_set(const std::vector<PredicateRecord>& records, int cut_year,
                                                const TermPredicate& resolvable = nullptr) {
  std::map<TermPair, int> first;
  for (const auto& r : records) {
    TermPair p(r.subject, r.object);
    auto [it, inserted] = first.emplace(p, r.first_year);
    if (!inserted) it->second = std::min(it->second, r.first_year);
  }
  std::vector<TermPair> out;
  for (const auto& [p, year] : first) {
    if (year <= cut_year) continue;
    if (resolvable && (!resolvable(p.a) || !resolvable(p.b))) continue;
    out.push_back(p);
  }
  return out;
}

// n distinct pairs over `terms` that occur in no record, drawn uniformly by
// rejection with at most 1000 * n attempts. Returned in draw order.
inline std::vector<TermPair> sample_noise_set(const std::vector<PredicateRecord>& records,
                                              std::vector<std::string> terms, std::size_t n, std::uint64_t seed) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::set<TermPair> published;
  for (const auto& r : records) published.emplace(r.subject, r.object);
  std::vector<TermPair> out;
  if (n == 0) return out;
  if (terms.size() < 2) throw Error("noise sampling needs at least two resolvable terms");
  std::set<TermPair> drawn;
  Rng rng(seed);
  const std::size_t budget = 1000 * n;
  for (std::size_t attempt = 0; attempt < budget && out.size() < n; ++attempt) {
    auto i = rng.uniform_index(terms.size());
    auto j = rng.uniform_index(terms.size());
    if (i == j) continue;
    TermPair p(terms[i], terms[j]);
    if (published.count(p) || drawn.count(p)) continue;
    drawn.insert(p);
    out.push_back(std::move(p));
  }
  if (out.size() < n) {
    throw Error(str_cat("could not sample ", n, " noise pairs within ", budget, " attempts (found ", out.size(), ")"));
  }
  return out;
}

struct ValidationSet {
  std::vector<TermPair> positives;
  std::vector<TermPair> negatives;
  int cut_year = 0;
  std::uint64_t seed = 0;

  bool operator==(const ValidationSet&) const = default;
};

// Up to target_size / 2 positives (a seeded uniform subset when more exist)
// and as many noise pairs over the resolvable terms.
inline ValidationSet make_validation_set(const std::vector<PredicateRecord>& records, int cut_year,
                                         const std::vector<std::string>& terms, const TermPredicate& resolvable,
                                         std::size_t target_size, std::uint64_t seed) {
  ValidationSet vs;
  vs.cut_year = cut_year;
  vs.seed = seed;
  vs.positives = build_positive_set(records, cut_year, resolvable);
  const std::size_t half = target_size / 2;
  Rng rng(seed);
  if (vs.positives.size() > half) {
    rng.shuffle(vs.positives);
    vs.positives.resize(half);
    std::sort(vs.positives.begin(), vs.positives.end());
  } else if (vs.positives.size() < half) {
    warn(str_cat("only ", vs.positives.size(), " positive pairs available; validation set scaled down"));
  }
  if (vs.positives.empty()) throw Error("no positive validation pairs after the cut year");
  std::vector<std::string> universe;
  for (const auto& t : terms) {
    if (!resolvable || resolvable(t)) universe.push_back(t);
  }
  vs.negatives = sample_noise_set(records, universe, vs.positives.size(), rng.next());
  return vs;
}

inline void write_validation_set(const ValidationSet& vs, std::ostream& out) {
  out << "# cut_year=" << vs.cut_year << "\n# seed=" << vs.seed << "\nterm_a\tterm_b\tlabel\n";
  for (const auto& p : vs.positives) out << p.a << '\t' << p.b << "\tpositive\n";
  for (const auto& p : vs.negatives) out << p.a << '\t' << p.b << "\tnoise\n";
}

namespace validation_detail {

inline void read_metadata_line(const std::string& line, std::map<std::string, std::string>& meta) {
  auto body = line.substr(1);
  while (!body.empty() && body.front() == ' ') body.erase(body.begin());
  auto eq = body.find('=');
  if (eq != std::string::npos) meta[body.substr(0, eq)] = body.substr(eq + 1);
}

}  // namespace validation_detail

inline ValidationSet read_validation_set(std::istream& in) {
  ValidationSet vs;
  std::map<std::string, std::string> meta;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      validation_detail::read_metadata_line(line, meta);
      continue;
    }
    if (!header) {
      if (line != "term_a\tterm_b\tlabel") throw LoadError("validation set: missing header");
      header = true;
      continue;
    }
    auto f = split(line, '\t');
    if (f.size() != 3) throw LoadError(str_cat("validation set line ", line_no, ": expected 3 fields"));
    if (f[2] == "positive") {
      vs.positives.emplace_back(f[0], f[1]);
    } else if (f[2] == "noise") {
      vs.negatives.emplace_back(f[0], f[1]);
    } else {
      throw LoadError(str_cat("validation set line ", line_no, ": unknown label '", f[2], "'"));
    }
  }
  try {
    if (meta.count("cut_year")) vs.cut_year = static_cast<int>(parse_int(meta["cut_year"]));
    if (meta.count("seed")) vs.seed = parse_uint64(meta["seed"]);
  } catch (const std::invalid_argument&) {
    throw LoadError("validation set: bad metadata");
  }
  return vs;
}

// Row flags: "ok", or the reason the query failed.
inline constexpr std::string_view kFlagOk = "ok";

struct ScoreRow {
  TermPair pair;
  bool positive = false;
  MetricVector metrics;
  std::string flag = std::string(kFlagOk);

  bool operator==(const ScoreRow&) const = default;
};

struct ScoreTable {
  // Ordered key=value pairs; "system" names the system.
  std::map<std::string, std::string> metadata;
  std::vector<ScoreRow> rows;

  std::string system() const {
    auto it = metadata.find("system");
    return it == metadata.end() ? std::string("system") : it->second;
  }
  bool has_poly_multi() const {
    return !rows.empty() && std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.metrics.poly_multi.has_value(); });
  }
  bool operator==(const ScoreTable&) const = default;
};

inline constexpr std::string_view kScoreHeader =
    "term_a\tterm_b\tlabel\tl2\tcentr_l2\ttopic_per_word\ttopic_corr\ttopic_walk_btwn\tpoly_multi\tflag";

inline void write_score_table(const ScoreTable& t, std::ostream& out) {
  for (const auto& [k, v] : t.metadata) out << "# " << k << '=' << v << '\n';
  out << kScoreHeader << '\n';
  for (const auto& r : t.rows) {
    out << r.pair.a << '\t' << r.pair.b << '\t' << (r.positive ? "positive" : "noise");
    for (double v : r.metrics.base()) out << '\t' << format_double(v);
    out << '\t' << (r.metrics.poly_multi ? format_double(*r.metrics.poly_multi) : std::string("NA"));
    out << '\t' << r.flag << '\n';
  }
}

inline ScoreTable read_score_table(std::istream& in) {
  ScoreTable t;
  std::string line;
  bool header = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      validation_detail::read_metadata_line(line, t.metadata);
      continue;
    }
    if (!header) {
      if (line != kScoreHeader) throw LoadError("score table: missing or unexpected header");
      header = true;
      continue;
    }
    auto f = split(line, '\t');
    if (f.size() != 10) throw LoadError(str_cat("score table line ", line_no, ": expected 10 fields"));
    ScoreRow r;
    r.pair = TermPair(f[0], f[1]);
    if (f[2] != "positive" && f[2] != "noise") throw LoadError(str_cat("score table line ", line_no, ": bad label"));
    r.positive = f[2] == "positive";
    try {
      std::array<double, kBaseMetricCount> v{};
      for (std::size_t i = 0; i < kBaseMetricCount; ++i) v[i] = parse_double(f[3 + i]);
      r.metrics = MetricVector::from_base(v);
      if (f[8] != "NA") r.metrics.poly_multi = parse_double(f[8]);
    } catch (const std::invalid_argument&) {
      throw LoadError(str_cat("score table line ", line_no, ": bad number"));
    }
    r.flag = f[9];
    t.rows.push_back(std::move(r));
  }
  if (!header) throw LoadError("score table: empty file");
  return t;
}

inline ScoreTable read_score_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open score table " + path);
  return read_score_table(in);
}

inline void write_score_table_file(const ScoreTable& t, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write score table " + path);
  write_score_table(t, out);
  if (!out) throw IoError("error writing score table " + path);
}

inline std::vector<LabeledMetrics> training_examples(const ScoreTable& t) {
  std::vector<LabeledMetrics> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) out.push_back({r.metrics, r.positive});
  return out;
}

inline void apply_poly_model(ScoreTable& t, const PolyModel& model) {
  for (auto& r : t.rows) r.metrics.poly_multi = score(model, r.metrics);
}

struct BatchOptions {
  QueryConfig query;
  MetricOptions metrics;
  // Pairs scored concurrently; each query then runs single-threaded.
  unsigned workers = 1;
};

// Scores one pair; failures yield the worst metric values and a flag naming
// the failure.
inline ScoreRow score_pair(const HypothesisSystem& sys, const TermPair& pair, bool positive,
                           const BatchOptions& opt) {
  ScoreRow row;
  row.pair = pair;
  row.positive = positive;
  auto fail = [&](std::string flag) {
    row.metrics = MetricVector::from_base(kWorstMetricValues);
    row.flag = std::move(flag);
  };
  try {
    auto ka = sys.embedding_key(pair.a);
    if (!ka) throw OovError(pair.a);
    auto kc = sys.embedding_key(pair.b);
    if (!kc) throw OovError(pair.b);
    auto result = run_query(sys, pair.a, pair.b, opt.query);
    auto eval = evaluate_metrics(sys.space, *ka, *kc, result.topics, opt.metrics);
    row.metrics = eval.metrics;
    if (eval.degenerate_correlation) row.flag = "degenerate_correlation";
  } catch (const DisconnectedError&) {
    fail("disconnected");
  } catch (const UnknownTermError&) {
    fail("unknown_term");
  } catch (const OovError&) {
    fail("oov");
  } catch (const DegeneratePairError&) {
    fail("degenerate_pair");
  }
  return row;
}

// Positives first, then negatives, each in set order. Per-query seconds are
// reported through `query_seconds` when given.
inline ScoreTable evaluate_batch(const HypothesisSystem& sys, const ValidationSet& vs, const BatchOptions& opt,
                                 std::vector<double>* query_seconds = nullptr) {
  if (!sys.adjacency) throw Error("system is not indexed");
  if (sys.network.node_count() == 0) throw Error("system has an empty network");
  std::vector<std::pair<const TermPair*, bool>> work;
  for (const auto& p : vs.positives) work.emplace_back(&p, true);
  for (const auto& p : vs.negatives) work.emplace_back(&p, false);
  ScoreTable table;
  table.rows.resize(work.size());
  std::vector<double> seconds(work.size());
  BatchOptions inner = opt;
  if (opt.workers > 1) inner.query.threads = 1;
  parallel_for(work.size(), std::max(1u, opt.workers), [&](std::size_t i) {
    Stopwatch sw;
    table.rows[i] = score_pair(sys, *work[i].first, work[i].second, inner);
    seconds[i] = sw.seconds();
  });
  table.metadata["cut_year"] = std::to_string(vs.cut_year);
  table.metadata["validation_seed"] = std::to_string(vs.seed);
  table.metadata["p"] = std::to_string(opt.query.p);
  table.metadata["k"] = std::to_string(opt.query.k);
  table.metadata["lda_iterations"] = std::to_string(opt.query.lda_iterations);
  table.metadata["seed"] = std::to_string(opt.query.seed);
  table.metadata["neighbors_n"] = std::to_string(opt.metrics.neighbors_n);
  table.metadata["aggregation"] = opt.metrics.aggregation == TopicAggregation::min ? "min" : "mean";
  if (query_seconds) *query_seconds = std::move(seconds);
  return table;
}

inline std::vector<std::string> table_metric_names(const ScoreTable& t) {
  std::vector<std::string> names(kBaseMetricNames.begin(), kBaseMetricNames.end());
  if (t.has_poly_multi()) names.emplace_back("poly_multi");
  return names;
}

// Oriented so that higher always means more plausible.
inline std::vector<double> oriented_scores(const ScoreTable& t, std::string_view metric) {
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& r : t.rows) {
    if (metric == "poly_multi") {
      if (!r.metrics.poly_multi) throw Error("score table has no poly_multi column");
      out.push_back(*r.metrics.poly_multi);
      continue;
    }
    auto it = std::find(kBaseMetricNames.begin(), kBaseMetricNames.end(), metric);
    if (it == kBaseMetricNames.end()) throw std::invalid_argument("unknown metric " + std::string(metric));
    auto i = static_cast<std::size_t>(it - kBaseMetricNames.begin());
    out.push_back(kMetricOrientation[i] * r.metrics.base()[i]);
  }
  return out;
}

inline RocCurve metric_roc(const ScoreTable& t, std::string_view metric) {
  auto s = oriented_scores(t, metric);
  std::unique_ptr<bool[]> labels(new bool[t.rows.size()]);
  for (std::size_t i = 0; i < t.rows.size(); ++i) labels[i] = t.rows[i].positive;
  return roc(s, std::span<const bool>(labels.get(), t.rows.size()), std::string(metric));
}

struct SystemRun {
  std::string system;
  double runtime_seconds = 0.0;
  std::size_t peak_memory_bytes = 0;
};

struct Comparison {
  std::vector<std::string> systems;
  std::vector<std::string> metrics;
  // auc[s][m]
  std::vector<std::vector<double>> auc;
  // Index of the best system per metric (first on ties).
  std::vector<std::size_t> best;
};

inline Comparison compare_aucs(const std::vector<ScoreTable>& tables, std::vector<std::string> metrics = {}) {
  if (tables.empty()) throw std::invalid_argument("compare needs at least one score table");
  if (metrics.empty()) {
    metrics = table_metric_names(tables.front());
    for (const auto& t : tables) {
      if (!t.has_poly_multi()) metrics.erase(std::remove(metrics.begin(), metrics.end(), "poly_multi"), metrics.end());
    }
  }
  Comparison c;
  c.metrics = metrics;
  for (const auto& t : tables) {
    c.systems.push_back(t.system());
    std::vector<double> row;
    for (const auto& m : metrics) row.push_back(metric_roc(t, m).auc);
    c.auc.push_back(std::move(row));
  }
  for (std::size_t m = 0; m < metrics.size(); ++m) {
    std::size_t b = 0;
    for (std::size_t s = 1; s < tables.size(); ++s) {
      if (c.auc[s][m] > c.auc[b][m]) b = s;
    }
    c.best.push_back(b);
  }
  return c;
}

// One row per system in input order, then a "best" row naming the winning
// system per metric.
inline void write_auc_matrix(const Comparison& c, std::ostream& out) {
  out << "system";
  for (const auto& m : c.metrics) out << '\t' << m;
  out << '\n';
  for (std::size_t s = 0; s < c.systems.size(); ++s) {
    out << c.systems[s];
    for (double a : c.auc[s]) out << '\t' << format_double(a);
    out << '\n';
  }
  out << "best";
  for (auto b : c.best) out << '\t' << c.systems[b];
  out << '\n';
}

inline std::string roc_svg(const std::string& title, const std::vector<RocCurve>& curves) {
  static constexpr std::array<const char*, 8> kColours = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                                          "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  constexpr double size = 400.0, margin = 50.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size + 2 * margin + 160 << "\" height=\""
      << size + 2 * margin << "\">\n";
  svg << "<text x=\"" << margin << "\" y=\"30\" font-family=\"sans-serif\" font-size=\"16\">" << title
      << "</text>\n";
  svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size << "\" height=\"" << size
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << margin << "\" y1=\"" << margin + size << "\" x2=\"" << margin + size << "\" y2=\""
      << margin << "\" stroke=\"#cccccc\" stroke-dasharray=\"4\"/>\n";
  svg << "<text x=\"" << margin + size / 2 - 60 << "\" y=\"" << margin + size + 35
      << "\" font-family=\"sans-serif\" font-size=\"12\">false positive rate</text>\n";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto* colour = kColours[i % kColours.size()];
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    for (const auto& p : curves[i].points) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", margin + p.fpr * size, margin + (1.0 - p.tpr) * size);
      svg << buf;
    }
    svg << "\"/>\n";
    char label[128];
    std::snprintf(label, sizeof label, "%s (AUC %.3f)", curves[i].metric.c_str(), curves[i].auc);
    svg << "<text x=\"" << margin + size + 10 << "\" y=\"" << margin + 15 + 18 * static_cast<double>(i)
        << "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << colour << "\">" << label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

// Writes auc_matrix.tsv, roc_<i>_<system>.svg per system and summary.json.
// `runs` may be empty or hold one entry per table.
inline Comparison compare_systems(const std::vector<ScoreTable>& tables, const std::vector<SystemRun>& runs,
                                  const std::filesystem::path& out_dir, std::vector<std::string> metrics = {}) {
  if (!runs.empty() && runs.size() != tables.size()) throw std::invalid_argument("one run record per table");
  auto c = compare_aucs(tables, std::move(metrics));
  std::filesystem::create_directories(out_dir);
  {
    std::ofstream out(out_dir / "auc_matrix.tsv");
    if (!out) throw IoError("cannot write " + (out_dir / "auc_matrix.tsv").string());
    write_auc_matrix(c, out);
  }
  nlohmann::json summary = nlohmann::json::array();
  for (std::size_t s = 0; s < tables.size(); ++s) {
    std::vector<RocCurve> curves;
    nlohmann::json aucs = nlohmann::json::object();
    for (std::size_t m = 0; m < c.metrics.size(); ++m) {
      curves.push_back(metric_roc(tables[s], c.metrics[m]));
      aucs[c.metrics[m]] = c.auc[s][m];
    }
    std::string safe = c.systems[s];
    for (auto& ch : safe) {
      if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
    }
    auto svg_path = out_dir / str_cat("roc_", s, "_", safe, ".svg");
    std::ofstream svg(svg_path);
    if (!svg) throw IoError("cannot write " + svg_path.string());
    svg << roc_svg(c.systems[s], curves);
    nlohmann::json entry = {{"system", c.systems[s]}, {"auc", aucs}, {"rows", tables[s].rows.size()}};
    if (!runs.empty()) {
      entry["runtime_seconds"] = runs[s].runtime_seconds;
      entry["peak_memory_bytes"] = runs[s].peak_memory_bytes;
    }
    summary.push_back(entry);
  }
  std::ofstream js(out_dir / "summary.json");
  if (!js) throw IoError("cannot write summary.json");
  js << nlohmann::json{{"systems", summary}}.dump(2) << '\n';
  return c;
}

}  // namespace lbd
