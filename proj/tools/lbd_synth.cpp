// lbd_synth: write a planted-bridge synthetic world (corpus JSONL, predicate
// TSV and an entity backbone TSV) for trying the pipeline end to end.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "lbd/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Planted-bridge synthetic corpus generator"};
  lbd::synth::BridgeOptions opt;
  std::string out_dir;
  app.add_option("--out", out_dir, "output directory")->required();
  app.add_option("--documents", opt.documents, "number of documents");
  app.add_option("--triples", opt.triples, "planted A-B-C triples");
  app.add_option("--distractors", opt.distractors, "distractor terms");
  app.add_option("--median-length", opt.median_length, "median tokens per document");
  app.add_option("--cut-year", opt.cut_year, "last year visible to a system");
  app.add_option("--seed", opt.seed, "random seed");
  CLI11_PARSE(app, argc, argv);

  try {
    auto world = lbd::synth::bridge_world(opt);
    std::filesystem::create_directories(out_dir);
    std::ofstream corpus(std::filesystem::path(out_dir) / "corpus.jsonl");
    lbd::write_jsonl(world.corpus, corpus);
    std::ofstream preds(std::filesystem::path(out_dir) / "predicates.tsv");
    for (const auto& r : world.predicates) preds << r.subject << '\t' << r.object << '\t' << r.first_year << '\n';
    // Each B term becomes an entity aliased to itself; consecutive B
    // entities are linked.
    std::ofstream bb(std::filesystem::path(out_dir) / "backbone.tsv");
    for (const auto& b : world.b_terms) bb << "entity\tE_" << b << "\nalias\tE_" << b << '\t' << b << '\n';
    for (std::size_t i = 0; i + 1 < world.b_terms.size(); i += 2) {
      bb << "link\tE_" << world.b_terms[i] << "\tE_" << world.b_terms[i + 1] << '\n';
    }
    if (!corpus || !preds || !bb) throw lbd::IoError("cannot write output files");
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
