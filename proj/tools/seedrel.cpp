#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "seedrel/seedrel.hpp"
#include "seedrel/service.hpp"
#include "seedrel/synthetic.hpp"

namespace {

using namespace seedrel;

std::vector<PubId> parse_seed_list(const std::string& text) {
  std::vector<PubId> out;
  for (auto part : detail::split(text, ',')) {
    const auto tok = detail::trim(part);
    if (tok.empty()) continue;
    auto v = detail::parse_int<PubId>(tok);
    if (!v) throw InputError("seed '" + std::string(tok) + "' is not an integer id");
    out.push_back(*v);
  }
  if (out.empty()) throw InputError("--seeds needs at least one id");
  return out;
}

CorpusSource source_for(const std::string& corpus, const std::string& manifest) {
  if (!manifest.empty()) return load_manifest(manifest).corpus;
  if (corpus.empty()) throw InputError("one of --corpus or --manifest is required");
  const fs::path p(corpus);
  if (!fs::is_directory(p)) throw InputError("corpus directory " + corpus + " does not exist");
  return corpus_source_from_dir(p);
}

void print_reports(const Corpus& c) {
  const auto& g = c.graph;
  std::cerr << "graph: " << g.node_count() << " nodes, " << g.edge_count() << " edges";
  if (c.from_snapshot) std::cerr << " (snapshot)";
  std::cerr << '\n';
  if (!c.snapshot_note.empty()) std::cerr << "snapshot ignored: " << c.snapshot_note << '\n';
  if (!c.from_snapshot) {
    std::cerr << "citations: " << c.citation_report.data_rows << " rows, " << c.citation_report.malformed
              << " malformed; duplicates " << c.build.duplicates_dropped << ", self-citations " << c.build.self_loops_dropped
              << '\n';
    if (c.metadata_report.data_rows)
      std::cerr << "metadata: " << c.metadata_report.data_rows << " rows, " << c.metadata_report.malformed
                << " malformed\n";
  }
}

int cmd_ingest(const std::string& corpus, const std::string& manifest, const std::string& out) {
  auto src = source_for(corpus, manifest);
  if (!out.empty()) src.snapshot = out;
  if (src.snapshot.empty()) throw InputError("no snapshot path; pass --out");
  const auto c = load_corpus(src, false);
  print_reports(c);
  save_snapshot(c.graph, src.snapshot);
  const auto reloaded = load_snapshot(src.snapshot);
  if (!(reloaded == c.graph)) throw Error("snapshot reload differs from the fresh build");
  std::cout << "wrote " << src.snapshot.string() << " (fingerprint " << hex64(fingerprint(c.graph)) << ")\n";
  return 0;
}

int cmd_evaluate(const std::string& manifest, const std::string& out, std::size_t workers, bool quiet) {
  if (manifest.empty()) throw InputError("evaluate needs --manifest");
  auto cfg = load_manifest(manifest);
  if (!out.empty()) cfg.output_dir = out;
  if (workers) cfg.workers = workers;
  const auto corpus = load_corpus(cfg.corpus);
  if (!quiet) print_reports(corpus);
  const auto run = run_experiment(corpus, cfg);
  const auto paths = export_outputs(run, corpus, cfg, cfg.output_dir);
  if (!cfg.eval.approaches.empty() &&
      std::find(cfg.eval.approaches.begin(), cfg.eval.approaches.end(), Approach::DC_BC_CC) !=
          cfg.eval.approaches.end())
    export_audit(run, corpus.graph, cfg, cfg.audit_m, cfg.output_dir / "audit.tsv");
  if (!quiet) {
    std::cerr << "reviews: " << run.cases.size() << " (" << run.skipped_cases << " skipped)\n";
    if (!run.aggregation_error.empty()) std::cerr << "aggregation: " << run.aggregation_error << '\n';
    if (!run.score_scale_error.empty()) std::cerr << "score scale: " << run.score_scale_error << '\n';
  }
  std::cout << "wrote " << cfg.output_dir.string() << '\n';
  return 0;
}

int cmd_audit(const std::string& manifest, const std::string& out, std::size_t m, std::size_t workers) {
  if (manifest.empty()) throw InputError("audit needs --manifest");
  auto cfg = load_manifest(manifest);
  if (workers) cfg.workers = workers;
  if (m) cfg.audit_m = m;
  cfg.eval.audit_retain = std::max(cfg.eval.audit_retain, cfg.audit_m);
  const fs::path path = out.empty() ? cfg.output_dir / "audit.tsv" : fs::path(out);
  const auto corpus = load_corpus(cfg.corpus);
  const auto run = run_experiment(corpus, cfg);
  const auto rows = export_audit(run, corpus.graph, cfg, cfg.audit_m, path);
  std::cout << "wrote " << rows << " rows to " << path.string() << '\n';
  return 0;
}

int cmd_retrieve(const std::string& corpus, const std::string& manifest, const std::string& seeds,
                 const std::string& approach, std::size_t k, std::uint64_t tie_seed, const std::string& format) {
  RetrievalRequest req;
  req.seeds = parse_seed_list(seeds);
  auto a = parse_approach(approach);
  if (!a) throw InputError("unknown approach '" + approach + "'");
  req.approach = *a;
  req.k = k;
  req.tie_seed = tie_seed;
  EvalConfig defaults;
  if (!manifest.empty()) defaults = load_manifest(manifest).eval;
  const auto c = load_corpus(source_for(corpus, manifest));
  RetrievalResponse resp;
  try {
    resp = retrieve(c, req, defaults);
  } catch (const RequestError& e) {
    throw InputError(e.what());
  }
  if (format == "json") {
    std::cout << to_json(resp).dump(2) << '\n';
    return 0;
  }
  std::cout << "rank\tpub_id\tscore\tDC\tBC\tCC\tRA\tyear\ttitle\n";
  for (std::size_t i = 0; i < resp.items.size(); ++i) {
    const auto& it = resp.items[i];
    std::cout << i + 1 << '\t' << it.pub_id << '\t' << format_number(it.score) << '\t' << format_number(it.dc) << '\t'
              << format_number(it.bc) << '\t' << format_number(it.cc) << '\t' << format_number(it.ra) << '\t'
              << (it.year ? std::to_string(*it.year) : "") << '\t' << detail::clean_field(it.title) << '\n';
  }
  return 0;
}

int cmd_serve(const std::string& corpus, const std::string& manifest, const std::string& host, int port,
              std::size_t max_seeds) {
  EvalConfig defaults;
  if (!manifest.empty()) defaults = load_manifest(manifest).eval;
  RetrievalService svc(defaults, max_seeds);
  const int bound = svc.bind(host, port);
  if (bound < 0) throw Error("cannot bind " + host + ":" + std::to_string(port));
  std::cout << "listening on http://" << host << ':' << bound << "/v1" << std::endl;
  std::thread loader([&] {
    try {
      svc.load(source_for(corpus, manifest));
      std::cerr << "corpus loaded" << std::endl;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << std::endl;
      svc.stop();
    }
  });
  svc.listen_after_bind();
  loader.join();
  return svc.corpus() ? 0 : 1;
}

int cmd_synth(const std::string& out, std::size_t pubs, std::uint64_t seed) {
  if (out.empty()) throw InputError("synth needs --out");
  synthetic::CorpusSpec spec;
  spec.publications = pubs;
  spec.seed = seed;
  const auto c = synthetic::generate_corpus(spec);
  synthetic::write_corpus(c, out);
  std::cout << "wrote " << c.records.size() << " publications, " << c.pairs.size() << " citation rows to " << out
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Seed-based literature retrieval over citation graphs"};
  app.set_version_flag("--version", std::string(seedrel::kSoftwareVersion));
  app.require_subcommand(1);

  std::string corpus, manifest, out, seeds, approach = "DC_BC_CC_RA", format = "table", host = "127.0.0.1";
  std::size_t k = 50, workers = 0, m = 0, max_seeds = seedrel::kDefaultMaxSeeds, pubs = 5000;
  std::uint64_t tie_seed = 0, synth_seed = 1;
  int port = 8080;
  bool quiet = false;

  auto* ingest = app.add_subcommand("ingest", "Parse a corpus and cache its graph snapshot");
  ingest->add_option("--corpus", corpus, "Corpus directory");
  ingest->add_option("--manifest", manifest, "Experiment manifest (JSON)");
  ingest->add_option("--out", out, "Snapshot path (default <corpus>/graph.sdgr)");

  auto* evaluate = app.add_subcommand("evaluate", "Run the evaluation harness and export CSVs");
  evaluate->add_option("--manifest", manifest, "Experiment manifest (JSON)")->required();
  evaluate->add_option("--out", out, "Output directory (overrides the manifest)");
  evaluate->add_option("--workers", workers, "Worker threads (overrides the manifest)");
  evaluate->add_flag("--quiet", quiet, "Suppress progress on standard error");

  auto* retrieve = app.add_subcommand("retrieve", "Rank publications for a set of seeds");
  retrieve->add_option("--corpus", corpus, "Corpus directory");
  retrieve->add_option("--manifest", manifest, "Manifest supplying the corpus and defaults");
  retrieve->add_option("--seeds", seeds, "Comma-separated seed pub_ids")->required();
  retrieve->add_option("--approach", approach, "DC, BC, CC, RA, DC_BC_CC or DC_BC_CC_RA");
  retrieve->add_option("--k", k, "Number of results")->check(CLI::PositiveNumber);
  retrieve->add_option("--tie-seed", tie_seed, "Tie-break seed");
  retrieve->add_option("--format", format, "table or json")->check(CLI::IsMember({"table", "json"}));

  auto* audit = app.add_subcommand("audit", "Export the manual-assessment sheet");
  audit->add_option("--manifest", manifest, "Experiment manifest (JSON)")->required();
  audit->add_option("--out", out, "Audit TSV path");
  audit->add_option("--m", m, "Non-hits per review");
  audit->add_option("--workers", workers, "Worker threads");

  auto* serve = app.add_subcommand("serve", "Serve the /v1 HTTP API");
  serve->add_option("--corpus", corpus, "Corpus directory");
  serve->add_option("--manifest", manifest, "Manifest supplying the corpus and defaults");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--port", port, "Port (0 picks a free one)");
  serve->add_option("--max-seeds", max_seeds, "Largest accepted seed list");

  auto* synth = app.add_subcommand("synth", "Write a synthetic corpus with planted reviews");
  synth->add_option("--out", out, "Output directory")->required();
  synth->add_option("--publications", pubs, "Number of publications");
  synth->add_option("--seed", synth_seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(corpus, manifest, out);
    if (*evaluate) return cmd_evaluate(manifest, out, workers, quiet);
    if (*retrieve) return cmd_retrieve(corpus, manifest, seeds, approach, k, tie_seed, format);
    if (*audit) return cmd_audit(manifest, out, m, workers);
    if (*serve) return cmd_serve(corpus, manifest, host, port, max_seeds);
    if (*synth) return cmd_synth(out, pubs, synth_seed);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
