#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"
#include "seedrel/evalharness.hpp"
#include "seedrel/snapshot.hpp"
#include "seedrel/textsim.hpp"

#ifndef SEEDREL_VERSION
#define SEEDREL_VERSION "0.0.0"
#endif

namespace seedrel {

namespace fs = std::filesystem;
using nlohmann::json;

inline constexpr std::string_view kSoftwareVersion = SEEDREL_VERSION;
inline constexpr int kManifestFormatVersion = 1;

// ---------------------------------------------------------------------------
// Corpus loading

struct CorpusSource {
  fs::path citations;
  CitationFormat citations_format = CitationFormat::occ_csv;
  fs::path metadata;  // optional
  MetadataFormat metadata_format = MetadataFormat::tsv;
  fs::path snapshot;  // optional graph cache
  double max_malformed_fraction = 0.01;
};

inline MetadataFormat metadata_format_for(const fs::path& p) {
  const auto ext = to_lower_ascii(p.extension().string());
  return (ext == ".jsonl" || ext == ".ndjson" || ext == ".json") ? MetadataFormat::jsonl : MetadataFormat::tsv;
}

/// Directory convention: citations.csv (OCC layout) or citations.tsv,
/// metadata.tsv or metadata.jsonl, and the cache graph.sdgr.
inline CorpusSource corpus_source_from_dir(const fs::path& dir) {
  CorpusSource s;
  if (fs::exists(dir / "citations.tsv") && !fs::exists(dir / "citations.csv")) {
    s.citations = dir / "citations.tsv";
    s.citations_format = CitationFormat::generic_tsv;
  } else {
    s.citations = dir / "citations.csv";
  }
  for (const char* name : {"metadata.tsv", "metadata.jsonl"}) {
    if (fs::exists(dir / name)) {
      s.metadata = dir / name;
      s.metadata_format = metadata_format_for(s.metadata);
      break;
    }
  }
  s.snapshot = dir / "graph.sdgr";
  return s;
}

struct Corpus {
  CorpusGraph graph;
  TermIndex index;
  BuildReport build;
  ParseReport citation_report;
  ParseReport metadata_report;
  bool from_snapshot = false;
  std::string snapshot_note;  // why a present snapshot was not used
};

inline BuiltGraph build_from_sources(const CorpusSource& src, ParseReport* citation_report = nullptr,
                                     ParseReport* metadata_report = nullptr) {
  ParseOptions opts{src.max_malformed_fraction};
  std::ifstream cin(src.citations);
  if (!cin) throw InputError("cannot read citations file " + src.citations.string());
  auto cites = parse_citations(cin, src.citations_format, opts);
  std::vector<PublicationRecord> records;
  if (!src.metadata.empty()) {
    std::ifstream min(src.metadata);
    if (!min) throw InputError("cannot read metadata file " + src.metadata.string());
    auto meta = parse_metadata(min, src.metadata_format, opts);
    records = std::move(meta.records);
    if (metadata_report) *metadata_report = meta.report;
  }
  if (citation_report) *citation_report = cites.report;
  return build_graph(cites.pairs, std::move(records));
}

/// Loads the graph from the snapshot when it is present and valid, otherwise
/// from the source files; the term index is always rebuilt from the records.
inline Corpus load_corpus(const CorpusSource& src, bool prefer_snapshot = true) {
  Corpus c;
  bool loaded = false;
  if (prefer_snapshot && !src.snapshot.empty() && fs::exists(src.snapshot)) {
    try {
      c.graph = load_snapshot(src.snapshot);
      c.from_snapshot = true;
      loaded = true;
    } catch (const SnapshotError& e) {
      c.snapshot_note = e.what();
    }
  }
  if (!loaded) {
    auto built = build_from_sources(src, &c.citation_report, &c.metadata_report);
    c.graph = std::move(built.graph);
    c.build = built.report;
  }
  c.index = build_index(c.graph.records());
  return c;
}

// ---------------------------------------------------------------------------
// Experiment manifest

struct ExperimentConfig {
  CorpusSource corpus;
  json corpus_echo = json::object();  // corpus block as written
  ReviewCriteria criteria;
  std::size_t seeds_per_review = 5;
  std::uint64_t master_seed = 0;
  EvalConfig eval;
  std::vector<std::size_t> k_grid;  // empty: 1..k_max
  std::size_t workers = 1;
  std::size_t audit_m = 3;
  fs::path output_dir = "out";

  std::vector<std::size_t> effective_k_grid() const {
    if (!k_grid.empty()) return k_grid;
    std::vector<std::size_t> g(eval.k_max);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = i + 1;
    return g;
  }
};

namespace detail {

template <typename T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = j[key].get<T>();
}

inline void reject_unknown(const json& j, std::initializer_list<std::string_view> known, std::string_view where) {
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw InputError("manifest: unknown key '" + k + "' in " + std::string(where));
}

inline CitationFormat parse_citation_format(const std::string& s) {
  if (s == "occ_csv") return CitationFormat::occ_csv;
  if (s == "generic_tsv") return CitationFormat::generic_tsv;
  throw InputError("manifest: unknown citations_format '" + s + "'");
}

inline std::string citation_format_name(CitationFormat f) {
  return f == CitationFormat::occ_csv ? "occ_csv" : "generic_tsv";
}

}  // namespace detail

/// Parses a manifest; relative corpus paths resolve against `base_dir`.
inline ExperimentConfig parse_manifest(const json& j, const fs::path& base_dir = {}) {
  using detail::read_opt;
  if (!j.is_object()) throw InputError("manifest must be a JSON object");
  detail::reject_unknown(j, {"format_version", "corpus", "criteria", "seeds_per_review", "master_seed", "approaches",
                             "citation", "fusion", "ra", "evaluation", "output_dir"},
                         "manifest");
  const int version = j.value("format_version", kManifestFormatVersion);
  if (version != kManifestFormatVersion)
    throw InputError("manifest format_version " + std::to_string(version) + " is not supported");

  ExperimentConfig c;
  auto resolve = [&](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base_dir / p; };

  if (!j.contains("corpus")) throw InputError("manifest: missing corpus block");
  const auto& cj = j["corpus"];
  detail::reject_unknown(cj, {"dir", "citations", "citations_format", "metadata", "snapshot", "max_malformed_fraction"},
                         "corpus");
  c.corpus_echo = cj;
  if (cj.contains("dir")) c.corpus = corpus_source_from_dir(resolve(cj["dir"].get<std::string>()));
  if (cj.contains("citations")) c.corpus.citations = resolve(cj["citations"].get<std::string>());
  if (cj.contains("citations_format"))
    c.corpus.citations_format = detail::parse_citation_format(cj["citations_format"].get<std::string>());
  if (cj.contains("metadata")) {
    c.corpus.metadata = resolve(cj["metadata"].get<std::string>());
    c.corpus.metadata_format = metadata_format_for(c.corpus.metadata);
  }
  if (cj.contains("snapshot")) c.corpus.snapshot = resolve(cj["snapshot"].get<std::string>());
  read_opt(cj, "max_malformed_fraction", c.corpus.max_malformed_fraction);
  if (c.corpus.citations.empty()) throw InputError("manifest: corpus needs 'dir' or 'citations'");

  if (j.contains("criteria")) {
    const auto& k = j["criteria"];
    detail::reject_unknown(k, {"review_year", "title_pattern", "ref_year_min", "ref_year_max", "min_refs",
                               "sample_size", "sample_before_filter"},
                           "criteria");
    read_opt(k, "review_year", c.criteria.review_year);
    read_opt(k, "title_pattern", c.criteria.title_pattern);
    read_opt(k, "ref_year_min", c.criteria.ref_year_min);
    read_opt(k, "ref_year_max", c.criteria.ref_year_max);
    read_opt(k, "min_refs", c.criteria.min_refs);
    read_opt(k, "sample_size", c.criteria.sample_size);
    read_opt(k, "sample_before_filter", c.criteria.sample_before_filter);
  }
  read_opt(j, "seeds_per_review", c.seeds_per_review);
  read_opt(j, "master_seed", c.master_seed);
  c.criteria.rng_seed = c.master_seed;

  if (j.contains("approaches")) {
    c.eval.approaches.clear();
    for (const auto& a : j["approaches"]) {
      auto parsed = parse_approach(a.get<std::string>());
      if (!parsed) throw InputError("manifest: unknown approach '" + a.get<std::string>() + "'");
      if (std::find(c.eval.approaches.begin(), c.eval.approaches.end(), *parsed) == c.eval.approaches.end())
        c.eval.approaches.push_back(*parsed);
    }
    std::sort(c.eval.approaches.begin(), c.eval.approaches.end());
  }
  if (j.contains("citation")) {
    const auto& k = j["citation"];
    detail::reject_unknown(k, {"bc_min_score", "cc_min_score"}, "citation");
    read_opt(k, "bc_min_score", c.eval.bc_min_score);
    read_opt(k, "cc_min_score", c.eval.cc_min_score);
  }
  if (j.contains("fusion")) {
    const auto& k = j["fusion"];
    detail::reject_unknown(k, {"dc_divisor", "bc_divisor", "cc_divisor", "candidate_set"}, "fusion");
    read_opt(k, "dc_divisor", c.eval.weights.dc_divisor);
    read_opt(k, "bc_divisor", c.eval.weights.bc_divisor);
    read_opt(k, "cc_divisor", c.eval.weights.cc_divisor);
    if (k.contains("candidate_set")) {
      const auto s = k["candidate_set"].get<std::string>();
      if (s == "union") c.eval.weights.candidates = CandidateSet::union_of_components;
      else if (s == "intersection") c.eval.weights.candidates = CandidateSet::intersection_of_components;
      else throw InputError("manifest: candidate_set must be union or intersection");
    }
  }
  if (j.contains("ra")) {
    const auto& k = j["ra"];
    detail::reject_unknown(k, {"title_weight", "k1", "b", "pool_per_seed"}, "ra");
    read_opt(k, "title_weight", c.eval.ra.title_weight);
    read_opt(k, "k1", c.eval.ra.k1);
    read_opt(k, "b", c.eval.ra.b);
    read_opt(k, "pool_per_seed", c.eval.pool_per_seed);
  }
  if (j.contains("evaluation")) {
    const auto& k = j["evaluation"];
    detail::reject_unknown(k, {"k_max", "k_grid", "workers", "audit_m"}, "evaluation");
    read_opt(k, "k_max", c.eval.k_max);
    read_opt(k, "k_grid", c.k_grid);
    read_opt(k, "workers", c.workers);
    read_opt(k, "audit_m", c.audit_m);
  }
  if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>());

  if (c.seeds_per_review < 1) throw InputError("manifest: seeds_per_review must be at least 1");
  if (c.eval.k_max < 1) throw InputError("manifest: k_max must be at least 1");
  for (auto k : c.k_grid)
    if (k < 1 || k > c.eval.k_max) throw InputError("manifest: k_grid values must lie in 1..k_max");
  c.eval.audit_retain = std::max(c.eval.audit_retain, c.audit_m);
  return c;
}

inline ExperimentConfig load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read manifest " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("manifest " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_manifest(j, path.parent_path());
}

/// The effective configuration, as recorded in the run manifest.
inline json config_to_json(const ExperimentConfig& c) {
  json approaches = json::array();
  for (auto a : c.eval.approaches) approaches.push_back(std::string(approach_name(a)));
  return {
      {"format_version", kManifestFormatVersion},
      {"corpus", c.corpus_echo},
      {"criteria",
       {{"review_year", c.criteria.review_year},
        {"title_pattern", c.criteria.title_pattern},
        {"ref_year_min", c.criteria.ref_year_min},
        {"ref_year_max", c.criteria.ref_year_max},
        {"min_refs", c.criteria.min_refs},
        {"sample_size", c.criteria.sample_size},
        {"sample_before_filter", c.criteria.sample_before_filter}}},
      {"seeds_per_review", c.seeds_per_review},
      {"master_seed", c.master_seed},
      {"approaches", approaches},
      {"citation", {{"bc_min_score", c.eval.bc_min_score}, {"cc_min_score", c.eval.cc_min_score}}},
      {"fusion",
       {{"dc_divisor", c.eval.weights.dc_divisor},
        {"bc_divisor", c.eval.weights.bc_divisor},
        {"cc_divisor", c.eval.weights.cc_divisor},
        {"candidate_set",
         c.eval.weights.candidates == CandidateSet::union_of_components ? "union" : "intersection"}}},
      {"ra",
       {{"title_weight", c.eval.ra.title_weight},
        {"k1", c.eval.ra.k1},
        {"b", c.eval.ra.b},
        {"pool_per_seed", c.eval.pool_per_seed}}},
      {"evaluation", {{"k_max", c.eval.k_max}, {"k_grid", c.k_grid}, {"audit_m", c.audit_m}}},
  };
}

// ---------------------------------------------------------------------------
// Running

struct ExperimentRun {
  std::vector<CaseEvaluation> cases;  // ascending review pub_id
  std::optional<Aggregation> aggregation;
  std::optional<ScoreScaleDiagnostic> score_scale;
  std::string aggregation_error;
  std::string score_scale_error;
  std::size_t skipped_cases = 0;
  std::size_t failed_results = 0;

  std::vector<EvalResult> all_results() const {
    std::vector<EvalResult> out;
    for (const auto& c : cases)
      for (const auto& r : c.results) out.push_back(r);
    return out;
  }
};

inline std::uint64_t case_seed_for(std::uint64_t master_seed, PubId review) {
  return stable_hash(master_seed, static_cast<std::uint64_t>(review));
}

/// Selects reviews, samples seeds per review from its own derived RNG and
/// evaluates cases on `workers` threads. Output order and content do not
/// depend on the worker count.
inline ExperimentRun run_experiment(const Corpus& corpus, const ExperimentConfig& cfg) {
  const auto& g = corpus.graph;
  const auto skeletons = select_reviews(g, cfg.criteria);

  ExperimentRun run;
  run.cases.resize(skeletons.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    ScatterCounter scratch(g.node_count());
    for (;;) {
      const auto i = next.fetch_add(1);
      if (i >= skeletons.size()) return;
      const PubId pid = g.pub_id(skeletons[i].review);
      const auto seed = case_seed_for(cfg.master_seed, pid);
      try {
        Rng rng(seed);
        const auto rc = sample_seeds(skeletons[i], cfg.seeds_per_review, rng);
        run.cases[i] = evaluate_case(g, corpus.index, rc, cfg.eval, seed, scratch);
      } catch (const std::exception& e) {
        CaseEvaluation ev;
        ev.review = skeletons[i].review;
        ev.review_pub_id = pid;
        ev.case_seed = seed;
        ev.eligible_count = skeletons[i].eligible_refs.size();
        ev.skipped = true;
        ev.skip_reason = e.what();
        for (Approach a : cfg.eval.approaches) {
          EvalResult r;
          r.review = ev.review;
          r.review_pub_id = pid;
          r.approach = a;
          r.status = EvalStatus::skipped;
          r.message = ev.skip_reason;
          ev.results.push_back(std::move(r));
        }
        run.cases[i] = std::move(ev);
      }
    }
  };
  const auto n_workers = std::max<std::size_t>(1, std::min(cfg.workers, std::max<std::size_t>(1, skeletons.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  std::sort(run.cases.begin(), run.cases.end(),
            [](const CaseEvaluation& a, const CaseEvaluation& b) { return a.review_pub_id < b.review_pub_id; });
  for (const auto& c : run.cases) {
    if (c.skipped) ++run.skipped_cases;
    for (const auto& r : c.results)
      if (r.status == EvalStatus::failed) ++run.failed_results;
  }

  const auto results = run.all_results();
  const auto grid = cfg.effective_k_grid();
  try {
    run.aggregation = aggregate(results, grid);
  } catch (const InputError& e) {
    run.aggregation_error = e.what();
  }
  try {
    run.score_scale = score_scale_diagnostic(results);
  } catch (const InputError& e) {
    run.score_scale_error = e.what();
  }
  return run;
}

// ---------------------------------------------------------------------------
// Exports

/// Shortest round-trip representation.
inline std::string format_number(double x) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, p);
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

namespace detail {

inline std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + p.string());
  return out;
}

inline std::string clean_field(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return out;
}

}  // namespace detail

struct ExportPaths {
  fs::path per_review, curves, distributions, score_scale, cases, manifest;

  static ExportPaths in(const fs::path& dir) {
    return {dir / "per_review.csv", dir / "curves.csv",  dir / "distributions.csv",
            dir / "score_scale.csv", dir / "cases.csv", dir / "run_manifest.json"};
  }
};

inline void write_curves_csv(const Aggregation& agg, std::ostream& out) {
  out << "approach,k,mean_recall,ci_half,mean_precision,ci_half\n";
  for (const auto& c : agg.curves)
    for (std::size_t i = 0; i < c.ks.size(); ++i)
      out << approach_name(c.approach) << ',' << c.ks[i] << ',' << format_number(c.mean_recall[i]) << ','
          << format_number(c.ci_recall[i]) << ',' << format_number(c.mean_precision[i]) << ','
          << format_number(c.ci_precision[i]) << '\n';
}

/// Writes per-review, curve, distribution, score-scale and case CSVs plus the
/// run manifest.
inline ExportPaths export_outputs(const ExperimentRun& run, const Corpus& corpus, const ExperimentConfig& cfg,
                                  const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const auto paths = ExportPaths::in(dir);
  const auto& g = corpus.graph;

  {
    auto out = detail::open_out(paths.per_review);
    out << "review_pub_id,approach,status,retrieved_count,hits_total,not_seeds,total_recall,total_precision,"
           "zero_retrieval,max_score\n";
    for (const auto& c : run.cases)
      for (const auto& r : c.results)
        out << r.review_pub_id << ',' << approach_name(r.approach) << ',' << status_name(r.status) << ','
            << r.retrieved_count << ',' << r.hits_total << ',' << r.not_seeds_count << ','
            << format_number(r.total_recall) << ',' << format_number(r.total_precision) << ','
            << (r.zero_retrieval ? 1 : 0) << ',' << format_number(r.max_score) << '\n';
  }
  {
    auto out = detail::open_out(paths.curves);
    if (run.aggregation) write_curves_csv(*run.aggregation, out);
    else out << "approach,k,mean_recall,ci_half,mean_precision,ci_half\n";
  }
  {
    auto out = detail::open_out(paths.distributions);
    out << "approach,metric,n,min,q1,median,q3,max\n";
    if (run.aggregation)
      for (const auto& d : run.aggregation->distributions)
        out << approach_name(d.approach) << ',' << d.metric << ',' << d.n << ',' << format_number(d.summary.min)
            << ',' << format_number(d.summary.q1) << ',' << format_number(d.summary.median) << ','
            << format_number(d.summary.q3) << ',' << format_number(d.summary.max) << '\n';
  }
  {
    auto out = detail::open_out(paths.score_scale);
    out << "reviews,max_dc,max_bc,max_cc,bc_over_dc,cc_over_dc\n";
    if (run.score_scale) {
      const auto& s = *run.score_scale;
      out << s.reviews << ',' << format_number(s.max_dc) << ',' << format_number(s.max_bc) << ','
          << format_number(s.max_cc) << ',' << (s.bc_over_dc ? format_number(*s.bc_over_dc) : "") << ','
          << (s.cc_over_dc ? format_number(*s.cc_over_dc) : "") << '\n';
    }
  }
  {
    auto out = detail::open_out(paths.cases);
    out << "review_pub_id,case_seed,eligible_refs,not_seeds,status,seed_pub_ids\n";
    for (const auto& c : run.cases) {
      out << c.review_pub_id << ',' << hex64(c.case_seed) << ',' << c.eligible_count << ',' << c.not_seeds_count
          << ',' << (c.skipped ? "skipped" : "ok") << ',';
      for (std::size_t i = 0; i < c.seeds.size(); ++i) out << (i ? "|" : "") << g.pub_id(c.seeds[i]);
      out << '\n';
    }
  }
  {
    json m;
    m["software"] = {{"name", "seedrel"}, {"version", std::string(kSoftwareVersion)}};
    m["config"] = config_to_json(cfg);
    m["text"] = {{"stemmer", std::string(PorterStemmer::kName)},
                 {"stopwords", std::string(kStopwordListName)},
                 {"weighting", std::string(SaturatingTfIdf::kName)}};
    m["corpus"] = {{"fingerprint", hex64(fingerprint(g))},
                   {"nodes", g.node_count()},
                   {"edges", g.edge_count()},
                   {"terms", corpus.index.term_count()}};
    m["counts"] = {{"reviews_selected", run.cases.size()},
                   {"cases_skipped", run.skipped_cases},
                   {"results_failed", run.failed_results}};
    if (run.score_scale) {
      const auto& s = *run.score_scale;
      m["score_scale"] = {{"reviews", s.reviews}, {"max_dc", s.max_dc}, {"max_bc", s.max_bc},
                          {"max_cc", s.max_cc}};
      m["score_scale"]["bc_over_dc"] = s.bc_over_dc ? json(*s.bc_over_dc) : json(nullptr);
      m["score_scale"]["cc_over_dc"] = s.cc_over_dc ? json(*s.cc_over_dc) : json(nullptr);
    } else {
      m["score_scale"] = {{"error", run.score_scale_error}};
    }
    if (!run.aggregation) m["aggregation_error"] = run.aggregation_error;
    auto out = detail::open_out(paths.manifest);
    out << m.dump(2) << '\n';
  }
  return paths;
}

/// Manual-assessment sheet: per review its seed titles and its top-m ranked
/// DC_BC_CC publications that are not hits. Returns the number of data rows.
inline std::size_t export_audit(const ExperimentRun& run, const CorpusGraph& g, std::size_t m, std::ostream& out) {
  out << "review_pub_id\tkind\trank\tpub_id\tscore\tyear\ttitle\n";
  if (m == 0) return 0;
  std::size_t rows = 0;
  auto year = [](const PublicationRecord& r) { return r.year ? std::to_string(*r.year) : std::string(); };
  for (const auto& c : run.cases) {
    if (c.skipped) continue;
    const auto has_citation = std::any_of(c.results.begin(), c.results.end(), [](const EvalResult& r) {
      return r.approach == Approach::DC_BC_CC && r.status == EvalStatus::ok;
    });
    if (!has_citation) continue;
    for (NodeIndex s : c.seeds) {
      const auto& r = g.record(s);
      out << c.review_pub_id << "\tseed\t\t" << r.pub_id << "\t\t" << year(r) << '\t' << detail::clean_field(r.title)
          << '\n';
      ++rows;
    }
    for (std::size_t i = 0; i < std::min(m, c.audit_non_hits.size()); ++i) {
      const auto& a = c.audit_non_hits[i];
      const auto& r = g.record(a.node);
      out << c.review_pub_id << "\tnon_hit\t" << a.rank << '\t' << r.pub_id << '\t' << format_number(a.score) << '\t'
          << year(r) << '\t' << detail::clean_field(r.title) << '\n';
      ++rows;
    }
  }
  return rows;
}

inline std::size_t export_audit(const ExperimentRun& run, const CorpusGraph& g, const ExperimentConfig& cfg,
                                std::size_t m, const fs::path& path) {
  if (std::find(cfg.eval.approaches.begin(), cfg.eval.approaches.end(), Approach::DC_BC_CC) ==
      cfg.eval.approaches.end())
    throw InputError("audit export needs DC_BC_CC among the evaluated approaches");
  if (m > cfg.eval.audit_retain)
    throw InputError("audit depth " + std::to_string(m) + " exceeds retained " + std::to_string(cfg.eval.audit_retain));
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  auto out = detail::open_out(path);
  return export_audit(run, g, m, out);
}

}  // namespace seedrel
