#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "seedrel/common.hpp"

namespace seedrel {

inline constexpr int kMinYear = 1800;
inline constexpr int kMaxYear = 2100;

struct PublicationRecord {
  PubId pub_id = 0;
  std::optional<int> year;  // unknown for ids that only appear as cited
  std::string title;
  std::optional<std::string> abstract;
  std::vector<std::string> headings;

  bool operator==(const PublicationRecord&) const = default;
};

struct CitationPair {
  PubId citing = 0;
  PubId cited = 0;
  bool operator==(const CitationPair&) const = default;
};

enum class CitationFormat { occ_csv, generic_tsv };
enum class MetadataFormat { tsv, jsonl };

struct ParseOptions {
  /// Fraction of malformed data rows tolerated before the parse fails.
  double max_malformed_fraction = 0.01;
};

struct ParseReport {
  std::size_t data_rows = 0;
  std::size_t malformed = 0;
  /// First few offending lines, "line N: reason".
  std::vector<std::string> samples;

  void note_malformed(std::size_t line_no, std::string_view why) {
    ++malformed;
    if (samples.size() < 8)
      samples.push_back("line " + std::to_string(line_no) + ": " + std::string(why));
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline void check_malformed(const ParseReport& report, const ParseOptions& opts, std::string_view what) {
  if (report.data_rows == 0) return;
  const double frac = static_cast<double>(report.malformed) / static_cast<double>(report.data_rows);
  if (frac > opts.max_malformed_fraction) {
    std::string msg = std::string(what) + ": " + std::to_string(report.malformed) + " of " +
                      std::to_string(report.data_rows) + " rows malformed";
    if (!report.samples.empty()) msg += " (" + report.samples.front() + ")";
    throw ParseError(msg);
  }
}

}  // namespace detail

struct CitationParseResult {
  std::vector<CitationPair> pairs;
  ParseReport report;
};

/// Reads `citing,referenced` rows. occ_csv skips its header row (if present);
/// generic_tsv is tab separated and headerless. Blank and '#' lines are ignored.
inline CitationParseResult parse_citations(std::istream& in, CitationFormat format,
                                           const ParseOptions& opts = {}) {
  if (!in) throw ParseError("citation stream is not readable");
  CitationParseResult result;
  const char sep = format == CitationFormat::occ_csv ? ',' : '\t';
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = detail::trim(line);
    if (row.empty() || row.front() == '#') continue;
    if (format == CitationFormat::occ_csv && !header_seen) {
      header_seen = true;
      if (to_lower_ascii(row) == "citing,referenced") continue;
    }
    ++result.report.data_rows;
    const auto fields = detail::split(row, sep);
    if (fields.size() != 2) {
      result.report.note_malformed(line_no, "expected 2 fields");
      continue;
    }
    const auto citing = detail::parse_int<PubId>(fields[0]);
    const auto cited = detail::parse_int<PubId>(fields[1]);
    if (!citing || !cited) {
      result.report.note_malformed(line_no, "non-integer identifier");
      continue;
    }
    result.pairs.push_back({*citing, *cited});
  }
  if (in.bad()) throw ParseError("error while reading citation stream");
  detail::check_malformed(result.report, opts, "citations");
  return result;
}

struct MetadataParseResult {
  std::vector<PublicationRecord> records;
  ParseReport report;
};

namespace detail {

inline std::optional<std::string> record_year_error(const std::optional<int>& year) {
  if (year && (*year < kMinYear || *year > kMaxYear)) return "year out of range";
  return std::nullopt;
}

inline std::vector<std::string> split_headings(std::string_view s) {
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  for (auto h : split(s, '|')) {
    h = trim(h);
    if (!h.empty()) out.emplace_back(h);
  }
  return out;
}

}  // namespace detail

/// TSV: pub_id, year, title, abstract, headings (pipe separated); optional
/// header row starting with "pub_id". JSONL: one object per line with the same
/// field names; headings may be an array or a pipe-separated string.
/// Duplicate pub_ids are malformed (the first occurrence wins).
inline MetadataParseResult parse_metadata(std::istream& in, MetadataFormat format,
                                          const ParseOptions& opts = {}) {
  if (!in) throw ParseError("metadata stream is not readable");
  MetadataParseResult result;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    if (format == MetadataFormat::tsv && first) {
      first = false;
      if (line.rfind("pub_id", 0) == 0) continue;
    }
    ++result.report.data_rows;
    PublicationRecord rec;
    if (format == MetadataFormat::tsv) {
      const auto f = detail::split(line, '\t');
      if (f.size() < 3 || f.size() > 5) {
        result.report.note_malformed(line_no, "expected 3 to 5 tab-separated fields");
        continue;
      }
      const auto id = detail::parse_int<PubId>(f[0]);
      if (!id) {
        result.report.note_malformed(line_no, "bad pub_id");
        continue;
      }
      rec.pub_id = *id;
      if (!detail::trim(f[1]).empty()) {
        const auto y = detail::parse_int<int>(f[1]);
        if (!y) {
          result.report.note_malformed(line_no, "bad year");
          continue;
        }
        rec.year = *y;
      }
      rec.title = std::string(f[2]);
      if (f.size() > 3 && !f[3].empty()) rec.abstract = std::string(f[3]);
      if (f.size() > 4) rec.headings = detail::split_headings(f[4]);
    } else {
      auto j = nlohmann::json::parse(line, nullptr, false);
      if (j.is_discarded() || !j.is_object() || !j.contains("pub_id") || !j["pub_id"].is_number_integer()) {
        result.report.note_malformed(line_no, "invalid JSON record");
        continue;
      }
      rec.pub_id = j["pub_id"].get<PubId>();
      if (j.contains("year") && !j["year"].is_null()) {
        if (!j["year"].is_number_integer()) {
          result.report.note_malformed(line_no, "bad year");
          continue;
        }
        rec.year = j["year"].get<int>();
      }
      if (j.contains("title") && j["title"].is_string()) rec.title = j["title"].get<std::string>();
      if (j.contains("abstract") && j["abstract"].is_string()) rec.abstract = j["abstract"].get<std::string>();
      if (j.contains("headings")) {
        const auto& h = j["headings"];
        if (h.is_array()) {
          for (const auto& x : h)
            if (x.is_string()) rec.headings.push_back(x.get<std::string>());
        } else if (h.is_string()) {
          rec.headings = detail::split_headings(h.get<std::string>());
        }
      }
    }
    if (auto why = detail::record_year_error(rec.year)) {
      result.report.note_malformed(line_no, *why);
      continue;
    }
    result.records.push_back(std::move(rec));
  }
  if (in.bad()) throw ParseError("error while reading metadata stream");

  std::vector<std::size_t> order(result.records.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](auto a, auto b) { return result.records[a].pub_id < result.records[b].pub_id; });
  std::vector<bool> drop(result.records.size(), false);
  for (std::size_t i = 1; i < order.size(); ++i)
    if (result.records[order[i]].pub_id == result.records[order[i - 1]].pub_id) drop[order[i]] = true;
  if (std::find(drop.begin(), drop.end(), true) != drop.end()) {
    std::vector<PublicationRecord> kept;
    for (std::size_t i = 0; i < result.records.size(); ++i) {
      if (drop[i])
        result.report.note_malformed(0, "duplicate pub_id " + std::to_string(result.records[i].pub_id));
      else
        kept.push_back(std::move(result.records[i]));
    }
    result.records = std::move(kept);
  }
  detail::check_malformed(result.report, opts, "metadata");
  return result;
}

// ---------------------------------------------------------------------------
// Citation graph

/// Compressed sparse row adjacency: sorted, duplicate-free neighbor lists.
struct Csr {
  std::vector<std::uint64_t> offsets{0};
  std::vector<NodeIndex> targets;

  std::span<const NodeIndex> row(NodeIndex v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
  bool operator==(const Csr&) const = default;
};

struct BuildReport {
  std::size_t input_pairs = 0;
  std::size_t duplicates_dropped = 0;
  std::size_t self_loops_dropped = 0;
  std::size_t nodes_without_record = 0;
};

/// Immutable bidirectional citation graph. Node indices follow ascending
/// pub_id, so the same input always yields the same graph regardless of row
/// order.
class CorpusGraph {
 public:
  CorpusGraph() = default;
  CorpusGraph(std::vector<PublicationRecord> records, Csr out)
      : records_(std::move(records)), out_(std::move(out)) {
    build_in();
  }

  std::size_t node_count() const { return records_.size(); }
  std::size_t edge_count() const { return out_.targets.size(); }

  /// Publications that `v` cites.
  std::span<const NodeIndex> references(NodeIndex v) const { return out_.row(v); }
  /// Publications citing `v`.
  std::span<const NodeIndex> citers(NodeIndex v) const { return in_.row(v); }

  const PublicationRecord& record(NodeIndex v) const { return records_[v]; }
  const std::vector<PublicationRecord>& records() const { return records_; }
  PubId pub_id(NodeIndex v) const { return records_[v].pub_id; }

  std::optional<NodeIndex> find(PubId id) const {
    auto it = std::lower_bound(records_.begin(), records_.end(), id,
                               [](const PublicationRecord& r, PubId x) { return r.pub_id < x; });
    if (it == records_.end() || it->pub_id != id) return std::nullopt;
    return static_cast<NodeIndex>(it - records_.begin());
  }

  bool cites(NodeIndex a, NodeIndex b) const {
    auto r = references(a);
    return std::binary_search(r.begin(), r.end(), b);
  }

  const Csr& out_csr() const { return out_; }
  const Csr& in_csr() const { return in_; }

  bool operator==(const CorpusGraph& o) const { return records_ == o.records_ && out_ == o.out_ && in_ == o.in_; }

 private:
  void build_in() {
    const auto n = records_.size();
    in_.offsets.assign(n + 1, 0);
    for (NodeIndex t : out_.targets) ++in_.offsets[t + 1];
    for (std::size_t i = 0; i < n; ++i) in_.offsets[i + 1] += in_.offsets[i];
    in_.targets.resize(out_.targets.size());
    std::vector<std::uint64_t> cursor(in_.offsets.begin(), in_.offsets.end() - 1);
    // walking sources in ascending order leaves every in-row sorted
    for (NodeIndex s = 0; s < n; ++s)
      for (NodeIndex t : out_.row(s)) in_.targets[cursor[t]++] = s;
  }

  std::vector<PublicationRecord> records_;
  Csr out_;
  Csr in_;
};

struct BuiltGraph {
  CorpusGraph graph;
  BuildReport report;
};

/// Nodes are the union of ids in `pairs` and `records`. Duplicate pairs are
/// collapsed and self-loops dropped.
inline BuiltGraph build_graph(std::span<const CitationPair> pairs, std::vector<PublicationRecord> records) {
  BuildReport report;
  report.input_pairs = pairs.size();

  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.pub_id < b.pub_id; });
  records.erase(std::unique(records.begin(), records.end(),
                            [](const auto& a, const auto& b) { return a.pub_id == b.pub_id; }),
                records.end());

  std::vector<PubId> ids;
  ids.reserve(pairs.size() * 2);
  for (const auto& p : pairs) {
    ids.push_back(p.citing);
    ids.push_back(p.cited);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  std::vector<PublicationRecord> nodes;
  nodes.reserve(ids.size() + records.size());
  {
    std::size_t i = 0, j = 0;
    while (i < ids.size() || j < records.size()) {
      if (j < records.size() && (i == ids.size() || records[j].pub_id <= ids[i])) {
        if (i < ids.size() && records[j].pub_id == ids[i]) ++i;
        nodes.push_back(std::move(records[j++]));
      } else {
        PublicationRecord stub;
        stub.pub_id = ids[i++];
        nodes.push_back(std::move(stub));
        ++report.nodes_without_record;
      }
    }
  }

  auto index_of = [&](PubId id) {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const PublicationRecord& r, PubId x) { return r.pub_id < x; });
    return static_cast<NodeIndex>(it - nodes.begin());
  };

  std::vector<std::pair<NodeIndex, NodeIndex>> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.citing == p.cited) {
      ++report.self_loops_dropped;
      continue;
    }
    edges.emplace_back(index_of(p.citing), index_of(p.cited));
  }
  std::sort(edges.begin(), edges.end());
  const auto before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  report.duplicates_dropped = before - edges.size();

  Csr out;
  out.offsets.assign(nodes.size() + 1, 0);
  out.targets.reserve(edges.size());
  for (const auto& [s, t] : edges) {
    ++out.offsets[s + 1];
    out.targets.push_back(t);
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) out.offsets[i + 1] += out.offsets[i];

  return {CorpusGraph(std::move(nodes), std::move(out)), report};
}

/// Structural fingerprint over ids, years, text and adjacency.
inline std::uint64_t fingerprint(const CorpusGraph& g) {
  std::uint64_t h = stable_hash(static_cast<std::uint64_t>(g.node_count()), g.edge_count());
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const auto& r = g.record(v);
    h = stable_hash(h, static_cast<std::uint64_t>(r.pub_id));
    h = stable_hash(h, static_cast<std::uint64_t>(r.year.value_or(-1)));
    h = stable_hash(r.title, h);
    h = stable_hash(r.abstract.value_or(""), h);
    for (const auto& x : r.headings) h = stable_hash(x, h);
    for (NodeIndex t : g.references(v)) h = stable_hash(h, t);
  }
  return h;
}

// ---------------------------------------------------------------------------
// Review cases

struct ReviewCriteria {
  int review_year = 2022;
  std::string title_pattern = "systematic review";
  int ref_year_min = 2010;
  int ref_year_max = 2021;
  std::size_t min_refs = 30;
  std::size_t sample_size = 3000;
  std::uint64_t rng_seed = 0;
  /// Sample candidates first and apply the min_refs filter afterwards.
  bool sample_before_filter = false;
};

struct ReviewCase {
  NodeIndex review = kNoNode;
  std::vector<NodeIndex> eligible_refs;  // sorted
  std::vector<NodeIndex> seeds;          // sorted
  std::vector<NodeIndex> not_seeds;      // sorted
};

inline bool title_matches(std::string_view title, std::string_view pattern) {
  if (pattern.empty()) return true;
  return to_lower_ascii(title).find(to_lower_ascii(pattern)) != std::string::npos;
}

inline std::vector<NodeIndex> eligible_references(const CorpusGraph& g, NodeIndex review,
                                                  int year_min, int year_max) {
  std::vector<NodeIndex> out;
  for (NodeIndex r : g.references(review)) {
    const auto& y = g.record(r).year;
    if (y && *y >= year_min && *y <= year_max) out.push_back(r);
  }
  return out;
}

/// Returns case skeletons (eligible_refs set, seeds empty) sorted by node index.
inline std::vector<ReviewCase> select_reviews(const CorpusGraph& g, const ReviewCriteria& c) {
  std::vector<NodeIndex> candidates;
  for (NodeIndex v = 0; v < g.node_count(); ++v) {
    const auto& r = g.record(v);
    if (r.year && *r.year == c.review_year && title_matches(r.title, c.title_pattern)) candidates.push_back(v);
  }

  auto qualifies = [&](NodeIndex v) {
    return eligible_references(g, v, c.ref_year_min, c.ref_year_max).size() >= c.min_refs;
  };

  Rng rng(c.rng_seed);
  std::vector<NodeIndex> chosen;
  if (c.sample_before_filter) {
    chosen = sample_without_replacement(candidates, std::min(c.sample_size, candidates.size()), rng);
    std::erase_if(chosen, [&](NodeIndex v) { return !qualifies(v); });
  } else {
    std::erase_if(candidates, [&](NodeIndex v) { return !qualifies(v); });
    chosen = sample_without_replacement(candidates, std::min(c.sample_size, candidates.size()), rng);
  }
  std::sort(chosen.begin(), chosen.end());

  std::vector<ReviewCase> cases;
  cases.reserve(chosen.size());
  for (NodeIndex v : chosen) {
    ReviewCase rc;
    rc.review = v;
    rc.eligible_refs = eligible_references(g, v, c.ref_year_min, c.ref_year_max);
    cases.push_back(std::move(rc));
  }
  return cases;
}

/// Splits eligible_refs into a uniform random n-subset of seeds and the rest.
inline ReviewCase sample_seeds(ReviewCase rc, std::size_t n, Rng& rng) {
  if (n == 0) throw InputError("seed count must be at least 1");
  if (n > rc.eligible_refs.size())
    throw InputError("seed count " + std::to_string(n) + " exceeds " +
                     std::to_string(rc.eligible_refs.size()) + " eligible references");
  rc.seeds = sample_without_replacement(rc.eligible_refs, n, rng);
  std::sort(rc.seeds.begin(), rc.seeds.end());
  rc.not_seeds.clear();
  std::set_difference(rc.eligible_refs.begin(), rc.eligible_refs.end(), rc.seeds.begin(), rc.seeds.end(),
                      std::back_inserter(rc.not_seeds));
  return rc;
}

}  // namespace seedrel
