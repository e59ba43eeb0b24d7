#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "seedrel/seedrel.hpp"

namespace testsupport {

using namespace seedrel;

/// Random graph over pub_ids 1..n together with the raw deduplicated edge set
/// the oracles work from.
struct RandomGraph {
  CorpusGraph graph;
  std::set<std::pair<PubId, PubId>> edges;
  std::size_t n = 0;
};

inline RandomGraph random_graph(std::mt19937_64& rng, std::size_t max_nodes = 200, std::size_t max_edges = 2000) {
  std::uniform_int_distribution<std::size_t> nd(10, max_nodes);
  const auto n = nd(rng);
  std::uniform_int_distribution<std::size_t> ed(n, max_edges);
  const auto e = ed(rng);
  std::uniform_int_distribution<PubId> id(1, static_cast<PubId>(n));
  std::vector<CitationPair> pairs;
  RandomGraph out;
  for (std::size_t i = 0; i < e; ++i) {
    const PubId a = id(rng), b = id(rng);
    pairs.push_back({a, b});
    if (a != b) out.edges.insert({a, b});
  }
  std::vector<PublicationRecord> recs;
  for (PubId i = 1; i <= static_cast<PubId>(n); ++i) recs.push_back({i, 2015, "t", std::nullopt, {}});
  out.graph = build_graph(pairs, recs).graph;
  out.n = n;
  return out;
}

/// Oracle inputs are pub_ids; results are pub_id -> integer score.
using IdScores = std::map<PubId, std::int64_t>;

inline bool has_edge(const RandomGraph& g, PubId a, PubId b) { return g.edges.count({a, b}) > 0; }

inline IdScores oracle_dc(const RandomGraph& g, const std::vector<PubId>& seeds, const std::set<PubId>& excluded) {
  IdScores out;
  for (PubId p = 1; p <= static_cast<PubId>(g.n); ++p) {
    if (excluded.count(p)) continue;
    std::int64_t s = 0;
    for (PubId q : seeds) s += has_edge(g, p, q) + has_edge(g, q, p);
    if (s > 0) out[p] = s;
  }
  return out;
}

inline IdScores oracle_bc(const RandomGraph& g, const std::vector<PubId>& seeds, const std::set<PubId>& excluded,
                          std::int64_t min_score) {
  IdScores out;
  for (PubId p = 1; p <= static_cast<PubId>(g.n); ++p) {
    if (excluded.count(p)) continue;
    std::int64_t s = 0;
    for (PubId q : seeds)
      for (PubId r = 1; r <= static_cast<PubId>(g.n); ++r) s += has_edge(g, p, r) && has_edge(g, q, r);
    if (s >= min_score) out[p] = s;
  }
  return out;
}

/// Pair enumeration: every citing paper's reference list, every ordered
/// (candidate, seed) pair inside it.
inline IdScores oracle_cc(const RandomGraph& g, const std::vector<PubId>& seeds, const std::set<PubId>& excluded,
                          std::int64_t min_score, std::optional<PubId> disregard) {
  std::map<PubId, std::vector<PubId>> refs;
  for (const auto& [a, b] : g.edges) refs[a].push_back(b);
  IdScores out;
  for (PubId p = 1; p <= static_cast<PubId>(g.n); ++p) {
    if (excluded.count(p)) continue;
    std::int64_t s = 0;
    for (const auto& [citer, list] : refs) {
      if (disregard && citer == *disregard) continue;
      if (std::find(list.begin(), list.end(), p) == list.end()) continue;
      for (PubId q : seeds)
        if (std::find(list.begin(), list.end(), q) != list.end()) ++s;
    }
    if (s >= min_score) out[p] = s;
  }
  return out;
}

inline IdScores to_ids(const CorpusGraph& g, const ScoreMap& m) {
  IdScores out;
  for (const auto& e : m.entries) {
    const auto v = static_cast<std::int64_t>(e.score);
    out[g.pub_id(e.node)] = static_cast<double>(v) == e.score ? v : -1;
  }
  return out;
}

inline std::vector<NodeIndex> nodes_of(const CorpusGraph& g, const std::vector<PubId>& ids) {
  std::vector<NodeIndex> out;
  for (PubId id : ids) out.push_back(*g.find(id));
  return out;
}

inline std::vector<PubId> pick_seeds(std::mt19937_64& rng, std::size_t n, std::size_t k) {
  std::vector<PubId> all;
  for (PubId i = 1; i <= static_cast<PubId>(n); ++i) all.push_back(i);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(k, all.size()));
  std::sort(all.begin(), all.end());
  return all;
}

/// Naive RA: tokenizes every record afresh and evaluates the weight formula
/// directly from raw counts.
struct NaiveRa {
  std::vector<std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>> tf;
  std::vector<std::uint32_t> len;
  std::map<std::string, std::uint32_t> df;
  double avg = 1.0;
  RaParams p;

  explicit NaiveRa(const std::vector<PublicationRecord>& recs, RaParams params = {}) : p(params) {
    std::uint64_t total = 0;
    std::size_t nonempty = 0;
    for (const auto& r : recs) {
      std::map<std::string, std::pair<std::uint32_t, std::uint32_t>> m;
      for (auto& t : tokenize(r.title)) m[t].first++;
      if (r.abstract)
        for (auto& t : tokenize(*r.abstract)) m[t].second++;
      for (const auto& h : r.headings)
        for (auto& t : tokenize(h)) m[t].second++;
      std::uint32_t l = 0;
      for (auto& [t, c] : m) {
        l += c.first + c.second;
        df[t]++;
      }
      total += l;
      nonempty += l > 0;
      len.push_back(l);
      tf.push_back(std::move(m));
    }
    avg = nonempty ? static_cast<double>(total) / static_cast<double>(nonempty) : 1.0;
  }

  double weight(std::size_t d, const std::string& t) const {
    const auto& c = tf[d].at(t);
    const double f = c.first * p.title_weight + c.second;
    const double idf = std::log((static_cast<double>(tf.size()) + 1.0) / (df.at(t) + 0.5));
    return f / (p.k1 * ((1.0 - p.b) + p.b * len[d] / avg) + f) * idf;
  }

  double score(std::size_t a, std::size_t b) const {
    double s = 0.0;
    for (const auto& [t, c] : tf[a])
      if (tf[b].count(t)) s += weight(a, t) * weight(b, t);
    return s;
  }
};

/// Documents drawn from a small vocabulary; a few share nothing.
inline std::vector<PublicationRecord> random_docs(std::mt19937_64& rng, std::size_t n) {
  static const std::vector<std::string> vocab = {
      "citation", "network",  "graph",    "review",  "systematic", "vaccine", "trial",    "cohort",  "gene",
      "protein",  "cell",     "cancer",   "therapy", "outcome",    "risk",     "model",    "learning", "retrieval",
      "ranking",  "coupling", "analysis", "patient", "clinical",   "dose",     "response", "marker",   "signal"};
  std::uniform_int_distribution<std::size_t> w(0, vocab.size() - 1), tl(1, 6), bl(0, 25);
  std::vector<PublicationRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    PublicationRecord r;
    r.pub_id = static_cast<PubId>(100 + i);
    r.year = 2015;
    for (std::size_t k = 0, m = tl(rng); k < m; ++k) r.title += (k ? " " : "") + vocab[w(rng)];
    std::string body;
    for (std::size_t k = 0, m = bl(rng); k < m; ++k) body += (k ? " " : "") + vocab[w(rng)];
    if (!body.empty()) r.abstract = body;
    if (i % 7 == 3) r.headings = {vocab[w(rng)]};
    out.push_back(std::move(r));
  }
  out.push_back({static_cast<PubId>(100 + n), 2015, "Zyxwv qwerty", std::string("plonk"), {}});
  out.push_back({static_cast<PubId>(101 + n), 2015, "", std::nullopt, {}});
  return out;
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("seedrel_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace testsupport
