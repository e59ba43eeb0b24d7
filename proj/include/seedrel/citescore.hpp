#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"

namespace seedrel {

struct ScoreEntry {
  NodeIndex node = kNoNode;
  double score = 0.0;
  bool operator==(const ScoreEntry&) const = default;
};

/// Candidate -> positive relatedness score for one approach. Entries are
/// sorted by node index; excluded nodes never appear.
struct ScoreMap {
  Approach approach = Approach::DC;
  std::vector<ScoreEntry> entries;
  std::vector<NodeIndex> excluded;  // sorted, duplicate-free

  std::size_t size() const { return entries.size(); }
  bool empty() const { return entries.empty(); }

  std::optional<double> find(NodeIndex v) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), v,
                               [](const ScoreEntry& e, NodeIndex x) { return e.node < x; });
    if (it == entries.end() || it->node != v) return std::nullopt;
    return it->score;
  }
  double score_or_zero(NodeIndex v) const { return find(v).value_or(0.0); }

  double max_score() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, e.score);
    return m;
  }
};

/// Sorted, duplicate-free copy.
inline std::vector<NodeIndex> normalize_set(std::vector<NodeIndex> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

/// Builds the standard exclusion set: seeds plus the review (if any).
inline std::vector<NodeIndex> make_exclusions(std::span<const NodeIndex> seeds,
                                              std::optional<NodeIndex> review = std::nullopt) {
  std::vector<NodeIndex> ex(seeds.begin(), seeds.end());
  if (review) ex.push_back(*review);
  return normalize_set(std::move(ex));
}

/// |a ∩ b| for sorted ranges, by linear merge.
inline std::size_t intersection_size(std::span<const NodeIndex> a, std::span<const NodeIndex> b,
                                     NodeIndex skip = kNoNode) {
  std::size_t n = 0;
  auto i = a.begin(), j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      if (*i != skip) ++n;
      ++i;
      ++j;
    }
  }
  return n;
}

/// Bibliographic coupling strength of one pair: shared references.
inline std::size_t coupling_strength(const CorpusGraph& g, NodeIndex p, NodeIndex q) {
  return intersection_size(g.references(p), g.references(q));
}

/// Co-citation strength of one pair: shared citers, optionally ignoring one.
inline std::size_t cocitation_strength(const CorpusGraph& g, NodeIndex p, NodeIndex q,
                                       std::optional<NodeIndex> disregard = std::nullopt) {
  return intersection_size(g.citers(p), g.citers(q), disregard.value_or(kNoNode));
}

/// Dense counter with a touched list; reset cost is proportional to the
/// number of touched slots, not to N.
class ScatterCounter {
 public:
  explicit ScatterCounter(std::size_t n = 0) : counts_(n, 0) {}

  void resize(std::size_t n) {
    clear();
    counts_.assign(n, 0);
  }
  std::size_t capacity() const { return counts_.size(); }

  void add(NodeIndex v, std::uint32_t by = 1) {
    if (counts_[v] == 0) touched_.push_back(v);
    counts_[v] += by;
  }
  std::uint32_t get(NodeIndex v) const { return counts_[v]; }
  const std::vector<NodeIndex>& touched() const { return touched_; }

  void clear() {
    for (NodeIndex v : touched_) counts_[v] = 0;
    touched_.clear();
  }

 private:
  std::vector<std::uint32_t> counts_;
  std::vector<NodeIndex> touched_;
};

namespace detail {

inline void check_seeds(const CorpusGraph& g, std::span<const NodeIndex> seeds) {
  for (NodeIndex s : seeds)
    if (s >= g.node_count()) throw InputError("seed index " + std::to_string(s) + " not in graph");
}

inline ScoreMap harvest(Approach a, ScatterCounter& counter, std::span<const NodeIndex> excluded,
                        std::uint32_t min_score) {
  ScoreMap map;
  map.approach = a;
  map.excluded.assign(excluded.begin(), excluded.end());
  for (NodeIndex v : counter.touched()) {
    const auto c = counter.get(v);
    if (c >= min_score && !std::binary_search(excluded.begin(), excluded.end(), v))
      map.entries.push_back({v, static_cast<double>(c)});
  }
  std::sort(map.entries.begin(), map.entries.end(),
            [](const ScoreEntry& x, const ScoreEntry& y) { return x.node < y.node; });
  counter.clear();
  return map;
}

inline void prepare(ScatterCounter& counter, const CorpusGraph& g) {
  if (counter.capacity() != g.node_count()) counter.resize(g.node_count());
  else counter.clear();
}

}  // namespace detail

/// DC(p) = #{s : s cites p} + #{s : p cites s}. No cutoff.
/// `excluded` must be sorted (see make_exclusions).
inline ScoreMap dc_scores(const CorpusGraph& g, std::span<const NodeIndex> seeds,
                          std::span<const NodeIndex> excluded, ScatterCounter& scratch) {
  detail::check_seeds(g, seeds);
  detail::prepare(scratch, g);
  for (NodeIndex s : seeds) {
    for (NodeIndex p : g.references(s)) scratch.add(p);
    for (NodeIndex p : g.citers(s)) scratch.add(p);
  }
  return detail::harvest(Approach::DC, scratch, excluded, 1);
}

/// BC(p) = Σ_s |refs(p) ∩ refs(s)|, kept when ≥ min_score. Enumerated
/// seed-outward: seed -> its references -> their citers.
inline ScoreMap bc_scores(const CorpusGraph& g, std::span<const NodeIndex> seeds,
                          std::span<const NodeIndex> excluded, std::uint32_t min_score,
                          ScatterCounter& scratch) {
  if (min_score < 1) throw InputError("BC min_score must be at least 1");
  detail::check_seeds(g, seeds);
  detail::prepare(scratch, g);
  for (NodeIndex s : seeds)
    for (NodeIndex r : g.references(s))
      for (NodeIndex p : g.citers(r)) scratch.add(p);
  return detail::harvest(Approach::BC, scratch, excluded, min_score);
}

/// CC(p) = Σ_s |citers(p) ∩ citers(s) \ {disregard}|, kept when ≥ min_score.
/// Enumerated seed-outward: seed -> its citers -> their references.
inline ScoreMap cc_scores(const CorpusGraph& g, std::span<const NodeIndex> seeds,
                          std::span<const NodeIndex> excluded, std::uint32_t min_score,
                          std::optional<NodeIndex> disregard, ScatterCounter& scratch) {
  if (min_score < 1) throw InputError("CC min_score must be at least 1");
  detail::check_seeds(g, seeds);
  detail::prepare(scratch, g);
  const NodeIndex skip = disregard.value_or(kNoNode);
  for (NodeIndex s : seeds)
    for (NodeIndex c : g.citers(s)) {
      if (c == skip) continue;
      for (NodeIndex p : g.references(c)) scratch.add(p);
    }
  return detail::harvest(Approach::CC, scratch, excluded, min_score);
}

inline ScoreMap dc_scores(const CorpusGraph& g, std::span<const NodeIndex> seeds,
                          std::span<const NodeIndex> excluded) {
  ScatterCounter scratch;
  return dc_scores(g, seeds, excluded, scratch);
}

inline ScoreMap bc_scores(const CorpusGraph& g, std::span<const NodeIndex> seeds,
                          std::span<const NodeIndex> excluded, std::uint32_t min_score = 2) {
  ScatterCounter scratch;
  return bc_scores(g, seeds, excluded, min_score, scratch);
}

inline ScoreMap cc_scores(const CorpusGraph& g, std::span<const NodeIndex> seeds,
                          std::span<const NodeIndex> excluded, std::uint32_t min_score = 2,
                          std::optional<NodeIndex> disregard = std::nullopt) {
  ScatterCounter scratch;
  return cc_scores(g, seeds, excluded, min_score, disregard, scratch);
}

}  // namespace seedrel
