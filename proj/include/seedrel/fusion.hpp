#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "seedrel/citescore.hpp"
#include "seedrel/common.hpp"

namespace seedrel {

enum class CandidateSet { union_of_components, intersection_of_components };

/// DC_BC_CC = p_DC/dc_divisor + p_BC/bc_divisor + p_CC/cc_divisor.
struct FusionWeights {
  double dc_divisor = 1.0;
  double bc_divisor = 10.0;
  double cc_divisor = 10.0;
  CandidateSet candidates = CandidateSet::union_of_components;
};

namespace detail {

inline void require_same_exclusions(const ScoreMap& a, const ScoreMap& b) {
  if (a.excluded != b.excluded) throw InputError("score maps were computed with different exclusion sets");
}

inline bool is_positive_integer(double x) { return x >= 1.0 && x <= 1e9 && std::floor(x) == x; }

/// Union or intersection of entry node sets, sorted.
inline std::vector<NodeIndex> combine_nodes(std::span<const ScoreMap* const> maps, CandidateSet mode) {
  std::vector<NodeIndex> out;
  if (mode == CandidateSet::union_of_components) {
    for (const auto* m : maps)
      for (const auto& e : m->entries) out.push_back(e.node);
    return normalize_set(std::move(out));
  }
  for (const auto& e : maps[0]->entries) out.push_back(e.node);
  for (std::size_t i = 1; i < maps.size(); ++i)
    std::erase_if(out, [&](NodeIndex v) { return !maps[i]->find(v); });
  return out;
}

}  // namespace detail

/// Weighted sum of the three citation scores; a component without an entry
/// contributes 0. With integer divisors the sum is formed over the common
/// denominator so mathematically equal scores compare equal.
inline ScoreMap combine_citation(const ScoreMap& dc, const ScoreMap& bc, const ScoreMap& cc,
                                 const FusionWeights& w = {}) {
  detail::require_same_exclusions(dc, bc);
  detail::require_same_exclusions(dc, cc);
  if (!(w.dc_divisor > 0 && w.bc_divisor > 0 && w.cc_divisor > 0))
    throw InputError("fusion divisors must be positive");

  const ScoreMap* maps[] = {&dc, &bc, &cc};
  const auto nodes = detail::combine_nodes(maps, w.candidates);

  const bool integral = detail::is_positive_integer(w.dc_divisor) && detail::is_positive_integer(w.bc_divisor) &&
                        detail::is_positive_integer(w.cc_divisor);
  std::int64_t lcm = 1;
  std::int64_t mul[3] = {0, 0, 0};
  if (integral) {
    const std::int64_t d[3] = {static_cast<std::int64_t>(w.dc_divisor), static_cast<std::int64_t>(w.bc_divisor),
                               static_cast<std::int64_t>(w.cc_divisor)};
    lcm = std::lcm(std::lcm(d[0], d[1]), d[2]);
    for (int i = 0; i < 3; ++i) mul[i] = lcm / d[i];
  }

  ScoreMap out;
  out.approach = Approach::DC_BC_CC;
  out.excluded = dc.excluded;
  out.entries.reserve(nodes.size());
  for (NodeIndex v : nodes) {
    const double s[3] = {dc.score_or_zero(v), bc.score_or_zero(v), cc.score_or_zero(v)};
    double score;
    if (integral) {
      // component scores are integer counts
      const double num = s[0] * static_cast<double>(mul[0]) + s[1] * static_cast<double>(mul[1]) +
                         s[2] * static_cast<double>(mul[2]);
      score = num / static_cast<double>(lcm);
    } else {
      score = s[0] / w.dc_divisor + s[1] / w.bc_divisor + s[2] / w.cc_divisor;
    }
    out.entries.push_back({v, score});
  }
  return out;
}

/// Affine map of `values` onto [target_min, target_max]; a constant input maps
/// to the midpoint.
inline std::vector<double> rescale_to_range(std::span<const double> values, double target_min, double target_max) {
  if (values.empty()) throw InputError("cannot rescale an empty vector");
  if (target_min > target_max) throw InputError("rescale target range is inverted");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(values.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), (target_min + target_max) / 2.0);
    return out;
  }
  const double scale = (target_max - target_min) / (hi - lo);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == hi) out[i] = target_max;
    else out[i] = target_min + (values[i] - lo) * scale;
  }
  return out;
}

/// DC_BC_CC_RA = DC_BC_CC + RA rescaled onto the [min, max] of the DC_BC_CC
/// entries of this query. Without DC_BC_CC entries RA is used unscaled.
inline ScoreMap combine_all(const ScoreMap& citation, const ScoreMap& ra,
                            CandidateSet mode = CandidateSet::union_of_components) {
  detail::require_same_exclusions(citation, ra);

  std::vector<double> ra_values;
  ra_values.reserve(ra.entries.size());
  for (const auto& e : ra.entries) ra_values.push_back(e.score);

  std::vector<double> ra_scaled = ra_values;
  if (!ra_values.empty() && !citation.empty()) {
    double lo = citation.entries.front().score, hi = lo;
    for (const auto& e : citation.entries) {
      lo = std::min(lo, e.score);
      hi = std::max(hi, e.score);
    }
    ra_scaled = rescale_to_range(ra_values, lo, hi);
  }

  ScoreMap scaled;
  scaled.approach = Approach::RA;
  scaled.excluded = ra.excluded;
  for (std::size_t i = 0; i < ra.entries.size(); ++i) scaled.entries.push_back({ra.entries[i].node, ra_scaled[i]});

  const ScoreMap* maps[] = {&citation, &scaled};
  ScoreMap out;
  out.approach = Approach::DC_BC_CC_RA;
  out.excluded = citation.excluded;
  for (NodeIndex v : detail::combine_nodes(maps, mode))
    out.entries.push_back({v, citation.score_or_zero(v) + scaled.score_or_zero(v)});
  return out;
}

// ---------------------------------------------------------------------------
// Ranking

struct RankedList {
  Approach approach = Approach::DC;
  std::vector<ScoreEntry> items;  // score non-increasing
  std::uint64_t tie_seed = 0;
};

/// Score descending; each block of equal scores is put in a uniformly random
/// order drawn from tie_seed. Deterministic for fixed (scores, tie_seed).
inline RankedList rank(const ScoreMap& scores, std::uint64_t tie_seed) {
  RankedList out;
  out.approach = scores.approach;
  out.tie_seed = tie_seed;
  out.items = scores.entries;
  std::stable_sort(out.items.begin(), out.items.end(),
                   [](const ScoreEntry& a, const ScoreEntry& b) { return a.score > b.score; });
  Rng rng(tie_seed);
  for (auto it = out.items.begin(); it != out.items.end();) {
    auto end = std::find_if(it, out.items.end(), [&](const ScoreEntry& e) { return e.score != it->score; });
    if (end - it > 1) portable_shuffle(it, end, rng);
    it = end;
  }
  return out;
}

}  // namespace seedrel
