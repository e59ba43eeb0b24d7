#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seedrel/citescore.hpp"
#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"
#include "seedrel/fusion.hpp"
#include "seedrel/textsim.hpp"

namespace seedrel {

enum class EvalStatus { ok, skipped, failed };

inline constexpr std::string_view status_name(EvalStatus s) {
  switch (s) {
    case EvalStatus::ok: return "ok";
    case EvalStatus::skipped: return "skipped";
    case EvalStatus::failed: return "failed";
  }
  return "?";
}

/// Per-review, per-approach evaluation. recall_at[k-1] / precision_at[k-1]
/// hold the values at rank k for k = 1..K_max.
struct EvalResult {
  NodeIndex review = kNoNode;
  PubId review_pub_id = 0;
  Approach approach = Approach::DC;
  EvalStatus status = EvalStatus::ok;
  std::string message;

  std::size_t retrieved_count = 0;
  std::size_t hits_total = 0;
  std::size_t not_seeds_count = 0;
  double total_recall = 0.0;
  double total_precision = 0.0;
  /// Nothing retrieved; total_precision is reported as 0.
  bool zero_retrieval = false;
  double max_score = 0.0;
  std::vector<double> recall_at;
  std::vector<double> precision_at;
};

/// Hit-based metrics of a ranked list against the not-seeds. Beyond the end
/// of the list the top-k set is the whole list (recall flat, precision
/// hits_total/k).
inline EvalResult metrics(const RankedList& ranked, std::span<const NodeIndex> not_seeds, std::size_t k_max) {
  if (not_seeds.empty()) throw InputError("metrics need at least one not-seed publication");
  std::vector<NodeIndex> targets(not_seeds.begin(), not_seeds.end());
  std::sort(targets.begin(), targets.end());

  EvalResult r;
  r.approach = ranked.approach;
  r.retrieved_count = ranked.items.size();
  r.not_seeds_count = targets.size();
  r.recall_at.resize(k_max);
  r.precision_at.resize(k_max);

  const double denom = static_cast<double>(targets.size());
  std::size_t hits = 0;
  for (std::size_t i = 0; i < ranked.items.size(); ++i) {
    if (std::binary_search(targets.begin(), targets.end(), ranked.items[i].node)) ++hits;
    if (i < k_max) {
      r.recall_at[i] = static_cast<double>(hits) / denom;
      r.precision_at[i] = static_cast<double>(hits) / static_cast<double>(i + 1);
    }
    r.max_score = std::max(r.max_score, ranked.items[i].score);
  }
  for (std::size_t k = ranked.items.size() + 1; k <= k_max; ++k) {
    r.recall_at[k - 1] = static_cast<double>(hits) / denom;
    r.precision_at[k - 1] = static_cast<double>(hits) / static_cast<double>(k);
  }
  r.hits_total = hits;
  r.total_recall = static_cast<double>(hits) / denom;
  if (ranked.items.empty()) {
    r.zero_retrieval = true;
    r.total_precision = 0.0;
  } else {
    r.total_precision = static_cast<double>(hits) / static_cast<double>(ranked.items.size());
  }
  return r;
}

// ---------------------------------------------------------------------------
// Case evaluation

struct EvalConfig {
  std::vector<Approach> approaches{kAllApproaches.begin(), kAllApproaches.end()};
  std::uint32_t bc_min_score = 2;
  std::uint32_t cc_min_score = 2;
  FusionWeights weights;
  RaParams ra;
  std::size_t pool_per_seed = 2000;
  std::size_t k_max = 2000;
  /// DC_BC_CC non-hits kept per case for the manual-assessment export.
  std::size_t audit_retain = 10;
};

struct AuditItem {
  std::size_t rank = 0;  // 1-based position in the DC_BC_CC ranking
  NodeIndex node = kNoNode;
  double score = 0.0;
};

struct CaseEvaluation {
  NodeIndex review = kNoNode;
  PubId review_pub_id = 0;
  std::uint64_t case_seed = 0;
  std::vector<NodeIndex> seeds;
  std::size_t eligible_count = 0;
  std::size_t not_seeds_count = 0;
  bool skipped = false;
  std::string skip_reason;
  std::vector<EvalResult> results;
  /// Leading DC_BC_CC non-hits, in rank order.
  std::vector<AuditItem> audit_non_hits;
};

inline std::uint64_t tie_seed_for(std::uint64_t case_seed, Approach a) {
  return stable_hash(case_seed, static_cast<std::uint64_t>(a) + 1);
}

/// All component and fused score maps for one query.
struct QueryScores {
  std::optional<ScoreMap> dc, bc, cc, ra, dc_bc_cc, dc_bc_cc_ra;
  std::map<Approach, std::string> errors;

  const std::optional<ScoreMap>& get(Approach a) const {
    switch (a) {
      case Approach::DC: return dc;
      case Approach::BC: return bc;
      case Approach::CC: return cc;
      case Approach::RA: return ra;
      case Approach::DC_BC_CC: return dc_bc_cc;
      case Approach::DC_BC_CC_RA: return dc_bc_cc_ra;
    }
    return dc;
  }
};

/// Computes the requested approaches (and the components they depend on).
/// A failure in one scorer marks it and its dependents failed; the others
/// proceed.
inline QueryScores score_query(const CorpusGraph& g, const TermIndex& idx, std::span<const NodeIndex> seeds,
                               std::span<const NodeIndex> excluded, std::optional<NodeIndex> disregard,
                               const EvalConfig& cfg, std::span<const Approach> wanted, ScatterCounter& scratch) {
  auto want = [&](Approach a) { return std::find(wanted.begin(), wanted.end(), a) != wanted.end(); };
  const bool want_full = want(Approach::DC_BC_CC_RA);
  const bool want_cit = want(Approach::DC_BC_CC) || want_full;
  const bool need_dc = want(Approach::DC) || want_cit;
  const bool need_bc = want(Approach::BC) || want_cit;
  const bool need_cc = want(Approach::CC) || want_cit;
  const bool need_ra = want(Approach::RA) || want_full;

  QueryScores q;
  auto attempt = [&](Approach a, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      q.errors[a] = e.what();
    }
  };
  if (need_dc) attempt(Approach::DC, [&] { q.dc = dc_scores(g, seeds, excluded, scratch); });
  if (need_bc) attempt(Approach::BC, [&] { q.bc = bc_scores(g, seeds, excluded, cfg.bc_min_score, scratch); });
  if (need_cc)
    attempt(Approach::CC, [&] { q.cc = cc_scores(g, seeds, excluded, cfg.cc_min_score, disregard, scratch); });
  if (need_ra) attempt(Approach::RA, [&] { q.ra = ra_scores(idx, seeds, excluded, cfg.pool_per_seed, SaturatingTfIdf{cfg.ra}); });
  if (want_cit) {
    if (q.dc && q.bc && q.cc)
      attempt(Approach::DC_BC_CC, [&] { q.dc_bc_cc = combine_citation(*q.dc, *q.bc, *q.cc, cfg.weights); });
    else
      q.errors[Approach::DC_BC_CC] = "component scorer failed";
  }
  if (want_full) {
    if (q.dc_bc_cc && q.ra)
      attempt(Approach::DC_BC_CC_RA, [&] { q.dc_bc_cc_ra = combine_all(*q.dc_bc_cc, *q.ra, cfg.weights.candidates); });
    else
      q.errors[Approach::DC_BC_CC_RA] = "component scorer failed";
  }
  return q;
}

/// Scores every enabled approach for one review case. Exclusions are the
/// review and its seeds; the review is also disregarded as a co-citer.
inline CaseEvaluation evaluate_case(const CorpusGraph& g, const TermIndex& idx, const ReviewCase& rc,
                                    const EvalConfig& cfg, std::uint64_t case_seed, ScatterCounter& scratch) {
  CaseEvaluation ev;
  ev.review = rc.review;
  ev.review_pub_id = g.pub_id(rc.review);
  ev.case_seed = case_seed;
  ev.seeds = rc.seeds;
  ev.eligible_count = rc.eligible_refs.size();
  ev.not_seeds_count = rc.not_seeds.size();

  auto blank = [&](Approach a, EvalStatus st, std::string msg) {
    EvalResult r;
    r.review = rc.review;
    r.review_pub_id = ev.review_pub_id;
    r.approach = a;
    r.status = st;
    r.message = std::move(msg);
    r.not_seeds_count = rc.not_seeds.size();
    return r;
  };

  if (rc.not_seeds.empty()) {
    ev.skipped = true;
    ev.skip_reason = "no not-seed publications";
    for (Approach a : cfg.approaches) ev.results.push_back(blank(a, EvalStatus::skipped, ev.skip_reason));
    return ev;
  }

  const auto excluded = make_exclusions(rc.seeds, rc.review);
  const auto q = score_query(g, idx, rc.seeds, excluded, rc.review, cfg, cfg.approaches, scratch);

  for (Approach a : cfg.approaches) {
    const auto& map = q.get(a);
    if (!map) {
      auto it = q.errors.find(a);
      ev.results.push_back(blank(a, EvalStatus::failed, it != q.errors.end() ? it->second : "not computed"));
      continue;
    }
    const auto ranked = rank(*map, tie_seed_for(case_seed, a));
    EvalResult r = metrics(ranked, rc.not_seeds, cfg.k_max);
    r.review = rc.review;
    r.review_pub_id = ev.review_pub_id;
    ev.results.push_back(std::move(r));

    if (a == Approach::DC_BC_CC) {
      for (std::size_t i = 0; i < ranked.items.size() && ev.audit_non_hits.size() < cfg.audit_retain; ++i) {
        const auto& it = ranked.items[i];
        if (!std::binary_search(rc.not_seeds.begin(), rc.not_seeds.end(), it.node))
          ev.audit_non_hits.push_back({i + 1, it.node, it.score});
      }
    }
  }
  return ev;
}

inline CaseEvaluation evaluate_case(const CorpusGraph& g, const TermIndex& idx, const ReviewCase& rc,
                                    const EvalConfig& cfg, std::uint64_t case_seed) {
  ScatterCounter scratch;
  return evaluate_case(g, idx, rc, cfg, case_seed, scratch);
}

// ---------------------------------------------------------------------------
// Aggregation

struct AggregateCurve {
  Approach approach = Approach::DC;
  std::vector<std::size_t> ks;
  std::vector<double> mean_recall, ci_recall;
  std::vector<double> mean_precision, ci_precision;
  std::size_t review_count = 0;
};

struct FiveNumber {
  double min = 0, q1 = 0, median = 0, q3 = 0, max = 0;
};

struct DistributionSummary {
  Approach approach = Approach::DC;
  std::string metric;  // retrieved_count | total_recall | total_precision
  std::size_t n = 0;
  FiveNumber summary;
};

struct Aggregation {
  std::vector<AggregateCurve> curves;
  std::vector<DistributionSummary> distributions;
};

inline constexpr double kZ95 = 1.96;

/// Linear interpolation between closest ranks (quantile type 7).
inline double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw InputError("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline FiveNumber five_number(const std::vector<double>& v) {
  return {quantile(v, 0.0), quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75), quantile(v, 1.0)};
}

/// Mean and 95% normal-approximation half-width (1.96·sd/√n, sample sd).
inline std::pair<double, double> mean_ci(std::span<const double> xs) {
  const double n = static_cast<double>(xs.size());
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  return {mean, kZ95 * sd / std::sqrt(n)};
}

/// Aggregates the ok results per approach. Approaches appear in
/// kAllApproaches order.
inline Aggregation aggregate(std::span<const EvalResult> results, std::span<const std::size_t> k_grid) {
  std::map<Approach, std::vector<const EvalResult*>> by;
  for (const auto& r : results)
    if (r.status == EvalStatus::ok) by[r.approach].push_back(&r);

  Aggregation agg;
  for (const auto& [a, rs] : by) {
    if (rs.size() < 2)
      throw InputError("aggregation of " + std::string(approach_name(a)) + " needs at least 2 reviews");
    AggregateCurve c;
    c.approach = a;
    c.review_count = rs.size();
    std::vector<double> rec(rs.size()), prec(rs.size());
    for (std::size_t k : k_grid) {
      for (std::size_t i = 0; i < rs.size(); ++i) {
        if (k < 1 || k > rs[i]->recall_at.size()) throw InputError("k grid exceeds evaluated K_max");
        rec[i] = rs[i]->recall_at[k - 1];
        prec[i] = rs[i]->precision_at[k - 1];
      }
      const auto [mr, cr] = mean_ci(rec);
      const auto [mp, cp] = mean_ci(prec);
      c.ks.push_back(k);
      c.mean_recall.push_back(mr);
      c.ci_recall.push_back(cr);
      c.mean_precision.push_back(mp);
      c.ci_precision.push_back(cp);
    }
    agg.curves.push_back(std::move(c));

    std::vector<double> retrieved, trec, tprec;
    for (const auto* r : rs) {
      retrieved.push_back(static_cast<double>(r->retrieved_count));
      trec.push_back(r->total_recall);
      tprec.push_back(r->total_precision);
    }
    agg.distributions.push_back({a, "retrieved_count", rs.size(), five_number(retrieved)});
    agg.distributions.push_back({a, "total_recall", rs.size(), five_number(trec)});
    agg.distributions.push_back({a, "total_precision", rs.size(), five_number(tprec)});
  }
  if (agg.curves.empty()) throw InputError("no evaluated reviews to aggregate");
  return agg;
}

// ---------------------------------------------------------------------------
// Score-scale diagnostic

struct ScoreScaleDiagnostic {
  std::size_t reviews = 0;
  double max_dc = 0, max_bc = 0, max_cc = 0;
  std::optional<double> bc_over_dc, cc_over_dc;
};

/// Ratios of the largest BC and CC scores to the largest DC score over all
/// evaluated reviews.
inline ScoreScaleDiagnostic score_scale_diagnostic(std::span<const EvalResult> results) {
  ScoreScaleDiagnostic d;
  bool have_bc = false, have_cc = false;
  std::vector<PubId> reviews;
  for (const auto& r : results) {
    if (r.status != EvalStatus::ok) continue;
    switch (r.approach) {
      case Approach::DC:
        d.max_dc = std::max(d.max_dc, r.max_score);
        reviews.push_back(r.review_pub_id);
        break;
      case Approach::BC:
        have_bc = true;
        d.max_bc = std::max(d.max_bc, r.max_score);
        break;
      case Approach::CC:
        have_cc = true;
        d.max_cc = std::max(d.max_cc, r.max_score);
        break;
      default: break;
    }
  }
  std::sort(reviews.begin(), reviews.end());
  d.reviews = static_cast<std::size_t>(std::unique(reviews.begin(), reviews.end()) - reviews.begin());
  if (d.max_dc <= 0.0) throw InputError("score-scale diagnostic needs at least one review with DC scores");
  if (have_bc) d.bc_over_dc = d.max_bc / d.max_dc;
  if (have_cc) d.cc_over_dc = d.max_cc / d.max_dc;
  return d;
}

}  // namespace seedrel
