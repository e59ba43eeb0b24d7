#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "seedrel/evalharness.hpp"
#include "seedrel/experiment.hpp"

namespace seedrel {

inline constexpr std::size_t kDefaultMaxSeeds = 50;

/// Per-request overrides of the service defaults.
struct RetrievalOverrides {
  std::optional<std::uint32_t> bc_min_score, cc_min_score;
  std::optional<double> dc_divisor, bc_divisor, cc_divisor;
  std::optional<double> title_weight;
  std::optional<std::size_t> pool_per_seed;
};

struct RetrievalRequest {
  std::vector<PubId> seeds;
  Approach approach = Approach::DC_BC_CC_RA;
  std::size_t k = 50;
  std::uint64_t tie_seed = 0;
  RetrievalOverrides overrides;
};

/// Request rejected before scoring; `status` is the HTTP status to report.
class RequestError : public Error {
 public:
  RequestError(int status, std::string msg, nlohmann::json detail = nlohmann::json::object())
      : Error(msg), status_(status), detail_(std::move(detail)) {}
  int status() const { return status_; }
  const nlohmann::json& detail() const { return detail_; }

 private:
  int status_;
  nlohmann::json detail_;
};

struct RetrievedItem {
  PubId pub_id = 0;
  std::string title;
  std::optional<int> year;
  double score = 0.0;
  double dc = 0.0, bc = 0.0, cc = 0.0, ra = 0.0;
};

struct RetrievalResponse {
  Approach approach = Approach::DC_BC_CC_RA;
  std::size_t k = 0;
  std::uint64_t tie_seed = 0;
  std::size_t total_retrieved = 0;
  std::vector<PubId> seeds;
  std::vector<RetrievedItem> items;
};

inline RetrievalRequest parse_retrieval_request(const nlohmann::json& j) {
  if (!j.is_object()) throw RequestError(400, "request body must be a JSON object");
  RetrievalRequest r;
  try {
    if (!j.contains("seeds") || !j["seeds"].is_array())
      throw RequestError(422, "seeds must be a non-empty list of publication ids");
    for (const auto& s : j["seeds"]) {
      if (!s.is_number_integer()) throw RequestError(400, "seed ids must be integers");
      r.seeds.push_back(s.get<PubId>());
    }
    if (j.contains("approach")) {
      const auto name = j["approach"].get<std::string>();
      auto a = parse_approach(name);
      if (!a) throw RequestError(400, "unknown approach '" + name + "'");
      r.approach = *a;
    }
    if (j.contains("k")) {
      if (!j["k"].is_number_integer() || j["k"].get<std::int64_t>() < 1)
        throw RequestError(422, "k must be a positive integer");
      r.k = j["k"].get<std::size_t>();
    }
    if (j.contains("tie_seed")) r.tie_seed = j["tie_seed"].get<std::uint64_t>();
    if (j.contains("overrides")) {
      const auto& o = j["overrides"];
      auto& ov = r.overrides;
      if (o.contains("bc_min_score")) ov.bc_min_score = o["bc_min_score"].get<std::uint32_t>();
      if (o.contains("cc_min_score")) ov.cc_min_score = o["cc_min_score"].get<std::uint32_t>();
      if (o.contains("dc_divisor")) ov.dc_divisor = o["dc_divisor"].get<double>();
      if (o.contains("bc_divisor")) ov.bc_divisor = o["bc_divisor"].get<double>();
      if (o.contains("cc_divisor")) ov.cc_divisor = o["cc_divisor"].get<double>();
      if (o.contains("title_weight")) ov.title_weight = o["title_weight"].get<double>();
      if (o.contains("pool_per_seed")) ov.pool_per_seed = o["pool_per_seed"].get<std::size_t>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw RequestError(400, std::string("malformed request: ") + e.what());
  }
  return r;
}

inline EvalConfig apply_overrides(EvalConfig cfg, const RetrievalOverrides& o) {
  if (o.bc_min_score) cfg.bc_min_score = *o.bc_min_score;
  if (o.cc_min_score) cfg.cc_min_score = *o.cc_min_score;
  if (o.dc_divisor) cfg.weights.dc_divisor = *o.dc_divisor;
  if (o.bc_divisor) cfg.weights.bc_divisor = *o.bc_divisor;
  if (o.cc_divisor) cfg.weights.cc_divisor = *o.cc_divisor;
  if (o.title_weight) cfg.ra.title_weight = *o.title_weight;
  if (o.pool_per_seed) cfg.pool_per_seed = *o.pool_per_seed;
  return cfg;
}

/// Seed-based retrieval over a loaded corpus. Seeds are excluded from the
/// results; every item carries its raw DC, BC, CC and RA component scores.
inline RetrievalResponse retrieve(const Corpus& corpus, const RetrievalRequest& req, const EvalConfig& defaults = {},
                                  std::size_t max_seeds = kDefaultMaxSeeds) {
  if (req.seeds.empty()) throw RequestError(422, "seed list is empty");
  if (req.k < 1) throw RequestError(422, "k must be at least 1");

  std::vector<PubId> seed_ids = req.seeds;
  std::sort(seed_ids.begin(), seed_ids.end());
  seed_ids.erase(std::unique(seed_ids.begin(), seed_ids.end()), seed_ids.end());
  if (seed_ids.size() > max_seeds)
    throw RequestError(422, "at most " + std::to_string(max_seeds) + " seeds are allowed");

  const auto& g = corpus.graph;
  std::vector<NodeIndex> seeds;
  nlohmann::json unknown = nlohmann::json::array();
  for (PubId id : seed_ids) {
    if (auto v = g.find(id)) seeds.push_back(*v);
    else unknown.push_back(id);
  }
  if (!unknown.empty()) {
    std::string msg = "unknown seed id";
    msg += unknown.size() > 1 ? "s: " : ": ";
    for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? "," : "") + std::to_string(unknown[i].get<PubId>());
    throw RequestError(400, msg, {{"unknown_seeds", unknown}});
  }

  const auto cfg = apply_overrides(defaults, req.overrides);
  const auto excluded = make_exclusions(seeds);
  ScatterCounter scratch(g.node_count());
  const auto q = score_query(g, corpus.index, seeds, excluded, std::nullopt, cfg, kAllApproaches, scratch);
  const auto& map = q.get(req.approach);
  if (!map) {
    auto it = q.errors.find(req.approach);
    throw RequestError(422, it != q.errors.end() ? it->second : "approach could not be computed");
  }

  const auto ranked = rank(*map, req.tie_seed);
  RetrievalResponse resp;
  resp.approach = req.approach;
  resp.k = req.k;
  resp.tie_seed = req.tie_seed;
  resp.total_retrieved = ranked.items.size();
  resp.seeds = seed_ids;
  auto comp = [](const std::optional<ScoreMap>& m, NodeIndex v) { return m ? m->score_or_zero(v) : 0.0; };
  for (std::size_t i = 0; i < std::min(req.k, ranked.items.size()); ++i) {
    const auto& e = ranked.items[i];
    const auto& rec = g.record(e.node);
    resp.items.push_back({rec.pub_id, rec.title, rec.year, e.score, comp(q.dc, e.node), comp(q.bc, e.node),
                          comp(q.cc, e.node), comp(q.ra, e.node)});
  }
  return resp;
}

inline nlohmann::json to_json(const RetrievalResponse& r) {
  nlohmann::json items = nlohmann::json::array();
  for (std::size_t i = 0; i < r.items.size(); ++i) {
    const auto& it = r.items[i];
    items.push_back({{"rank", i + 1},
                     {"pub_id", it.pub_id},
                     {"title", it.title},
                     {"year", it.year ? nlohmann::json(*it.year) : nlohmann::json(nullptr)},
                     {"score", it.score},
                     {"components", {{"DC", it.dc}, {"BC", it.bc}, {"CC", it.cc}, {"RA", it.ra}}}});
  }
  return {{"approach", std::string(approach_name(r.approach))},
          {"k", r.k},
          {"tie_seed", r.tie_seed},
          {"seeds", r.seeds},
          {"total_retrieved", r.total_retrieved},
          {"items", items}};
}

inline nlohmann::json publication_json(const Corpus& corpus, NodeIndex v) {
  const auto& g = corpus.graph;
  const auto& r = g.record(v);
  return {{"pub_id", r.pub_id},
          {"year", r.year ? nlohmann::json(*r.year) : nlohmann::json(nullptr)},
          {"title", r.title},
          {"abstract", r.abstract ? nlohmann::json(*r.abstract) : nlohmann::json(nullptr)},
          {"headings", r.headings},
          {"references", g.references(v).size()},
          {"citers", g.citers(v).size()}};
}

inline nlohmann::json approaches_json(const EvalConfig& cfg) {
  nlohmann::json list = nlohmann::json::array();
  const char* desc[] = {
      "direct citation: seeds citing or cited by the candidate",
      "bibliographic coupling: references shared with the seeds",
      "co-citation: publications citing both the candidate and a seed",
      "lexical similarity of titles, abstracts and subject headings",
      "DC/dc_divisor + BC/bc_divisor + CC/cc_divisor",
      "DC_BC_CC plus RA rescaled to the DC_BC_CC score range",
  };
  for (Approach a : kAllApproaches)
    list.push_back({{"name", std::string(approach_name(a))}, {"description", desc[static_cast<int>(a)]}});
  return {{"approaches", list},
          {"default", "DC_BC_CC_RA"},
          {"defaults",
           {{"bc_min_score", cfg.bc_min_score},
            {"cc_min_score", cfg.cc_min_score},
            {"dc_divisor", cfg.weights.dc_divisor},
            {"bc_divisor", cfg.weights.bc_divisor},
            {"cc_divisor", cfg.weights.cc_divisor},
            {"title_weight", cfg.ra.title_weight},
            {"pool_per_seed", cfg.pool_per_seed}}}};
}

}  // namespace seedrel
