#include <gtest/gtest.h>

#include "support.hpp"

using namespace seedrel;
using namespace testsupport;

namespace {

CorpusGraph graph_of(const std::vector<CitationPair>& pairs) { return build_graph(pairs, {}).graph; }

NodeIndex node(const CorpusGraph& g, PubId id) { return *g.find(id); }

}  // namespace

TEST(DirectCitation, CountsBothDirections) {
  // 10 = p; seeds 1 and 2 cite p; p cites 3 and 3 cites p
  const auto g = graph_of({{1, 10}, {2, 10}, {10, 3}, {3, 10}, {4, 5}});
  const std::vector<NodeIndex> seeds = {node(g, 1), node(g, 2), node(g, 3)};
  const auto ex = make_exclusions(seeds);
  const auto m = dc_scores(g, seeds, ex);
  EXPECT_EQ(m.score_or_zero(node(g, 10)), 4.0);
  EXPECT_FALSE(m.find(node(g, 4)));
  EXPECT_FALSE(m.find(node(g, 5)));

  const std::vector<NodeIndex> one = {node(g, 3)};
  const auto mutual = dc_scores(g, one, make_exclusions(one));
  EXPECT_EQ(mutual.score_or_zero(node(g, 10)), 2.0);
}

TEST(DirectCitation, SeedNotInGraph) {
  const auto g = graph_of({{1, 2}});
  const std::vector<NodeIndex> seeds = {7};
  EXPECT_THROW(dc_scores(g, seeds, make_exclusions(seeds)), InputError);
}

TEST(BibliographicCoupling, IntersectionAndCutoff) {
  // p = 1 cites a,b,c = 11,12,13; seed 2 cites b,c,d = 12,13,14; q = 3 cites only d
  const auto g = graph_of({{1, 11}, {1, 12}, {1, 13}, {2, 12}, {2, 13}, {2, 14}, {3, 14}});
  const std::vector<NodeIndex> seeds = {node(g, 2)};
  const auto ex = make_exclusions(seeds);
  const auto m = bc_scores(g, seeds, ex);
  EXPECT_EQ(m.score_or_zero(node(g, 1)), 2.0);
  EXPECT_FALSE(m.find(node(g, 3)));
  const auto loose = bc_scores(g, seeds, ex, 1);
  EXPECT_EQ(loose.score_or_zero(node(g, 3)), 1.0);
  EXPECT_EQ(coupling_strength(g, node(g, 1), node(g, 2)), 2u);
  EXPECT_THROW(bc_scores(g, seeds, ex, 0), InputError);
}

TEST(CoCitation, DisregardsReview) {
  // citers 20 and 21 cite both p=1 and seed s=2; review 30 cites p and s and q=3
  const auto g = graph_of({{20, 1}, {20, 2}, {21, 1}, {21, 2}, {30, 1}, {30, 2}, {30, 3}});
  const std::vector<NodeIndex> seeds = {node(g, 2)};
  const NodeIndex review = node(g, 30);
  const auto ex = make_exclusions(seeds, review);
  const auto m = cc_scores(g, seeds, ex, 2, review);
  EXPECT_EQ(m.score_or_zero(node(g, 1)), 2.0);
  EXPECT_FALSE(m.find(node(g, 3)));
  const auto any = cc_scores(g, seeds, ex, 1, std::nullopt);
  EXPECT_EQ(any.score_or_zero(node(g, 1)), 3.0);
  EXPECT_EQ(any.score_or_zero(node(g, 3)), 1.0);
  const auto only_review = cc_scores(g, seeds, ex, 1, review);
  EXPECT_FALSE(only_review.find(node(g, 3)));
  EXPECT_EQ(cocitation_strength(g, node(g, 1), node(g, 2), review), 2u);
}

TEST(Exclusions, SeedsAndReviewNeverScored) {
  const auto g = graph_of({{1, 2}, {2, 3}, {3, 1}, {4, 1}, {4, 2}, {4, 3}, {5, 1}, {5, 2}, {1, 6}, {2, 6}});
  const std::vector<NodeIndex> seeds = {node(g, 1), node(g, 2)};
  const auto ex = make_exclusions(seeds, node(g, 4));
  for (const auto& m : {dc_scores(g, seeds, ex), bc_scores(g, seeds, ex, 1), cc_scores(g, seeds, ex, 1, std::nullopt)})
    for (NodeIndex x : ex) EXPECT_FALSE(m.find(x));
}

TEST(Oracle, RandomGraphsMatchBruteForce) {
  std::mt19937_64 rng(20240601);
  ScatterCounter scratch;
  for (int round = 0; round < 40; ++round) {
    const auto rg = random_graph(rng, 150, 1500);
    const auto& g = rg.graph;
    const auto seed_ids = pick_seeds(rng, rg.n, 5);
    const PubId review_id = static_cast<PubId>(rg.n);
    const auto seeds = nodes_of(g, seed_ids);
    std::set<PubId> ex_ids(seed_ids.begin(), seed_ids.end());
    ex_ids.insert(review_id);
    const auto ex = make_exclusions(seeds, node(g, review_id));
    for (std::uint32_t cut : {1u, 2u, 3u}) {
      EXPECT_EQ(to_ids(g, bc_scores(g, seeds, ex, cut, scratch)), oracle_bc(rg, seed_ids, ex_ids, cut));
      EXPECT_EQ(to_ids(g, cc_scores(g, seeds, ex, cut, node(g, review_id), scratch)),
                oracle_cc(rg, seed_ids, ex_ids, cut, review_id));
      EXPECT_EQ(to_ids(g, cc_scores(g, seeds, ex, cut, std::nullopt, scratch)),
                oracle_cc(rg, seed_ids, ex_ids, cut, std::nullopt));
    }
    EXPECT_EQ(to_ids(g, dc_scores(g, seeds, ex, scratch)), oracle_dc(rg, seed_ids, ex_ids));
  }
}

TEST(Oracle, ScratchReuseIsClean) {
  std::mt19937_64 rng(5);
  const auto rg = random_graph(rng, 120, 900);
  const auto& g = rg.graph;
  const auto s1 = nodes_of(g, pick_seeds(rng, rg.n, 5));
  const auto s2 = nodes_of(g, pick_seeds(rng, rg.n, 5));
  ScatterCounter shared;
  const auto first = bc_scores(g, s1, make_exclusions(s1), 1, shared);
  bc_scores(g, s2, make_exclusions(s2), 1, shared);
  const auto again = bc_scores(g, s1, make_exclusions(s1), 1, shared);
  EXPECT_EQ(first.entries, again.entries);
}

TEST(Kernels, IntersectionSize) {
  const std::vector<NodeIndex> a = {1, 3, 5, 7, 9}, b = {2, 3, 4, 5, 9, 11};
  EXPECT_EQ(intersection_size(a, b), 3u);
  EXPECT_EQ(intersection_size(a, b, 5), 2u);
  EXPECT_EQ(intersection_size(a, {}), 0u);
}
