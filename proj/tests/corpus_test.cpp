#include <gtest/gtest.h>

#include <map>
#include <sstream>

#include "support.hpp"

using namespace seedrel;
using namespace testsupport;

namespace {

PublicationRecord rec(PubId id, std::optional<int> year, std::string title = "t") {
  return {id, year, std::move(title), std::nullopt, {}};
}

}  // namespace

TEST(ParseCitations, TwoRows) {
  std::istringstream in("1,2\n1,3\n");
  const auto r = parse_citations(in, CitationFormat::occ_csv);
  EXPECT_EQ(r.pairs, (std::vector<CitationPair>{{1, 2}, {1, 3}}));
  EXPECT_EQ(r.report.malformed, 0u);
}

TEST(ParseCitations, HeaderOnly) {
  std::istringstream in("citing,referenced\n");
  const auto r = parse_citations(in, CitationFormat::occ_csv);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_EQ(r.report.data_rows, 0u);
}

TEST(ParseCitations, OneBadRowAmongThousand) {
  std::string text = "citing,referenced\n";
  for (int i = 0; i < 1000; ++i) text += std::to_string(i + 10) + "," + std::to_string(i + 5000) + "\n";
  text.insert(text.find('\n', 200) + 1, "x,2\n");
  // line-by-line recount
  std::istringstream scan(text);
  std::string line;
  std::size_t good = 0, bad = 0;
  std::getline(scan, line);
  while (std::getline(scan, line)) {
    const auto comma = line.find(',');
    const bool ok = comma != std::string::npos &&
                    line.find_first_not_of("0123456789") == comma &&
                    line.find_first_not_of("0123456789", comma + 1) == std::string::npos;
    (ok ? good : bad)++;
  }
  std::istringstream in(text);
  const auto r = parse_citations(in, CitationFormat::occ_csv);
  EXPECT_EQ(r.pairs.size(), good);
  EXPECT_EQ(r.report.malformed, bad);
  EXPECT_EQ(good, 1000u);
  EXPECT_EQ(bad, 1u);
  ASSERT_FALSE(r.report.samples.empty());
  EXPECT_NE(r.report.samples[0].find("line"), std::string::npos);
}

TEST(ParseCitations, MalformedFractionExceeded) {
  std::istringstream in("1,2\nfoo\nbar,baz\n3,4\n");
  EXPECT_THROW(parse_citations(in, CitationFormat::occ_csv), ParseError);
  std::istringstream again("1,2\nfoo\nbar,baz\n3,4\n");
  const auto r = parse_citations(again, CitationFormat::occ_csv, {0.6});
  EXPECT_EQ(r.pairs.size(), 2u);
}

TEST(ParseCitations, GenericTsvAndComments) {
  std::istringstream in("# comment\n5\t6\n\n 7 \t 8 \n");
  const auto r = parse_citations(in, CitationFormat::generic_tsv);
  EXPECT_EQ(r.pairs, (std::vector<CitationPair>{{5, 6}, {7, 8}}));
}

TEST(ParseCitations, UnreadableStream) {
  std::ifstream in("/nonexistent/path/citations.csv");
  EXPECT_THROW(parse_citations(in, CitationFormat::occ_csv), ParseError);
}

TEST(ParseMetadata, TsvWithHeaderAndHeadings) {
  std::istringstream in(
      "pub_id\tyear\ttitle\tabstract\theadings\n"
      "7\t2019\tA title\tSome text\tHumans|Vaccines\n"
      "3\t\tUndated\n");
  const auto r = parse_metadata(in, MetadataFormat::tsv);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].pub_id, 7);
  EXPECT_EQ(r.records[0].year, 2019);
  EXPECT_EQ(r.records[0].abstract, "Some text");
  EXPECT_EQ(r.records[0].headings, (std::vector<std::string>{"Humans", "Vaccines"}));
  EXPECT_FALSE(r.records[1].year);
  EXPECT_FALSE(r.records[1].abstract);
}

TEST(ParseMetadata, Jsonl) {
  std::istringstream in(
      R"({"pub_id": 1, "year": 2020, "title": "x", "headings": ["a", "b"]})"
      "\n"
      R"({"pub_id": 2, "title": "y", "abstract": "z", "headings": "c|d"})"
      "\n");
  const auto r = parse_metadata(in, MetadataFormat::jsonl);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].headings, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(r.records[1].headings, (std::vector<std::string>{"c", "d"}));
  EXPECT_EQ(r.records[1].abstract, "z");
}

TEST(ParseMetadata, DuplicatesAndBadYears) {
  std::string text;
  for (int i = 1; i <= 300; ++i) text += std::to_string(i) + "\t2015\tt" + std::to_string(i) + "\n";
  text += "5\t2016\tdup\n";
  text += "400\t1066\told\n";
  std::istringstream in(text);
  const auto r = parse_metadata(in, MetadataFormat::tsv);
  EXPECT_EQ(r.records.size(), 300u);
  EXPECT_EQ(r.report.malformed, 2u);
  const auto five = std::find_if(r.records.begin(), r.records.end(), [](auto& x) { return x.pub_id == 5; });
  EXPECT_EQ(five->title, "t5");
}

TEST(BuildGraph, DuplicatesAndSelfLoops) {
  const std::vector<CitationPair> pairs = {{1, 2}, {1, 2}, {2, 2}};
  const auto b = build_graph(pairs, {});
  EXPECT_EQ(b.graph.node_count(), 2u);
  EXPECT_EQ(b.graph.edge_count(), 1u);
  EXPECT_EQ(b.report.duplicates_dropped, 1u);
  EXPECT_EQ(b.report.self_loops_dropped, 1u);
}

TEST(BuildGraph, IsolatedRecords) {
  const auto b = build_graph({}, {rec(3, 2000), rec(1, 2001), rec(2, 2002)});
  EXPECT_EQ(b.graph.node_count(), 3u);
  EXPECT_EQ(b.graph.edge_count(), 0u);
  EXPECT_EQ(b.graph.pub_id(0), 1);
  EXPECT_EQ(b.graph.record(2).year, 2000);
}

TEST(BuildGraph, EmptyInput) {
  const auto b = build_graph({}, {});
  EXPECT_EQ(b.graph.node_count(), 0u);
  EXPECT_EQ(b.graph.edge_count(), 0u);
}

TEST(BuildGraph, MirrorInvariantOnRandomInput) {
  std::mt19937_64 rng(7);
  for (int round = 0; round < 10; ++round) {
    const auto rg = random_graph(rng, 200, 2000);
    const auto& g = rg.graph;
    std::size_t out_total = 0, in_total = 0;
    for (NodeIndex v = 0; v < g.node_count(); ++v) {
      const auto refs = g.references(v);
      const auto cit = g.citers(v);
      out_total += refs.size();
      in_total += cit.size();
      EXPECT_TRUE(std::is_sorted(refs.begin(), refs.end()));
      EXPECT_TRUE(std::adjacent_find(refs.begin(), refs.end()) == refs.end());
      EXPECT_TRUE(std::adjacent_find(cit.begin(), cit.end()) == cit.end());
      for (NodeIndex t : refs) {
        EXPECT_NE(t, v);
        EXPECT_TRUE(std::binary_search(g.citers(t).begin(), g.citers(t).end(), v));
        EXPECT_TRUE(rg.edges.count({g.pub_id(v), g.pub_id(t)}));
      }
      for (NodeIndex s : cit) EXPECT_TRUE(g.cites(s, v));
    }
    EXPECT_EQ(out_total, in_total);
    EXPECT_EQ(out_total, rg.edges.size());
  }
}

TEST(BuildGraph, OrderIndependent) {
  std::vector<CitationPair> pairs = {{5, 1}, {1, 9}, {9, 5}, {3, 1}};
  const auto a = build_graph(pairs, {rec(9, 2010), rec(1, 2011)});
  std::reverse(pairs.begin(), pairs.end());
  const auto b = build_graph(pairs, {rec(1, 2011), rec(9, 2010)});
  EXPECT_TRUE(a.graph == b.graph);
  EXPECT_EQ(fingerprint(a.graph), fingerprint(b.graph));
}

TEST(Snapshot, RoundTrip) {
  std::mt19937_64 rng(11);
  auto rg = random_graph(rng, 150, 1500);
  std::vector<PublicationRecord> recs = rg.graph.records();
  recs[3].abstract = "abstract\twith tab";
  recs[4].headings = {"H1", "H2"};
  recs[5].year.reset();
  std::vector<CitationPair> pairs;
  for (auto [a, b] : rg.edges) pairs.push_back({a, b});
  const auto g = build_graph(pairs, recs).graph;
  const auto dir = temp_dir("snapshot");
  save_snapshot(g, dir / "g.sdgr");
  const auto back = load_snapshot(dir / "g.sdgr");
  EXPECT_TRUE(back == g);
  EXPECT_EQ(fingerprint(back), fingerprint(g));
}

TEST(Snapshot, RejectsCorruptionAndVersion) {
  const std::vector<CitationPair> pairs = {{1, 2}, {2, 3}};
  const auto g = build_graph(pairs, {rec(1, 2010)}).graph;
  const auto dir = temp_dir("snapshot_bad");
  save_snapshot(g, dir / "g.sdgr");
  auto bytes = slurp(dir / "g.sdgr");

  auto write = [&](const std::string& name, std::string b) {
    std::ofstream(dir / name, std::ios::binary) << b;
    return dir / name;
  };
  auto v2 = bytes;
  v2[4] = 2;
  EXPECT_THROW(load_snapshot(write("v2.sdgr", v2)), SnapshotError);
  auto flipped = bytes;
  flipped[bytes.size() / 2] ^= 0x40;
  EXPECT_THROW(load_snapshot(write("flip.sdgr", flipped)), SnapshotError);
  EXPECT_THROW(load_snapshot(write("short.sdgr", bytes.substr(0, bytes.size() - 3))), SnapshotError);
  EXPECT_THROW(load_snapshot(write("magic.sdgr", "XXXX" + bytes.substr(4))), SnapshotError);
}

TEST(Snapshot, LoadCorpusFallsBackOnStaleCache) {
  const auto dir = temp_dir("snapshot_fallback");
  std::ofstream(dir / "citations.csv") << "citing,referenced\n1,2\n2,3\n";
  std::ofstream(dir / "metadata.tsv") << "1\t2020\tOne\n2\t2019\tTwo\n3\t2018\tThree\n";
  std::ofstream(dir / "graph.sdgr") << "garbage";
  const auto src = corpus_source_from_dir(dir);
  const auto c = load_corpus(src);
  EXPECT_FALSE(c.from_snapshot);
  EXPECT_FALSE(c.snapshot_note.empty());
  save_snapshot(c.graph, src.snapshot);
  const auto cached = load_corpus(src);
  EXPECT_TRUE(cached.from_snapshot);
  EXPECT_TRUE(cached.graph == c.graph);
  EXPECT_EQ(cached.index.term_count(), c.index.term_count());
}

namespace {

/// Review 1000 cites refs 1..n_in with year `in_year` plus `n_out` refs dated 2005.
void add_review(std::vector<PublicationRecord>& recs, std::vector<CitationPair>& pairs, PubId review, int year,
                const std::string& title, PubId first_ref, int n_in, int in_year, int n_out = 0) {
  recs.push_back(rec(review, year, title));
  for (int i = 0; i < n_in; ++i) {
    recs.push_back(rec(first_ref + i, in_year));
    pairs.push_back({review, first_ref + i});
  }
  for (int i = 0; i < n_out; ++i) {
    recs.push_back(rec(first_ref + n_in + i, 2005));
    pairs.push_back({review, first_ref + n_in + i});
  }
}

}  // namespace

TEST(SelectReviews, Boundaries) {
  std::vector<PublicationRecord> recs;
  std::vector<CitationPair> pairs;
  add_review(recs, pairs, 1, 2022, "A systematic review of X", 100, 30, 2015);
  add_review(recs, pairs, 2, 2022, "Systematic Review: Y", 200, 29, 2015, 10);
  add_review(recs, pairs, 3, 2022, "Systematic review of dated work", 300, 30, 2009);
  add_review(recs, pairs, 4, 2022, "A scoping review", 400, 40, 2015);
  add_review(recs, pairs, 5, 2021, "Systematic review, older", 500, 40, 2015);
  add_review(recs, pairs, 6, 2022, "systematic reviews in practice", 600, 31, 2021);
  add_review(recs, pairs, 7, 2022, "Systematic review at the edges", 700, 15, 2010, 0);
  for (int i = 0; i < 15; ++i) {
    recs.push_back(rec(800 + i, 2021));
    pairs.push_back({7, 800 + i});
  }
  const auto g = build_graph(pairs, recs).graph;
  const auto cases = select_reviews(g, {});
  std::vector<PubId> got;
  for (const auto& c : cases) got.push_back(g.pub_id(c.review));
  EXPECT_EQ(got, (std::vector<PubId>{1, 6, 7}));
  for (const auto& c : cases) {
    EXPECT_GE(c.eligible_refs.size(), 30u);
    EXPECT_FALSE(std::binary_search(c.eligible_refs.begin(), c.eligible_refs.end(), c.review));
    for (NodeIndex r : c.eligible_refs) {
      EXPECT_TRUE(g.cites(c.review, r));
      EXPECT_GE(*g.record(r).year, 2010);
      EXPECT_LE(*g.record(r).year, 2021);
    }
  }
}

TEST(SelectReviews, SampleIsDeterministic) {
  std::vector<PublicationRecord> recs;
  std::vector<CitationPair> pairs;
  for (int r = 0; r < 10; ++r) add_review(recs, pairs, 1 + r, 2022, "systematic review", 100 + 100 * r, 32, 2016);
  const auto g = build_graph(pairs, recs).graph;
  ReviewCriteria c;
  c.sample_size = 3;
  c.rng_seed = 99;
  const auto a = select_reviews(g, c);
  const auto b = select_reviews(g, c);
  ASSERT_EQ(a.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(a[i].review, b[i].review);
  c.rng_seed = 100;
  std::set<NodeIndex> seen;
  for (std::uint64_t s = 0; s < 30; ++s) {
    c.rng_seed = s;
    for (const auto& x : select_reviews(g, c)) seen.insert(x.review);
  }
  EXPECT_EQ(seen.size(), 10u);
}

TEST(SelectReviews, SampleBeforeFilter) {
  std::vector<PublicationRecord> recs;
  std::vector<CitationPair> pairs;
  for (int r = 0; r < 6; ++r) add_review(recs, pairs, 1 + r, 2022, "systematic review", 100 + 100 * r, r % 2 ? 32 : 5, 2016);
  const auto g = build_graph(pairs, recs).graph;
  ReviewCriteria c;
  c.sample_size = 3;
  c.sample_before_filter = false;
  EXPECT_EQ(select_reviews(g, c).size(), 3u);
  c.sample_before_filter = true;
  for (std::uint64_t s = 0; s < 20; ++s) {
    c.rng_seed = s;
    EXPECT_LE(select_reviews(g, c).size(), 3u);
  }
}

TEST(SampleSeeds, Exhaustive) {
  ReviewCase rc;
  rc.eligible_refs = {1, 2, 3, 4, 5};
  Rng rng(1);
  const auto out = sample_seeds(rc, 5, rng);
  EXPECT_EQ(out.seeds, rc.eligible_refs);
  EXPECT_TRUE(out.not_seeds.empty());
  EXPECT_THROW(sample_seeds(rc, 6, rng), InputError);
  EXPECT_THROW(sample_seeds(rc, 0, rng), InputError);
}

TEST(SampleSeeds, PartitionAndDeterminism) {
  ReviewCase rc;
  for (NodeIndex i = 0; i < 40; ++i) rc.eligible_refs.push_back(i * 3);
  Rng a(42), b(42);
  const auto x = sample_seeds(rc, 5, a);
  const auto y = sample_seeds(rc, 5, b);
  EXPECT_EQ(x.seeds, y.seeds);
  EXPECT_EQ(x.seeds.size(), 5u);
  std::vector<NodeIndex> all = x.seeds;
  all.insert(all.end(), x.not_seeds.begin(), x.not_seeds.end());
  std::sort(all.begin(), all.end());
  EXPECT_EQ(all, rc.eligible_refs);
}

TEST(SampleSeeds, UniformSingleSeed) {
  ReviewCase rc;
  rc.eligible_refs = {10, 20, 30};
  std::map<NodeIndex, int> count;
  Rng rng(2024);
  const int trials = 3000;
  for (int t = 0; t < trials; ++t) count[sample_seeds(rc, 1, rng).seeds[0]]++;
  for (NodeIndex v : rc.eligible_refs) EXPECT_NEAR(count[v] / double(trials), 1.0 / 3.0, 0.03) << v;
}

TEST(Common, PortableRandomness) {
  Rng standard;
  standard.discard(9999);
  EXPECT_EQ(standard(), 9981545732273789042ull);
  Rng rng(12345);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 5; ++i) draws.push_back(uniform_below(rng, 1000));
  Rng again(12345);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(uniform_below(again, 1000), draws[i]);
  EXPECT_EQ(stable_hash(1, 2), stable_hash(1, 2));
  EXPECT_NE(stable_hash(1, 2), stable_hash(2, 1));
  EXPECT_EQ(parse_approach("dc-bc-cc"), Approach::DC_BC_CC);
  EXPECT_EQ(parse_approach("cc"), Approach::CC);
  EXPECT_FALSE(parse_approach("xx"));
}
