#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"

namespace seedrel::synthetic {

/// Topic-clustered publication corpus with planted systematic reviews.
struct CorpusSpec {
  std::size_t publications = 5000;  // total, including reviews and decoys
  std::size_t topics = 25;
  std::size_t reviews = 20;
  std::size_t refs_min = 4;
  std::size_t refs_max = 28;
  double in_topic = 0.8;
  std::size_t review_refs_min = 34;
  std::size_t review_refs_max = 70;
  int year_min = 2005;
  int year_max = 2021;
  std::size_t phantom_ids = 150;  // cited ids with no metadata row
  std::uint64_t seed = 1;
};

struct GeneratedCorpus {
  std::vector<PublicationRecord> records;
  std::vector<CitationPair> pairs;
  std::vector<PubId> planted_reviews;
};

namespace detail {

inline std::string make_word(Rng& rng) {
  static constexpr const char* onset[] = {"b", "c", "d", "f", "g", "h", "k", "l", "m", "n", "p", "r",
                                          "s", "t", "v", "z", "br", "cl", "dr", "gr", "pl", "st", "tr"};
  static constexpr const char* nucleus[] = {"a", "e", "i", "o", "u", "ae", "io", "ou"};
  static constexpr const char* coda[] = {"", "n", "r", "s", "l", "x", "m", "t"};
  std::string w;
  const auto syll = 2 + uniform_below(rng, 2);
  for (std::uint64_t s = 0; s < syll; ++s) {
    w += onset[uniform_below(rng, std::size(onset))];
    w += nucleus[uniform_below(rng, std::size(nucleus))];
  }
  w += coda[uniform_below(rng, std::size(coda))];
  return w;
}

inline std::vector<std::string> make_vocab(Rng& rng, std::size_t n) {
  std::vector<std::string> v;
  std::unordered_set<std::string> seen;
  while (v.size() < n) {
    auto w = make_word(rng);
    if (seen.insert(w).second) v.push_back(std::move(w));
  }
  return v;
}

inline std::string phrase(Rng& rng, const std::vector<std::string>& topic, const std::vector<std::string>& common,
                          std::size_t words, double topic_share) {
  std::string out;
  for (std::size_t i = 0; i < words; ++i) {
    const bool from_topic = static_cast<double>(uniform_below(rng, 1000)) < topic_share * 1000.0;
    const auto& pool = from_topic ? topic : common;
    if (i) out += ' ';
    out += pool[uniform_below(rng, pool.size())];
  }
  return out;
}

}  // namespace detail

inline GeneratedCorpus generate_corpus(const CorpusSpec& spec) {
  Rng rng(spec.seed);
  GeneratedCorpus out;
  const auto common = detail::make_vocab(rng, 300);
  std::vector<std::vector<std::string>> topic_vocab;
  for (std::size_t t = 0; t < spec.topics; ++t) topic_vocab.push_back(detail::make_vocab(rng, 40));

  // decoys: reviews that must not qualify
  struct Planned {
    int year;
    std::string title_prefix;
    std::size_t refs;
    bool in_window;
  };
  std::vector<Planned> specials;
  for (std::size_t i = 0; i < spec.reviews; ++i) {
    const auto refs = spec.review_refs_min + uniform_below(rng, spec.review_refs_max - spec.review_refs_min + 1);
    specials.push_back({2022, i % 2 ? "A systematic review of" : "Systematic Review and meta-analysis:", refs, true});
  }
  specials.push_back({2022, "Systematic review of", 20, true});         // too few references
  specials.push_back({2022, "Systematic review of", 29, true});         // one short
  specials.push_back({2022, "Systematic review of", 40, false});        // refs outside the window
  specials.push_back({2022, "A narrative review of", 45, true});        // title does not match
  specials.push_back({2021, "Systematic review of", 45, true});         // wrong year

  const std::size_t regular = spec.publications - specials.size();
  struct Pub {
    PubId id;
    int year;
    std::size_t topic;
  };
  std::vector<Pub> pubs;
  pubs.reserve(spec.publications);
  for (std::size_t i = 0; i < regular; ++i) {
    // skew toward recent years
    const auto span = static_cast<std::uint64_t>(spec.year_max - spec.year_min + 1);
    const auto a = uniform_below(rng, span), b = uniform_below(rng, span);
    const int year = spec.year_min + static_cast<int>(std::max(a, b));
    pubs.push_back({static_cast<PubId>(20000000 + i * 3 + uniform_below(rng, 3)), year,
                    static_cast<std::size_t>(uniform_below(rng, spec.topics))});
  }
  std::sort(pubs.begin(), pubs.end(), [](const Pub& x, const Pub& y) {
    return x.year != y.year ? x.year < y.year : x.id < y.id;
  });

  std::vector<std::vector<std::size_t>> by_topic(spec.topics);
  std::vector<std::size_t> popular;  // one slot per received citation
  std::vector<PubId> phantoms;
  for (std::size_t i = 0; i < spec.phantom_ids; ++i) phantoms.push_back(90000000 + static_cast<PubId>(i));

  for (std::size_t i = 0; i < pubs.size(); ++i) {
    const auto& p = pubs[i];
    auto& mine = by_topic[p.topic];
    if (!mine.empty() || !popular.empty()) {
      const auto n_refs = spec.refs_min + uniform_below(rng, spec.refs_max - spec.refs_min + 1);
      for (std::uint64_t r = 0; r < n_refs; ++r) {
        std::size_t target;
        const auto roll = uniform_below(rng, 1000);
        if (roll < 15) {
          out.pairs.push_back({p.id, phantoms[uniform_below(rng, phantoms.size())]});
          continue;
        }
        if (!mine.empty() && static_cast<double>(roll) < spec.in_topic * 1000.0) {
          // recent same-topic work is cited more
          const auto k = mine.size();
          const auto back = std::min<std::uint64_t>(k - 1, uniform_below(rng, k) * uniform_below(rng, k) / k);
          target = mine[k - 1 - back];
        } else if (!popular.empty()) {
          target = popular[uniform_below(rng, popular.size())];
        } else {
          continue;
        }
        out.pairs.push_back({p.id, pubs[target].id});
        popular.push_back(target);
      }
    }
    mine.push_back(i);
  }

  for (const auto& p : pubs) {
    PublicationRecord rec;
    rec.pub_id = p.id;
    rec.year = p.year;
    const auto& tv = topic_vocab[p.topic];
    rec.title = detail::phrase(rng, tv, common, 5 + uniform_below(rng, 6), 0.7);
    rec.title[0] = static_cast<char>(rec.title[0] - 'a' + 'A');
    rec.abstract = detail::phrase(rng, tv, common, 30 + uniform_below(rng, 50), 0.45);
    for (std::uint64_t h = 0, nh = 1 + uniform_below(rng, 3); h < nh; ++h)
      rec.headings.push_back(tv[uniform_below(rng, tv.size())]);
    out.records.push_back(std::move(rec));
  }

  PubId next_review_id = 30000000;
  for (std::size_t s = 0; s < specials.size(); ++s) {
    const auto& sp = specials[s];
    const auto topic = static_cast<std::size_t>(uniform_below(rng, spec.topics));
    std::vector<std::size_t> pool;
    for (auto i : by_topic[topic]) {
      const bool inside = pubs[i].year >= 2010 && pubs[i].year <= 2021;
      if (inside == sp.in_window) pool.push_back(i);
    }
    if (pool.size() < sp.refs)
      for (std::size_t i = 0; i < pubs.size() && pool.size() < sp.refs * 2; ++i)
        if ((pubs[i].year >= 2010) == sp.in_window && pubs[i].topic != topic) pool.push_back(i);
    const auto chosen = sample_without_replacement(pool, std::min(sp.refs, pool.size()), rng);

    PublicationRecord rec;
    rec.pub_id = next_review_id;
    next_review_id += 11;
    rec.year = sp.year;
    rec.title = sp.title_prefix + " " + detail::phrase(rng, topic_vocab[topic], common, 4, 0.9);
    rec.abstract = detail::phrase(rng, topic_vocab[topic], common, 60, 0.5);
    for (auto i : chosen) out.pairs.push_back({rec.pub_id, pubs[i].id});
    // a few references outside the evaluation window and to unknown ids
    for (int extra = 0; extra < 3; ++extra) out.pairs.push_back({rec.pub_id, phantoms[uniform_below(rng, phantoms.size())]});
    if (s < spec.reviews) out.planted_reviews.push_back(rec.pub_id);
    out.records.push_back(std::move(rec));
  }
  return out;
}

inline void write_corpus(const GeneratedCorpus& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "citations.csv", std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + (dir / "citations.csv").string());
    out << "citing,referenced\n";
    for (const auto& p : c.pairs) out << p.citing << ',' << p.cited << '\n';
  }
  {
    std::ofstream out(dir / "metadata.tsv", std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + (dir / "metadata.tsv").string());
    out << "pub_id\tyear\ttitle\tabstract\theadings\n";
    for (const auto& r : c.records) {
      out << r.pub_id << '\t' << (r.year ? std::to_string(*r.year) : "") << '\t' << r.title << '\t'
          << r.abstract.value_or("") << '\t';
      for (std::size_t i = 0; i < r.headings.size(); ++i) out << (i ? "|" : "") << r.headings[i];
      out << '\n';
    }
  }
}

/// Uniform citing node, heavy-tailed cited node; exactly `edges` distinct
/// non-loop pairs over `nodes` ids.
inline std::vector<CitationPair> random_citation_pairs(std::size_t nodes, std::size_t edges, std::uint64_t seed) {
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(edges * 2);
  std::vector<CitationPair> pairs;
  pairs.reserve(edges);
  while (pairs.size() < edges) {
    const auto a = uniform_below(rng, nodes);
    const double u = static_cast<double>(uniform_below(rng, 1u << 30)) / static_cast<double>(1u << 30);
    const auto b = static_cast<std::uint64_t>(static_cast<double>(nodes) * u * u * u);
    if (a == b || b >= nodes) continue;
    if (!seen.insert(a * nodes + b).second) continue;
    pairs.push_back({static_cast<PubId>(a + 1), static_cast<PubId>(b + 1)});
  }
  return pairs;
}

}  // namespace seedrel::synthetic
