#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "seedrel/citescore.hpp"
#include "seedrel/common.hpp"
#include "seedrel/corpus.hpp"
#include "seedrel/stemmer.hpp"

namespace seedrel {

using TermId = std::uint32_t;

// ---------------------------------------------------------------------------
// Tokenization

inline constexpr std::string_view kStopwordListName = "seedrel-english-152";

/// English function words, matched against the lowercased token before
/// stemming. Sorted for binary search.
inline constexpr std::array<std::string_view, 152> kStopwords = {
    "a",       "about",   "above",   "after",   "again",   "against", "all",     "also",
    "am",      "among",   "an",      "and",     "any",     "are",     "as",      "at",
    "be",      "because", "been",    "before",  "being",   "below",   "between", "both",
    "but",     "by",      "can",     "could",   "did",     "do",      "does",    "doing",
    "down",    "during",  "each",    "either",  "else",    "ever",    "every",   "few",
    "for",     "from",    "further", "had",     "has",     "have",    "having",  "he",
    "her",     "here",    "hers",    "herself", "him",     "himself", "his",     "how",
    "however", "i",       "if",      "in",      "into",    "is",      "it",      "its",
    "itself",  "just",    "may",     "me",      "might",   "more",    "most",    "must",
    "my",      "myself",  "neither", "no",      "nor",     "not",     "now",     "of",
    "off",     "often",   "on",      "once",    "only",    "or",      "other",   "others",
    "ought",   "our",     "ours",    "ourselves", "out",   "over",    "own",     "per",
    "rather",  "same",    "shall",   "she",     "should",  "since",   "so",      "some",
    "such",    "than",    "that",    "the",     "their",   "theirs",  "them",    "themselves",
    "then",    "there",   "therefore", "these", "they",    "this",    "those",   "though",
    "through", "thus",    "to",      "too",     "under",   "until",   "up",      "upon",
    "us",      "very",    "via",     "was",     "we",      "were",    "what",    "when",
    "where",   "whether", "which",   "while",   "who",     "whom",    "whose",   "why",
    "will",    "with",    "within",  "without", "would",   "yet",     "you",     "your",
};

static_assert(std::is_sorted(kStopwords.begin(), kStopwords.end()));

inline bool is_stopword(std::string_view lower_token) {
  return std::binary_search(kStopwords.begin(), kStopwords.end(), lower_token);
}

/// A word is a maximal run of ASCII letters and digits containing at least
/// one letter; anything else separates words. Words are lowercased, stopwords
/// dropped, and the rest Porter-stemmed, preserving order.
inline std::vector<std::string> tokenize(std::string_view text) {
  static const PorterStemmer stem;
  std::vector<std::string> out;
  std::string word;
  bool has_letter = false;
  auto flush = [&] {
    if (!word.empty() && has_letter && !is_stopword(word)) out.push_back(stem(word));
    word.clear();
    has_letter = false;
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (c >= 'A' && c <= 'Z') {
      word.push_back(static_cast<char>(c - 'A' + 'a'));
      has_letter = true;
    } else if (c >= 'a' && c <= 'z') {
      word.push_back(static_cast<char>(c));
      has_letter = true;
    } else if (c >= '0' && c <= '9') {
      word.push_back(static_cast<char>(c));
    } else {
      flush();
    }
  }
  flush();
  return out;
}

// ---------------------------------------------------------------------------
// Term index

struct Posting {
  NodeIndex doc = 0;
  std::uint32_t title_tf = 0;
  std::uint32_t body_tf = 0;
};

struct DocTerm {
  TermId term = 0;
  std::uint32_t title_tf = 0;
  std::uint32_t body_tf = 0;
};

/// Inverted and forward term statistics over a document collection whose
/// documents are numbered like the graph nodes. Term ids follow
/// lexicographic order of the stemmed term.
class TermIndex {
 public:
  std::size_t doc_total() const { return doc_len_.size(); }
  std::size_t term_count() const { return terms_.size(); }

  const std::string& term(TermId t) const { return terms_[t]; }
  std::optional<TermId> find_term(std::string_view s) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), s);
    if (it == terms_.end() || *it != s) return std::nullopt;
    return static_cast<TermId>(it - terms_.begin());
  }

  std::uint32_t doc_freq(TermId t) const {
    return static_cast<std::uint32_t>(post_off_[t + 1] - post_off_[t]);
  }
  std::span<const Posting> postings(TermId t) const {
    return {postings_.data() + post_off_[t], postings_.data() + post_off_[t + 1]};
  }
  /// Terms of `d`, ascending term id.
  std::span<const DocTerm> doc_terms(NodeIndex d) const {
    return {forward_.data() + fwd_off_[d], forward_.data() + fwd_off_[d + 1]};
  }
  std::uint32_t doc_len(NodeIndex d) const { return doc_len_[d]; }
  /// Mean length over documents with at least one retained token.
  double avg_doc_len() const { return avg_doc_len_; }

  friend TermIndex build_index(std::span<const PublicationRecord> records);

 private:
  std::vector<std::string> terms_;
  std::vector<std::uint64_t> post_off_{0};
  std::vector<Posting> postings_;
  std::vector<std::uint64_t> fwd_off_{0};
  std::vector<DocTerm> forward_;
  std::vector<std::uint32_t> doc_len_;
  double avg_doc_len_ = 1.0;
};

/// Title tokens count as title_tf; abstract and heading tokens as body_tf.
inline TermIndex build_index(std::span<const PublicationRecord> records) {
  TermIndex idx;
  const auto n = records.size();

  // per-document (term string -> tf) maps, then a global vocabulary
  std::vector<std::map<std::string, std::pair<std::uint32_t, std::uint32_t>>> docs(n);
  std::vector<std::string> vocab;
  for (std::size_t d = 0; d < n; ++d) {
    const auto& r = records[d];
    for (auto& t : tokenize(r.title)) ++docs[d][std::move(t)].first;
    if (r.abstract)
      for (auto& t : tokenize(*r.abstract)) ++docs[d][std::move(t)].second;
    for (const auto& h : r.headings)
      for (auto& t : tokenize(h)) ++docs[d][std::move(t)].second;
    for (const auto& [t, tf] : docs[d]) vocab.push_back(t);
  }
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  idx.terms_ = std::move(vocab);

  std::unordered_map<std::string_view, TermId> ids;
  ids.reserve(idx.terms_.size());
  for (TermId t = 0; t < idx.terms_.size(); ++t) ids.emplace(idx.terms_[t], t);

  idx.doc_len_.assign(n, 0);
  idx.fwd_off_.assign(n + 1, 0);
  std::vector<std::uint64_t> df(idx.terms_.size() + 1, 0);
  std::uint64_t total_len = 0;
  std::size_t nonempty = 0;
  for (std::size_t d = 0; d < n; ++d) {
    std::uint32_t len = 0;
    // std::map iterates in string order, which is term-id order
    for (const auto& [t, tf] : docs[d]) {
      const TermId id = ids.at(t);
      idx.forward_.push_back({id, tf.first, tf.second});
      len += tf.first + tf.second;
      ++df[id + 1];
    }
    idx.fwd_off_[d + 1] = idx.forward_.size();
    idx.doc_len_[d] = len;
    total_len += len;
    if (len > 0) ++nonempty;
  }
  idx.avg_doc_len_ = nonempty ? static_cast<double>(total_len) / static_cast<double>(nonempty) : 1.0;

  for (std::size_t t = 0; t < idx.terms_.size(); ++t) df[t + 1] += df[t];
  idx.post_off_ = df;
  idx.postings_.resize(idx.forward_.size());
  std::vector<std::uint64_t> cursor(df.begin(), df.end() - 1);
  for (NodeIndex d = 0; d < n; ++d)
    for (const auto& dt : idx.doc_terms(d)) idx.postings_[cursor[dt.term]++] = {d, dt.title_tf, dt.body_tf};
  return idx;
}

// ---------------------------------------------------------------------------
// Weighting and scoring

struct RaParams {
  double title_weight = 2.0;
  double k1 = 1.2;
  double b = 0.75;
};

/// Saturating term frequency (title occurrences boosted) times an inverse
/// document frequency: tf' / (k1·((1−b) + b·len/avg) + tf') · ln((N+1)/(df+0.5)).
struct SaturatingTfIdf {
  RaParams params;

  static constexpr std::string_view kName = "saturating-tf-idf";

  double operator()(const TermIndex& idx, TermId t, std::uint32_t title_tf, std::uint32_t body_tf,
                    NodeIndex d) const {
    const double tf = static_cast<double>(title_tf) * params.title_weight + static_cast<double>(body_tf);
    const double norm =
        params.k1 * ((1.0 - params.b) + params.b * static_cast<double>(idx.doc_len(d)) / idx.avg_doc_len());
    const double idf = std::log((static_cast<double>(idx.doc_total()) + 1.0) /
                                (static_cast<double>(idx.doc_freq(t)) + 0.5));
    return tf / (norm + tf) * idf;
  }
};

inline void check_doc(const TermIndex& idx, NodeIndex d) {
  if (d >= idx.doc_total()) throw InputError("document " + std::to_string(d) + " is not indexed");
}

/// Σ over shared terms (ascending term id) of w(t,a)·w(t,b).
template <typename Weighting = SaturatingTfIdf>
double ra_pair_score(const TermIndex& idx, NodeIndex a, NodeIndex b, const Weighting& weight = {}) {
  check_doc(idx, a);
  check_doc(idx, b);
  const auto ta = idx.doc_terms(a);
  const auto tb = idx.doc_terms(b);
  double sum = 0.0;
  auto i = ta.begin(), j = tb.begin();
  while (i != ta.end() && j != tb.end()) {
    if (i->term < j->term) {
      ++i;
    } else if (j->term < i->term) {
      ++j;
    } else {
      sum += weight(idx, i->term, i->title_tf, i->body_tf, a) * weight(idx, j->term, j->title_tf, j->body_tf, b);
      ++i;
      ++j;
    }
  }
  return sum;
}

/// RA against a seed set. Each seed contributes its pool_per_seed most similar
/// non-excluded documents (ties by lower index); a pooled candidate's score is
/// Σ_s ra_pair_score(p, s) over all seeds.
template <typename Weighting = SaturatingTfIdf>
ScoreMap ra_scores(const TermIndex& idx, std::span<const NodeIndex> seeds, std::span<const NodeIndex> excluded,
                   std::size_t pool_per_seed = 2000, const Weighting& weight = {}) {
  for (NodeIndex s : seeds) check_doc(idx, s);
  const auto n = idx.doc_total();
  std::vector<double> acc(n, 0.0), total(n, 0.0);
  std::vector<NodeIndex> touched;
  std::vector<std::uint8_t> seen(n, 0), in_pool(n, 0);
  std::vector<NodeIndex> pool;

  for (NodeIndex s : seeds) {
    for (const auto& st : idx.doc_terms(s)) {
      const double ws = weight(idx, st.term, st.title_tf, st.body_tf, s);
      for (const auto& p : idx.postings(st.term)) {
        if (!seen[p.doc]) {
          seen[p.doc] = 1;
          touched.push_back(p.doc);
        }
        acc[p.doc] += weight(idx, st.term, p.title_tf, p.body_tf, p.doc) * ws;
      }
    }

    std::vector<NodeIndex> cand;
    cand.reserve(touched.size());
    for (NodeIndex d : touched)
      if (!std::binary_search(excluded.begin(), excluded.end(), d)) cand.push_back(d);
    auto better = [&](NodeIndex x, NodeIndex y) { return acc[x] != acc[y] ? acc[x] > acc[y] : x < y; };
    if (cand.size() > pool_per_seed) {
      std::nth_element(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(pool_per_seed), cand.end(), better);
      cand.resize(pool_per_seed);
    }
    for (NodeIndex d : cand)
      if (!in_pool[d]) {
        in_pool[d] = 1;
        pool.push_back(d);
      }

    for (NodeIndex d : touched) {
      total[d] += acc[d];
      acc[d] = 0.0;
      seen[d] = 0;
    }
    touched.clear();
  }

  ScoreMap map;
  map.approach = Approach::RA;
  map.excluded.assign(excluded.begin(), excluded.end());
  std::sort(pool.begin(), pool.end());
  for (NodeIndex d : pool)
    if (total[d] > 0.0) map.entries.push_back({d, total[d]});
  return map;
}

}  // namespace seedrel
