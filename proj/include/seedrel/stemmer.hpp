#pragma once

#include <string>
#include <string_view>
#include <utility>

namespace seedrel {

namespace detail {

class PorterWork {
 public:
  explicit PorterWork(std::string_view input) : w_(input) {}

  std::string run() && {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return std::move(w_);
  }

 private:
  // consonant test on the first `len` letters of w_
  bool cons(std::size_t i) const {
    switch (w_[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 ? true : !cons(i - 1);
      default: return true;
    }
  }

  /// m of the prefix w_[0, len)
  int measure(std::size_t len) const {
    int m = 0;
    bool prev_vowel = false;
    for (std::size_t i = 0; i < len; ++i) {
      const bool c = cons(i);
      if (c && prev_vowel) ++m;
      prev_vowel = !c;
    }
    return m;
  }

  bool has_vowel(std::size_t len) const {
    for (std::size_t i = 0; i < len; ++i)
      if (!cons(i)) return true;
    return false;
  }

  bool double_cons(std::size_t len) const {
    return len >= 2 && w_[len - 1] == w_[len - 2] && cons(len - 1);
  }

  /// *o: stem ends consonant-vowel-consonant, last not w, x or y.
  bool cvc(std::size_t len) const {
    if (len < 3) return false;
    if (!cons(len - 3) || cons(len - 2) || !cons(len - 1)) return false;
    const char c = w_[len - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends(std::string_view s) const {
    return w_.size() >= s.size() && std::string_view(w_).substr(w_.size() - s.size()) == s;
  }

  std::size_t stem_len(std::string_view suffix) const { return w_.size() - suffix.size(); }

  void replace(std::string_view suffix, std::string_view with) {
    w_.resize(stem_len(suffix));
    w_.append(with);
  }

  struct Rule {
    std::string_view suffix;
    std::string_view with;
  };

  /// First rule whose suffix matches decides; if its condition (m > min_m)
  /// fails the word is left alone.
  template <std::size_t N>
  void apply(const Rule (&rules)[N], int min_m) {
    for (const auto& r : rules) {
      if (!ends(r.suffix)) continue;
      if (measure(stem_len(r.suffix)) > min_m) replace(r.suffix, r.with);
      return;
    }
  }

  void step1a() {
    if (ends("sses")) replace("sses", "ss");
    else if (ends("ies")) replace("ies", "i");
    else if (ends("ss")) return;
    else if (ends("s")) replace("s", "");
  }

  void step1b() {
    if (ends("eed")) {
      if (measure(stem_len("eed")) > 0) replace("eed", "ee");
      return;
    }
    bool stripped = false;
    for (std::string_view suf : {std::string_view("ed"), std::string_view("ing")}) {
      if (ends(suf) && has_vowel(stem_len(suf))) {
        replace(suf, "");
        stripped = true;
        break;
      }
    }
    if (!stripped) return;
    if (ends("at")) replace("at", "ate");
    else if (ends("bl")) replace("bl", "ble");
    else if (ends("iz")) replace("iz", "ize");
    else if (double_cons(w_.size())) {
      const char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_.size()) == 1 && cvc(w_.size())) {
      w_.push_back('e');
    }
  }

  void step1c() {
    if (ends("y") && has_vowel(w_.size() - 1)) w_.back() = 'i';
  }

  void step2() {
    static constexpr Rule rules[] = {
        {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},
        {"izer", "ize"},    {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},
        {"eli", "e"},       {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
        {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"}, {"fulness", "ful"},
        {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},   {"biliti", "ble"},
    };
    apply(rules, 0);
  }

  void step3() {
    static constexpr Rule rules[] = {
        {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
        {"ical", "ic"},  {"ful", ""},   {"ness", ""},
    };
    apply(rules, 0);
  }

  void step4() {
    static constexpr std::string_view suffixes[] = {
        "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
        "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize"};
    for (auto s : suffixes) {
      if (!ends(s)) continue;
      const auto len = stem_len(s);
      bool ok = measure(len) > 1;
      if (ok && s == "ion") ok = len > 0 && (w_[len - 1] == 's' || w_[len - 1] == 't');
      if (ok) w_.resize(len);
      return;
    }
  }

  void step5a() {
    if (!ends("e")) return;
    const auto len = w_.size() - 1;
    const int m = measure(len);
    if (m > 1 || (m == 1 && !cvc(len))) w_.pop_back();
  }

  void step5b() {
    if (ends("ll") && measure(w_.size() - 1) > 1) w_.pop_back();
  }

  std::string w_;
};

}  // namespace detail

/// Porter (1980) suffix stripper, original published rule set: no
/// irregular-form table, step 2 uses ABLI -> ABLE and has no LOGI rule.
/// Input is expected lowercase ASCII.
struct PorterStemmer {
  static constexpr std::string_view kName = "porter-1980-original";

  std::string operator()(std::string_view word) const { return detail::PorterWork(word).run(); }
};

}  // namespace seedrel
