#pragma once

// Porter suffix-stripping stemmer, original 1980 rule set (no later
// "logi"/"bli" departures). Input is expected to be lowercase.

#include <string>
#include <string_view>
#include <vector>

namespace lbd {
namespace porter_detail {

inline bool is_vowel_char(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// consonant[i] for every position; 'y' is a consonant at the start of a word
// or after a vowel.
inline std::vector<bool> consonant_flags(std::string_view w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_char(w[i])) {
      flags[i] = false;
    } else if (w[i] == 'y') {
      flags[i] = (i == 0) ? true : !flags[i - 1];
    } else {
      flags[i] = true;
    }
  }
  return flags;
}

inline bool is_consonant(std::string_view w, std::size_t i) { return consonant_flags(w)[i]; }

// Number of VC sequences in [C](VC){m}[V].
inline int measure(std::string_view stem) {
  auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i) {
    if (!flags[i - 1] && flags[i]) ++m;
  }
  return m;
}

inline bool contains_vowel(std::string_view stem) {
  for (bool c : consonant_flags(stem)) {
    if (!c) return true;
  }
  return false;
}

inline bool ends_double_consonant(std::string_view w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

// *o: ends consonant-vowel-consonant, last consonant not w, x or y.
inline bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  auto flags = consonant_flags(w);
  std::size_t n = w.size();
  char last = w[n - 1];
  return flags[n - 3] && !flags[n - 2] && flags[n - 1] && last != 'w' && last != 'x' &&
         last != 'y';
}

inline bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

enum class Cond { none, m_gt0, m_gt1, m_gt1_st };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Cond cond;
};

inline bool check(Cond cond, std::string_view stem) {
  switch (cond) {
    case Cond::none:
      return true;
    case Cond::m_gt0:
      return measure(stem) > 0;
    case Cond::m_gt1:
      return measure(stem) > 1;
    case Cond::m_gt1_st:
      return measure(stem) > 1 && !stem.empty() && (stem.back() == 's' || stem.back() == 't');
  }
  return false;
}

// The first rule whose suffix matches decides the outcome, whether or not its
// condition holds.
template <std::size_t N>
std::string apply_rules(const std::string& word, const Rule (&rules)[N]) {
  for (const Rule& r : rules) {
    if (ends_with(word, r.suffix)) {
      std::string_view stem(word.data(), word.size() - r.suffix.size());
      if (check(r.cond, stem)) return std::string(stem) + std::string(r.replacement);
      return word;
    }
  }
  return word;
}

inline std::string step1a(const std::string& w) {
  static constexpr Rule rules[] = {
      {"sses", "ss", Cond::none}, {"ies", "i", Cond::none}, {"ss", "ss", Cond::none}, {"s", "", Cond::none}};
  return apply_rules(w, rules);
}

inline std::string step1b(const std::string& w) {
  if (ends_with(w, "eed")) {
    std::string_view stem(w.data(), w.size() - 3);
    return measure(stem) > 0 ? std::string(stem) + "ee" : w;
  }
  std::string stem;
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      std::string_view candidate(w.data(), w.size() - suffix.size());
      if (contains_vowel(candidate)) {
        stem = std::string(candidate);
        removed = true;
        break;
      }
    }
  }
  if (!removed) return w;
  if (ends_with(stem, "at")) return stem + "e";
  if (ends_with(stem, "bl")) return stem + "e";
  if (ends_with(stem, "iz")) return stem + "e";
  if (ends_double_consonant(stem)) {
    char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') stem.pop_back();
    return stem;
  }
  if (measure(stem) == 1 && ends_cvc(stem)) return stem + "e";
  return stem;
}

inline std::string step1c(const std::string& w) {
  if (ends_with(w, "y")) {
    std::string_view stem(w.data(), w.size() - 1);
    if (contains_vowel(stem)) return std::string(stem) + "i";
  }
  return w;
}

inline std::string step2(const std::string& w) {
  static constexpr Rule rules[] = {
      {"ational", "ate", Cond::m_gt0}, {"tional", "tion", Cond::m_gt0},
      {"enci", "ence", Cond::m_gt0},   {"anci", "ance", Cond::m_gt0},
      {"izer", "ize", Cond::m_gt0},    {"abli", "able", Cond::m_gt0},
      {"alli", "al", Cond::m_gt0},     {"entli", "ent", Cond::m_gt0},
      {"eli", "e", Cond::m_gt0},       {"ousli", "ous", Cond::m_gt0},
      {"ization", "ize", Cond::m_gt0}, {"ation", "ate", Cond::m_gt0},
      {"ator", "ate", Cond::m_gt0},    {"alism", "al", Cond::m_gt0},
      {"iveness", "ive", Cond::m_gt0}, {"fulness", "ful", Cond::m_gt0},
      {"ousness", "ous", Cond::m_gt0}, {"aliti", "al", Cond::m_gt0},
      {"iviti", "ive", Cond::m_gt0},   {"biliti", "ble", Cond::m_gt0},
  };
  return apply_rules(w, rules);
}

inline std::string step3(const std::string& w) {
  static constexpr Rule rules[] = {
      {"icate", "ic", Cond::m_gt0}, {"ative", "", Cond::m_gt0}, {"alize", "al", Cond::m_gt0},
      {"iciti", "ic", Cond::m_gt0}, {"ical", "ic", Cond::m_gt0}, {"ful", "", Cond::m_gt0},
      {"ness", "", Cond::m_gt0},
  };
  return apply_rules(w, rules);
}

inline std::string step4(const std::string& w) {
  static constexpr Rule rules[] = {
      {"al", "", Cond::m_gt1},    {"ance", "", Cond::m_gt1}, {"ence", "", Cond::m_gt1},
      {"er", "", Cond::m_gt1},    {"ic", "", Cond::m_gt1},   {"able", "", Cond::m_gt1},
      {"ible", "", Cond::m_gt1},  {"ant", "", Cond::m_gt1},  {"ement", "", Cond::m_gt1},
      {"ment", "", Cond::m_gt1},  {"ent", "", Cond::m_gt1},  {"ion", "", Cond::m_gt1_st},
      {"ou", "", Cond::m_gt1},    {"ism", "", Cond::m_gt1},  {"ate", "", Cond::m_gt1},
      {"iti", "", Cond::m_gt1},   {"ous", "", Cond::m_gt1},  {"ive", "", Cond::m_gt1},
      {"ize", "", Cond::m_gt1},
  };
  return apply_rules(w, rules);
}

inline std::string step5a(const std::string& w) {
  if (ends_with(w, "e")) {
    std::string_view stem(w.data(), w.size() - 1);
    int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) return std::string(stem);
  }
  return w;
}

inline std::string step5b(const std::string& w) {
  if (ends_with(w, "ll") && measure(std::string_view(w.data(), w.size() - 1)) > 1) {
    return w.substr(0, w.size() - 1);
  }
  return w;
}

}  // namespace porter_detail

// One pass of the Porter algorithm.
inline std::string porter_stem(std::string_view word) {
  using namespace porter_detail;
  std::string w(word);
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace lbd
