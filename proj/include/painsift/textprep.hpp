#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "painsift/error.hpp"
#include "painsift/resources.hpp"

namespace painsift {

using TokenList = std::vector<std::string>;

/// n-gram -> occurrence count. Ordered so iteration is deterministic.
using NgramBag = std::map<std::string, int>;

namespace detail {

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::vector<std::vector<std::string>> table_rows(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> row;
    for (std::string f; fields >> f;) row.push_back(f);
    if (!row.empty()) rows.push_back(std::move(row));
  }
  return rows;
}

inline bool is_vowel_at(std::string_view w, std::size_t i) {
  switch (w[i]) {
    case 'a': case 'e': case 'i': case 'o': case 'u': return true;
    case 'y': return i > 0 && !is_vowel_at(w, i - 1);
    default: return false;
  }
}

// Number of vowel-consonant sequences in [C](VC)^m[V].
inline int measure(std::string_view w) {
  int m = 0;
  std::size_t i = 0;
  while (i < w.size() && !is_vowel_at(w, i)) ++i;
  while (i < w.size()) {
    while (i < w.size() && is_vowel_at(w, i)) ++i;
    if (i == w.size()) break;
    while (i < w.size() && !is_vowel_at(w, i)) ++i;
    ++m;
  }
  return m;
}

inline bool has_vowel(std::string_view w) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (is_vowel_at(w, i)) return true;
  return false;
}

inline bool ends_cvc(std::string_view w) {
  const auto n = w.size();
  if (n < 3) return false;
  if (is_vowel_at(w, n - 1) || !is_vowel_at(w, n - 2) || is_vowel_at(w, n - 3)) return false;
  const char last = w[n - 1];
  return last != 'w' && last != 'x' && last != 'y';
}

inline bool ends_double_consonant(std::string_view w) {
  const auto n = w.size();
  return n >= 2 && w[n - 1] == w[n - 2] && !is_vowel_at(w, n - 1);
}

}  // namespace detail

/// Rule-driven suffix stripper; the rule format is documented in
/// data/stemmer_rules.txt.
class Stemmer {
 public:
  enum class Condition { Always, Vowel, M0, M1, M1ST, M1L, FinalE };

  struct Rule {
    int step = 0;
    std::string suffix;
    std::string replacement;
    Condition condition = Condition::Always;
    bool fix = false;
  };

  Stemmer() : Stemmer(resources::kStemmerRules) {}

  explicit Stemmer(std::string_view table) : text_(table) {
    for (const auto& row : detail::table_rows(table)) {
      if (row.size() < 4 || row.size() > 5) throw ConfigError("stemmer rule needs 4 or 5 columns: " + row[0]);
      Rule r;
      try {
        r.step = std::stoi(row[0]);
      } catch (const std::exception&) {
        throw ConfigError("stemmer rule has a non-numeric step '" + row[0] + "'");
      }
      r.suffix = row[1];
      r.replacement = row[2] == "-" ? "" : row[2];
      r.condition = parse_condition(row[3]);
      if (row.size() == 5) {
        if (row[4] != "fix") throw ConfigError("unknown stemmer post action '" + row[4] + "'");
        r.fix = true;
      }
      rules_.push_back(std::move(r));
    }
    std::stable_sort(rules_.begin(), rules_.end(), [](const Rule& a, const Rule& b) { return a.step < b.step; });
  }

  static Stemmer from_file(const std::string& path) { return Stemmer(detail::read_text_file(path)); }

  const std::string& text() const { return text_; }
  const std::vector<Rule>& rules() const { return rules_; }

  std::string stem(std::string_view token) const {
    std::string word(token);
    if (word.size() <= 2) return word;
    for (int pass = 0; pass < kMaxPasses; ++pass) {
      std::string next = apply_pass(word);
      if (next == word) break;
      word = std::move(next);
    }
    return word;
  }

 private:
  static constexpr int kMaxPasses = 16;

  static Condition parse_condition(const std::string& s) {
    if (s == "*") return Condition::Always;
    if (s == "v") return Condition::Vowel;
    if (s == "m>0") return Condition::M0;
    if (s == "m>1") return Condition::M1;
    if (s == "m>1,st") return Condition::M1ST;
    if (s == "m>1,l") return Condition::M1L;
    if (s == "e") return Condition::FinalE;
    throw ConfigError("unknown stemmer condition '" + s + "'");
  }

  static bool holds(Condition c, std::string_view stem) {
    switch (c) {
      case Condition::Always: return true;
      case Condition::Vowel: return detail::has_vowel(stem);
      case Condition::M0: return detail::measure(stem) > 0;
      case Condition::M1: return detail::measure(stem) > 1;
      case Condition::M1ST:
        return detail::measure(stem) > 1 && (stem.back() == 's' || stem.back() == 't');
      case Condition::M1L: return detail::measure(stem) > 1 && stem.back() == 'l';
      case Condition::FinalE: {
        const int m = detail::measure(stem);
        return m > 1 || (m == 1 && !detail::ends_cvc(stem));
      }
    }
    return false;
  }

  static void fix_up(std::string& w) {
    if (w.ends_with("at") || w.ends_with("bl") || w.ends_with("iz")) {
      w.push_back('e');
    } else if (detail::ends_double_consonant(w) && w.back() != 'l' && w.back() != 's' && w.back() != 'z') {
      w.pop_back();
    } else if (detail::measure(w) == 1 && detail::ends_cvc(w)) {
      w.push_back('e');
    }
  }

  std::string apply_pass(std::string word) const {
    std::size_t i = 0;
    while (i < rules_.size()) {
      const int step = rules_[i].step;
      std::size_t end = i;
      const Rule* best = nullptr;
      for (; end < rules_.size() && rules_[end].step == step; ++end) {
        const auto& r = rules_[end];
        if (word.size() > r.suffix.size() && word.ends_with(r.suffix) &&
            (!best || r.suffix.size() > best->suffix.size()))
          best = &r;
      }
      if (best) {
        const std::string_view stem(word.data(), word.size() - best->suffix.size());
        if (holds(best->condition, stem)) {
          word = std::string(stem) + best->replacement;
          if (best->fix) fix_up(word);
        }
      }
      i = end;
    }
    return word;
  }

  std::string text_;
  std::vector<Rule> rules_;
};

class StopwordList {
 public:
  StopwordList() : StopwordList(resources::kStopwords) {}

  explicit StopwordList(std::string_view text) : text_(text) {
    for (const auto& row : detail::table_rows(text))
      for (const auto& w : row) {
        if (w == "pain") throw ConfigError("'pain' may not be used as a stopword");
        words_.insert(w);
      }
  }

  static StopwordList from_file(const std::string& path) { return StopwordList(detail::read_text_file(path)); }

  bool contains(std::string_view w) const { return words_.contains(std::string(w)); }
  const std::set<std::string>& words() const { return words_; }
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::set<std::string> words_;
};

/// Splits text into maximal ASCII alphanumeric runs, lowercases them, keeps
/// "digits/digits" (pain scores) whole, drops stopwords and stems the rest.
class TextPreprocessor {
 public:
  TextPreprocessor() = default;
  TextPreprocessor(StopwordList stopwords, Stemmer stemmer)
      : stopwords_(std::move(stopwords)), stemmer_(std::move(stemmer)) {}

  const StopwordList& stopwords() const { return stopwords_; }
  const Stemmer& stemmer() const { return stemmer_; }

  TokenList tokenize(std::string_view text) const {
    TokenList out;
    for (auto& raw : split_raw(text)) {
      if (stopwords_.contains(raw)) continue;
      std::string tok = is_alpha(raw) ? stemmer_.stem(raw) : std::move(raw);
      if (tok.empty() || stopwords_.contains(tok)) continue;
      out.push_back(std::move(tok));
    }
    return out;
  }

 private:
  static bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  static bool is_alpha(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return c >= 'a' && c <= 'z'; });
  }

  static std::vector<std::string> split_raw(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    const auto n = text.size();
    auto run_end = [&](std::size_t from) {
      while (from < n && is_alnum(text[from])) ++from;
      return from;
    };
    auto all_digits = [&](std::size_t b, std::size_t e) {
      for (auto k = b; k < e; ++k)
        if (!is_digit(text[k])) return false;
      return e > b;
    };
    while (i < n) {
      if (!is_alnum(text[i])) {
        ++i;
        continue;
      }
      const auto start = i;
      auto end = run_end(i);
      if (all_digits(start, end) && end + 1 < n && text[end] == '/') {
        const auto tail_end = run_end(end + 1);
        if (all_digits(end + 1, tail_end)) end = tail_end;
      }
      std::string tok(text.substr(start, end - start));
      for (auto& c : tok) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      out.push_back(std::move(tok));
      i = end;
    }
    return out;
  }

  StopwordList stopwords_;
  Stemmer stemmer_;
};

inline const TextPreprocessor& default_preprocessor() {
  static const TextPreprocessor instance;
  return instance;
}

inline TokenList tokenize(std::string_view text) { return default_preprocessor().tokenize(text); }

inline std::string stem(std::string_view token) { return default_preprocessor().stemmer().stem(token); }

/// Sliding-window n-grams for every n in [n_min, n_max]; n-gram tokens are
/// joined by a single space.
inline NgramBag extract_ngrams(const TokenList& tokens, int n_min, int n_max) {
  if (n_min < 1 || n_min > n_max || n_max > 3)
    throw std::invalid_argument("n-gram range must satisfy 1 <= n_min <= n_max <= 3");
  NgramBag bag;
  for (int n = n_min; n <= n_max; ++n) {
    const auto un = static_cast<std::size_t>(n);
    for (std::size_t i = 0; i + un <= tokens.size(); ++i) {
      std::string key = tokens[i];
      for (std::size_t j = 1; j < un; ++j) {
        key.push_back(' ');
        key += tokens[i + j];
      }
      ++bag[key];
    }
  }
  return bag;
}

}  // namespace painsift
