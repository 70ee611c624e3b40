#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "painsift/error.hpp"
#include "painsift/textprep.hpp"

namespace painsift {

/// Ordered term list with a reverse index. Terms are unique.
class Vocabulary {
 public:
  Vocabulary() = default;

  explicit Vocabulary(std::vector<std::string> terms, std::vector<double> scores = {})
      : terms_(std::move(terms)), scores_(std::move(scores)) {
    if (!scores_.empty() && scores_.size() != terms_.size())
      throw std::invalid_argument("vocabulary scores must parallel terms");
    for (std::size_t i = 0; i < terms_.size(); ++i)
      if (!index_.emplace(terms_[i], i).second) throw DataError("duplicate vocabulary term '" + terms_[i] + "'");
  }

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t i) const { return terms_[i]; }

  /// Selection score of each term; empty when the vocabulary was not ranked.
  const std::vector<double>& scores() const { return scores_; }

  std::optional<std::size_t> find(const std::string& term) const {
    auto it = index_.find(term);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.terms_ == b.terms_ && a.scores_ == b.scores_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<double> scores_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Segment sizes of a feature vector: linguistic counts then topic proportions.
struct FeatureLayout {
  std::size_t linguistic = 0;
  std::size_t topical = 0;

  std::size_t size() const { return linguistic + topical; }
  friend bool operator==(const FeatureLayout&, const FeatureLayout&) = default;
};

struct FeatureVector {
  std::vector<double> values;
  FeatureLayout layout;

  std::span<const double> linguistic() const { return std::span(values).first(layout.linguistic); }
  std::span<const double> topical() const { return std::span(values).subspan(layout.linguistic, layout.topical); }
};

/// 2x2 table of observed counts; rows are term present/absent, columns are
/// in-class/out-of-class.
using Contingency = std::array<std::array<std::int64_t, 2>, 2>;

/// Pearson chi-squared statistic without continuity correction. Tables with a
/// zero row or column total score 0.
inline double chi2_score(const Contingency& o) {
  for (const auto& row : o)
    for (auto v : row)
      if (v < 0) throw std::invalid_argument("contingency counts must be non-negative");
  const double r0 = static_cast<double>(o[0][0] + o[0][1]);
  const double r1 = static_cast<double>(o[1][0] + o[1][1]);
  const double c0 = static_cast<double>(o[0][0] + o[1][0]);
  const double c1 = static_cast<double>(o[0][1] + o[1][1]);
  const double n = r0 + r1;
  if (r0 == 0 || r1 == 0 || c0 == 0 || c1 == 0) return 0.0;
  const std::array<double, 2> rows{r0, r1};
  const std::array<double, 2> cols{c0, c1};
  double chi2 = 0.0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const double e = rows[i] * cols[j] / n;
      const double d = static_cast<double>(o[i][j]) - e;
      chi2 += d * d / e;
    }
  return chi2;
}

/// Per-term, per-class document frequencies over a labelled bag collection.
struct DocumentFrequencies {
  std::vector<std::size_t> class_sizes;                     // notes per class
  std::map<std::string, std::vector<std::size_t>> per_term;  // term -> df per class

  DocumentFrequencies(std::span<const NgramBag> bags, std::span<const int> labels, int num_classes) {
    if (bags.size() != labels.size()) throw std::invalid_argument("bags and labels differ in length");
    class_sizes.assign(static_cast<std::size_t>(num_classes), 0);
    for (std::size_t i = 0; i < bags.size(); ++i) {
      const auto c = static_cast<std::size_t>(labels[i]);
      if (labels[i] < 0 || c >= class_sizes.size()) throw std::invalid_argument("label out of range");
      ++class_sizes[c];
      for (const auto& [term, count] : bags[i]) {
        auto& df = per_term[term];
        if (df.empty()) df.assign(class_sizes.size(), 0);
        ++df[c];
      }
    }
  }

  /// Max over classes of the one-vs-rest chi-squared score.
  double chi2(const std::vector<std::size_t>& df) const {
    std::size_t total = 0, total_df = 0;
    for (std::size_t c = 0; c < df.size(); ++c) {
      total += class_sizes[c];
      total_df += df[c];
    }
    double best = 0.0;
    for (std::size_t c = 0; c < df.size(); ++c) {
      if (class_sizes[c] == 0) continue;
      const auto in_present = static_cast<std::int64_t>(df[c]);
      const auto in_absent = static_cast<std::int64_t>(class_sizes[c] - df[c]);
      const auto out_present = static_cast<std::int64_t>(total_df - df[c]);
      const auto out_absent = static_cast<std::int64_t>(total - class_sizes[c]) - out_present;
      best = std::max(best, chi2_score({{{in_present, out_present}, {in_absent, out_absent}}}));
    }
    return best;
  }
};

/// The k terms most associated with the labels, by presence-based chi-squared
/// (descending, ties lexicographic). Returns every term when k exceeds the
/// number of distinct terms.
inline Vocabulary select_top_k(std::span<const NgramBag> bags, std::span<const int> labels, int num_classes,
                               std::size_t k) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  const DocumentFrequencies dfs(bags, labels, num_classes);
  std::vector<std::pair<std::string, double>> scored;
  scored.reserve(dfs.per_term.size());
  for (const auto& [term, df] : dfs.per_term) scored.emplace_back(term, dfs.chi2(df));
  auto better = [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  const auto keep = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep), scored.end(), better);
  scored.resize(keep);
  std::vector<std::string> terms;
  std::vector<double> scores;
  for (auto& [t, s] : scored) {
    terms.push_back(std::move(t));
    scores.push_back(s);
  }
  return Vocabulary(std::move(terms), std::move(scores));
}

struct NgramReportRow {
  std::string term;
  int exclusive_class = -1;  // -1 when shared by two or more classes
  double chi2 = 0.0;
  std::vector<std::size_t> doc_freq;
};

/// Partition of the active vocabulary into per-class exclusive sets and the
/// shared set.
struct NgramClassReport {
  std::vector<std::set<std::string>> exclusive;
  std::set<std::string> shared;
  std::vector<NgramReportRow> rows;  // descending chi2, ties lexicographic
};

inline NgramClassReport ngram_class_report(std::span<const NgramBag> bags, std::span<const int> labels,
                                           int num_classes) {
  const DocumentFrequencies dfs(bags, labels, num_classes);
  NgramClassReport report;
  report.exclusive.resize(static_cast<std::size_t>(num_classes));
  for (const auto& [term, df] : dfs.per_term) {
    NgramReportRow row{term, -1, dfs.chi2(df), df};
    int present = 0;
    for (std::size_t c = 0; c < df.size(); ++c)
      if (df[c] > 0) {
        ++present;
        row.exclusive_class = static_cast<int>(c);
      }
    if (present == 1) {
      report.exclusive[static_cast<std::size_t>(row.exclusive_class)].insert(term);
    } else {
      row.exclusive_class = -1;
      report.shared.insert(term);
    }
    report.rows.push_back(std::move(row));
  }
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const NgramReportRow& a, const NgramReportRow& b) { return a.chi2 > b.chi2; });
  return report;
}

/// Count encoding of a bag against a vocabulary; out-of-vocabulary terms are
/// ignored.
inline FeatureVector vectorize(const NgramBag& bag, const Vocabulary& vocab) {
  if (vocab.empty()) throw std::invalid_argument("vocabulary is empty");
  FeatureVector v{std::vector<double>(vocab.size(), 0.0), {vocab.size(), 0}};
  for (const auto& [term, count] : bag)
    if (auto i = vocab.find(term)) v.values[*i] = count;
  return v;
}

inline FeatureVector topical_features(std::span<const double> theta) {
  return FeatureVector{std::vector<double>(theta.begin(), theta.end()), {0, theta.size()}};
}

/// Linguistic segment followed by topical segment.
inline FeatureVector concat_features(const FeatureVector& linguistic, const FeatureVector& topical) {
  if (linguistic.values.empty() || topical.values.empty())
    throw std::invalid_argument("cannot concatenate an empty feature vector");
  FeatureVector out;
  out.values = linguistic.values;
  out.values.insert(out.values.end(), topical.values.begin(), topical.values.end());
  out.layout = {linguistic.values.size(), topical.values.size()};
  return out;
}

}  // namespace painsift
