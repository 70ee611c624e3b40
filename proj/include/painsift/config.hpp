#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "painsift/error.hpp"
#include "painsift/labels.hpp"
#include "painsift/models/model.hpp"
#include "painsift/topics.hpp"

namespace painsift {

enum class FeatureSet { Linguistic, Topical, Combined };

inline std::string_view to_string(FeatureSet f) {
  switch (f) {
    case FeatureSet::Linguistic: return "linguistic";
    case FeatureSet::Topical: return "topical";
    case FeatureSet::Combined: return "combined";
  }
  return "?";
}

inline std::string_view display_name(FeatureSet f) {
  switch (f) {
    case FeatureSet::Linguistic: return "Linguistic";
    case FeatureSet::Topical: return "Topical";
    case FeatureSet::Combined: return "Linguistic + Topical";
  }
  return "?";
}

inline FeatureSet parse_feature_set(std::string_view s) {
  if (s == "linguistic") return FeatureSet::Linguistic;
  if (s == "topical") return FeatureSet::Topical;
  if (s == "combined") return FeatureSet::Combined;
  throw ConfigError("unknown feature set '" + std::string(s) + "' (expected linguistic|topical|combined)");
}

inline bool uses_linguistic(FeatureSet f) { return f != FeatureSet::Topical; }
inline bool uses_topics(FeatureSet f) { return f != FeatureSet::Linguistic; }

/// Offsets added to the master seed to obtain each stage's seed.
namespace seed_offset {
inline constexpr std::uint64_t kSplit = 1;
inline constexpr std::uint64_t kLda = 2;
inline constexpr std::uint64_t kInference = 3;
inline constexpr std::uint64_t kSmote = 4;
inline constexpr std::uint64_t kModel = 5;
}  // namespace seed_offset

struct PipelineConfig {
  Task task = Task::Relevance;
  FeatureSet features = FeatureSet::Combined;
  ModelKind model = ModelKind::Tree;

  std::string corpus;
  std::string corpus_format;  // empty: from the file extension
  double test_fraction = 0.2;
  std::uint64_t seed = 42;

  std::string stopwords;      // empty: built-in list
  std::string stemmer_rules;  // empty: built-in rules
  int ngram_min = 1;
  int ngram_max = 2;
  std::size_t chi2_k = 500;

  std::vector<std::size_t> lda_k_range = {2, 3, 4, 5, 6, 7, 8, 9, 10};
  AlphaRule lda_alpha = AlphaRule::scaled(50.0);
  double lda_beta = 0.01;
  std::size_t lda_iterations = 1000;
  std::size_t lda_inference_iterations = 100;
  std::size_t lda_top_m = 8;
  bool lda_on_full_corpus = false;

  bool smote = true;
  std::size_t smote_k = 5;

  ModelOptions model_options = default_model_options();

  std::size_t report_topics_k = 2;  // 0: choose by coherence
  std::size_t report_top_words = 8;
  std::size_t report_top_ngrams = 10;  // per class profile; 0: all

  std::string artifact_out;
  std::string report_out;

  std::uint64_t stage_seed(std::uint64_t offset) const { return seed + offset; }

  static ModelOptions default_model_options() {
    ModelOptions o;
    o.logreg = {0.1, 300, 1e-4};
    o.tree = {20, 2};
    o.forest = {100, {20, 2}, std::nullopt, true};
    o.ffnn = {64, 0.05, 200, 16};
    return o;
  }

  void validate() const;
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  /// Every key with its current value, in documentation order.
  std::vector<std::pair<std::string, std::string>> snapshot() const;

  /// Applies `key = value` lines; '#' starts a comment.
  void merge_text(std::string_view text, std::string_view origin = "config");
  void merge_file(const std::string& path);
};

namespace detail {

template <class T>
T parse_number(std::string_view key, std::string_view v) {
  T out{};
  const auto* end = v.data() + v.size();
  auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("invalid value '" + std::string(v) + "' for key '" + std::string(key) + "'");
  return out;
}

inline double parse_real(std::string_view key, std::string_view v) {
  try {
    std::size_t used = 0;
    const std::string s(v);
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + std::string(v) + "' for key '" + std::string(key) + "'");
  }
}

inline bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "on" || v == "true" || v == "yes" || v == "1") return true;
  if (v == "off" || v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("invalid boolean '" + std::string(v) + "' for key '" + std::string(key) + "' (use on|off)");
}

inline std::string format_real(double d) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", d);
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    char tmp[64];
    std::snprintf(tmp, sizeof tmp, "%.*g", prec, d);
    if (std::stod(tmp) == d) return tmp;
  }
  return buf;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

/// "a..b" or a comma-separated list; empty text gives an empty range.
inline std::vector<std::size_t> parse_k_range(std::string_view key, std::string_view v) {
  std::vector<std::size_t> out;
  const auto text = trim(v);
  if (text.empty()) return out;
  if (auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = parse_number<std::size_t>(key, trim(text.substr(0, dots)));
    const auto hi = parse_number<std::size_t>(key, trim(text.substr(dots + 2)));
    for (auto k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  std::istringstream in(text);
  for (std::string item; std::getline(in, item, ',');) out.push_back(parse_number<std::size_t>(key, trim(item)));
  return out;
}

inline std::string format_k_range(const std::vector<std::size_t>& r) {
  if (r.empty()) return {};
  bool contiguous = r.size() > 1;
  for (std::size_t i = 1; i < r.size(); ++i) contiguous = contiguous && r[i] == r[i - 1] + 1;
  if (contiguous) return std::to_string(r.front()) + ".." + std::to_string(r.back());
  std::string s;
  for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + std::to_string(r[i]);
  return s;
}

struct ConfigKey {
  const char* key;
  const char* doc;
  std::function<void(PipelineConfig&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const PipelineConfig&)> get;
};

inline std::string on_off(bool b) { return b ? "on" : "off"; }

inline const std::vector<ConfigKey>& config_keys() {
  using C = PipelineConfig;
  using SV = std::string_view;
  static const std::vector<ConfigKey> keys = {
      {"task", "relevance | change",
       [](C& c, SV, SV v) { c.task = parse_task(v); }, [](const C& c) { return std::string(to_string(c.task)); }},
      {"features", "linguistic | topical | combined",
       [](C& c, SV, SV v) { c.features = parse_feature_set(v); },
       [](const C& c) { return std::string(to_string(c.features)); }},
      {"model", "lr | dt | rf | ffnn",
       [](C& c, SV, SV v) { c.model = parse_model_kind(v); }, [](const C& c) { return std::string(to_string(c.model)); }},
      {"corpus", "path of the labelled corpus",
       [](C& c, SV, SV v) { c.corpus = v; }, [](const C& c) { return c.corpus; }},
      {"corpus_format", "jsonl | csv (empty: from the file extension)",
       [](C& c, SV, SV v) { c.corpus_format = v; }, [](const C& c) { return c.corpus_format; }},
      {"test_fraction", "held-out fraction per class, in (0,1)",
       [](C& c, SV k, SV v) { c.test_fraction = parse_real(k, v); },
       [](const C& c) { return format_real(c.test_fraction); }},
      {"seed", "master seed; stage seeds are seed+1 (split) .. seed+5 (model)",
       [](C& c, SV k, SV v) { c.seed = parse_number<std::uint64_t>(k, v); },
       [](const C& c) { return std::to_string(c.seed); }},
      {"stopwords", "stopword list file (empty: built-in)",
       [](C& c, SV, SV v) { c.stopwords = v; }, [](const C& c) { return c.stopwords; }},
      {"stemmer_rules", "stemmer rule table file (empty: built-in)",
       [](C& c, SV, SV v) { c.stemmer_rules = v; }, [](const C& c) { return c.stemmer_rules; }},
      {"ngram_min", "smallest n-gram length (1..3)",
       [](C& c, SV k, SV v) { c.ngram_min = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.ngram_min); }},
      {"ngram_max", "largest n-gram length (1..3)",
       [](C& c, SV k, SV v) { c.ngram_max = parse_number<int>(k, v); },
       [](const C& c) { return std::to_string(c.ngram_max); }},
      {"chi2_k", "number of n-grams kept by chi-squared selection",
       [](C& c, SV k, SV v) { c.chi2_k = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.chi2_k); }},
      {"lda_k_range", "candidate topic counts, 'a..b' or 'a,b,c'; one value fixes K",
       [](C& c, SV k, SV v) { c.lda_k_range = parse_k_range(k, v); },
       [](const C& c) { return format_k_range(c.lda_k_range); }},
      {"lda_alpha", "document-topic prior: '<x>/K' or a number",
       [](C& c, SV, SV v) { c.lda_alpha = AlphaRule::parse(v); }, [](const C& c) { return c.lda_alpha.str(); }},
      {"lda_beta", "topic-word prior",
       [](C& c, SV k, SV v) { c.lda_beta = parse_real(k, v); }, [](const C& c) { return format_real(c.lda_beta); }},
      {"lda_iterations", "Gibbs sweeps when training LDA",
       [](C& c, SV k, SV v) { c.lda_iterations = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.lda_iterations); }},
      {"lda_inference_iterations", "Gibbs sweeps when inferring a note's topic proportions",
       [](C& c, SV k, SV v) { c.lda_inference_iterations = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.lda_inference_iterations); }},
      {"lda_top_m", "top words per topic used for coherence",
       [](C& c, SV k, SV v) { c.lda_top_m = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.lda_top_m); }},
      {"lda_on_full_corpus", "on: fit LDA on train+test text (leaks test text); off: train split only",
       [](C& c, SV k, SV v) { c.lda_on_full_corpus = parse_bool(k, v); },
       [](const C& c) { return on_off(c.lda_on_full_corpus); }},
      {"smote", "on | off: SMOTE rebalancing of the training split",
       [](C& c, SV k, SV v) { c.smote = parse_bool(k, v); }, [](const C& c) { return on_off(c.smote); }},
      {"smote_k", "SMOTE neighbour count",
       [](C& c, SV k, SV v) { c.smote_k = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.smote_k); }},
      {"lr_learning_rate", "logistic regression step size",
       [](C& c, SV k, SV v) { c.model_options.logreg.learning_rate = parse_real(k, v); },
       [](const C& c) { return format_real(c.model_options.logreg.learning_rate); }},
      {"lr_epochs", "logistic regression full-batch epochs",
       [](C& c, SV k, SV v) { c.model_options.logreg.epochs = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.logreg.epochs); }},
      {"lr_l2", "logistic regression L2 penalty",
       [](C& c, SV k, SV v) { c.model_options.logreg.l2 = parse_real(k, v); },
       [](const C& c) { return format_real(c.model_options.logreg.l2); }},
      {"dt_max_depth", "decision tree depth limit (0: unlimited)",
       [](C& c, SV k, SV v) { c.model_options.tree.max_depth = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.tree.max_depth); }},
      {"dt_min_leaf", "decision tree minimum samples per leaf",
       [](C& c, SV k, SV v) { c.model_options.tree.min_leaf = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.tree.min_leaf); }},
      {"rf_trees", "random forest size",
       [](C& c, SV k, SV v) { c.model_options.forest.n_trees = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.forest.n_trees); }},
      {"rf_max_depth", "forest tree depth limit (0: unlimited)",
       [](C& c, SV k, SV v) { c.model_options.forest.tree.max_depth = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.forest.tree.max_depth); }},
      {"rf_min_leaf", "forest minimum samples per leaf",
       [](C& c, SV k, SV v) { c.model_options.forest.tree.min_leaf = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.forest.tree.min_leaf); }},
      {"rf_feature_fraction", "features tried per split: 'sqrt' or a fraction in (0,1]",
       [](C& c, SV k, SV v) {
         if (v == "sqrt")
           c.model_options.forest.feature_fraction.reset();
         else
           c.model_options.forest.feature_fraction = parse_real(k, v);
       },
       [](const C& c) {
         const auto& f = c.model_options.forest.feature_fraction;
         return f ? format_real(*f) : std::string("sqrt");
       }},
      {"rf_bootstrap", "on | off: bootstrap resampling per tree",
       [](C& c, SV k, SV v) { c.model_options.forest.bootstrap = parse_bool(k, v); },
       [](const C& c) { return on_off(c.model_options.forest.bootstrap); }},
      {"ffnn_hidden", "FFNN hidden units",
       [](C& c, SV k, SV v) { c.model_options.ffnn.hidden = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.ffnn.hidden); }},
      {"ffnn_learning_rate", "FFNN step size",
       [](C& c, SV k, SV v) { c.model_options.ffnn.learning_rate = parse_real(k, v); },
       [](const C& c) { return format_real(c.model_options.ffnn.learning_rate); }},
      {"ffnn_epochs", "FFNN epochs",
       [](C& c, SV k, SV v) { c.model_options.ffnn.epochs = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.ffnn.epochs); }},
      {"ffnn_batch_size", "FFNN mini-batch size",
       [](C& c, SV k, SV v) { c.model_options.ffnn.batch_size = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.model_options.ffnn.batch_size); }},
      {"report_topics_k", "topics per class in the topic report (0: choose by coherence)",
       [](C& c, SV k, SV v) { c.report_topics_k = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.report_topics_k); }},
      {"report_top_words", "words listed per topic in the topic report",
       [](C& c, SV k, SV v) { c.report_top_words = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.report_top_words); }},
      {"report_top_ngrams", "n-grams listed per class profile in the n-gram report (0: all)",
       [](C& c, SV k, SV v) { c.report_top_ngrams = parse_number<std::size_t>(k, v); },
       [](const C& c) { return std::to_string(c.report_top_ngrams); }},
      {"out", "artifact output path",
       [](C& c, SV, SV v) { c.artifact_out = v; }, [](const C& c) { return c.artifact_out; }},
      {"report", "evaluation report output path",
       [](C& c, SV, SV v) { c.report_out = v; }, [](const C& c) { return c.report_out; }},
  };
  return keys;
}

inline const ConfigKey& find_key(std::string_view key) {
  for (const auto& k : config_keys())
    if (key == k.key) return k;
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace detail

inline void PipelineConfig::set(std::string_view key, std::string_view value) {
  detail::find_key(key).set(*this, key, detail::trim(value));
}

inline std::string PipelineConfig::get(std::string_view key) const { return detail::find_key(key).get(*this); }

inline std::vector<std::pair<std::string, std::string>> PipelineConfig::snapshot() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& k : detail::config_keys()) out.emplace_back(k.key, k.get(*this));
  return out;
}

inline void PipelineConfig::merge_text(std::string_view text, std::string_view origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(std::string(origin) + ":" + std::to_string(n) + ": expected 'key = value'");
    try {
      set(detail::trim(t.substr(0, eq)), t.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(origin) + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

inline void PipelineConfig::merge_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str(), path);
}

inline void PipelineConfig::validate() const {
  auto fail = [](const std::string& m) { throw ConfigError("invalid config: " + m); };
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) fail("test_fraction must lie in (0, 1)");
  if (ngram_min < 1 || ngram_min > ngram_max || ngram_max > 3) fail("n-gram range must satisfy 1 <= min <= max <= 3");
  if (chi2_k < 1) fail("chi2_k must be at least 1");
  if (uses_topics(features)) {
    if (lda_k_range.empty()) fail("lda_k_range is empty but the feature set needs topics");
    for (std::size_t i = 0; i < lda_k_range.size(); ++i) {
      if (lda_k_range[i] < 1) fail("topic counts must be at least 1");
      if (i && lda_k_range[i] <= lda_k_range[i - 1]) fail("lda_k_range must be strictly ascending");
    }
  }
  if (!(lda_beta > 0.0)) fail("lda_beta must be positive");
  if (lda_iterations < 1 || lda_inference_iterations < 1) fail("LDA iteration counts must be at least 1");
  if (lda_top_m < 1) fail("lda_top_m must be at least 1");
  if (smote_k < 1) fail("smote_k must be at least 1");
  const auto& m = model_options;
  if (!(m.logreg.learning_rate > 0.0) || m.logreg.epochs < 1 || m.logreg.l2 < 0.0) fail("invalid logistic regression settings");
  if (m.tree.min_leaf < 1 || m.forest.tree.min_leaf < 1) fail("min_leaf must be at least 1");
  if (m.forest.n_trees < 1) fail("rf_trees must be at least 1");
  if (m.forest.feature_fraction && !(*m.forest.feature_fraction > 0.0 && *m.forest.feature_fraction <= 1.0))
    fail("rf_feature_fraction must lie in (0, 1]");
  if (m.ffnn.hidden < 1 || m.ffnn.batch_size < 1 || m.ffnn.epochs < 1 || !(m.ffnn.learning_rate > 0.0))
    fail("invalid FFNN settings");
  if (report_top_words < 1) fail("report_top_words must be at least 1");
}

}  // namespace painsift
