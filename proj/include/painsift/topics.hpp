#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "painsift/error.hpp"
#include "painsift/features.hpp"
#include "painsift/random.hpp"
#include "painsift/textprep.hpp"

namespace painsift {

using WordIds = std::vector<std::uint32_t>;

/// Unigram documents mapped onto a lexicographically ordered vocabulary.
struct LdaCorpus {
  Vocabulary vocab;
  std::vector<WordIds> docs;
};

inline WordIds to_word_ids(const TokenList& tokens, const Vocabulary& vocab) {
  WordIds ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens)
    if (auto i = vocab.find(t)) ids.push_back(static_cast<std::uint32_t>(*i));
  return ids;
}

inline LdaCorpus build_lda_corpus(std::span<const TokenList> docs) {
  std::set<std::string> terms;
  for (const auto& d : docs) terms.insert(d.begin(), d.end());
  LdaCorpus out{Vocabulary(std::vector<std::string>(terms.begin(), terms.end())), {}};
  out.docs.reserve(docs.size());
  for (const auto& d : docs) out.docs.push_back(to_word_ids(d, out.vocab));
  return out;
}

/// Symmetric document-topic prior, either fixed or `scale / K`.
struct AlphaRule {
  double value = 50.0;
  bool per_topic = true;

  double alpha(std::size_t k) const { return per_topic ? value / static_cast<double>(k) : value; }

  static AlphaRule fixed(double a) { return {a, false}; }
  static AlphaRule scaled(double s) { return {s, true}; }

  /// Accepts "<number>/K" or a plain number.
  static AlphaRule parse(std::string_view s) {
    const bool scaled_form = s.ends_with("/K") || s.ends_with("/k");
    const std::string num(scaled_form ? s.substr(0, s.size() - 2) : s);
    double v = 0.0;
    try {
      std::size_t used = 0;
      v = std::stod(num, &used);
      if (used != num.size()) throw std::invalid_argument(num);
    } catch (const std::exception&) {
      throw ConfigError("invalid alpha rule '" + std::string(s) + "'");
    }
    if (!(v > 0.0)) throw ConfigError("alpha must be positive");
    return {v, scaled_form};
  }

  std::string str() const {
    char buf[64];
    const auto end = std::to_chars(buf, buf + sizeof buf, value).ptr;
    return std::string(buf, end) + (per_topic ? "/K" : "");
  }
};

struct TopicModel {
  std::size_t num_topics = 0;
  std::vector<std::vector<double>> phi;  // num_topics x |vocab|
  double alpha = 0.0;
  double beta = 0.0;
  Vocabulary vocab;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
};

struct LdaParams {
  std::size_t num_topics = 2;
  double alpha = 25.0;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
};

namespace detail {

// Draws an index with probability proportional to weights[i].
inline std::size_t sample_index(std::span<const double> weights, Rng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  const double u = rng.uniform() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

}  // namespace detail

/// LDA by collapsed Gibbs sampling over token-topic assignments. The chain
/// visits documents and tokens in corpus order, so the result is a pure
/// function of (corpus, params).
inline TopicModel train_lda(const LdaCorpus& corpus, const LdaParams& params) {
  const auto k_count = params.num_topics;
  const auto v_count = corpus.vocab.size();
  if (k_count < 1) throw std::invalid_argument("LDA needs at least one topic");
  if (params.iterations < 1) throw std::invalid_argument("LDA needs at least one iteration");
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) throw std::invalid_argument("LDA priors must be positive");
  if (v_count == 0) throw DataError("LDA vocabulary is empty");
  if (std::none_of(corpus.docs.begin(), corpus.docs.end(), [](const WordIds& d) { return !d.empty(); }))
    throw DataError("LDA corpus has no non-empty document");

  Rng rng(params.seed);
  std::vector<std::vector<std::uint32_t>> z(corpus.docs.size());
  std::vector<std::vector<std::uint32_t>> doc_topic(corpus.docs.size(), std::vector<std::uint32_t>(k_count, 0));
  std::vector<std::uint32_t> topic_word(k_count * v_count, 0);
  std::vector<std::uint32_t> topic_total(k_count, 0);

  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    z[d].resize(corpus.docs[d].size());
    for (std::size_t i = 0; i < corpus.docs[d].size(); ++i) {
      const auto k = static_cast<std::uint32_t>(rng.below(k_count));
      const auto w = corpus.docs[d][i];
      z[d][i] = k;
      ++doc_topic[d][k];
      ++topic_word[k * v_count + w];
      ++topic_total[k];
    }
  }

  const double v_beta = static_cast<double>(v_count) * params.beta;
  std::vector<double> weights(k_count);
  for (std::size_t it = 0; it < params.iterations; ++it) {
    for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
      auto& nd = doc_topic[d];
      for (std::size_t i = 0; i < corpus.docs[d].size(); ++i) {
        const auto w = corpus.docs[d][i];
        auto k = z[d][i];
        --nd[k];
        --topic_word[k * v_count + w];
        --topic_total[k];
        for (std::size_t t = 0; t < k_count; ++t)
          weights[t] = (nd[t] + params.alpha) * (topic_word[t * v_count + w] + params.beta) /
                       (topic_total[t] + v_beta);
        k = static_cast<std::uint32_t>(detail::sample_index(weights, rng));
        z[d][i] = k;
        ++nd[k];
        ++topic_word[k * v_count + w];
        ++topic_total[k];
      }
    }
  }

  TopicModel model{k_count, {}, params.alpha, params.beta, corpus.vocab, params.seed, params.iterations};
  model.phi.assign(k_count, std::vector<double>(v_count));
  for (std::size_t t = 0; t < k_count; ++t) {
    const double denom = topic_total[t] + v_beta;
    for (std::size_t w = 0; w < v_count; ++w) model.phi[t][w] = (topic_word[t * v_count + w] + params.beta) / denom;
  }
  return model;
}

/// Indices of the m highest-probability words of topic k, descending, ties
/// broken lexicographically (vocabulary order).
inline std::vector<std::size_t> topic_top_word_ids(const TopicModel& model, std::size_t k, std::size_t m = 8) {
  if (k >= model.num_topics) throw std::out_of_range("topic index out of range");
  const auto& row = model.phi[k];
  std::vector<std::size_t> ids(row.size());
  std::iota(ids.begin(), ids.end(), 0);
  const auto keep = std::min(m, ids.size());
  std::partial_sort(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(keep), ids.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (row[a] != row[b]) return row[a] > row[b];
                      return model.vocab.term(a) < model.vocab.term(b);
                    });
  ids.resize(keep);
  return ids;
}

inline std::vector<std::string> topic_top_words(const TopicModel& model, std::size_t k, std::size_t m = 8) {
  std::vector<std::string> words;
  for (auto id : topic_top_word_ids(model, k, m)) words.push_back(model.vocab.term(id));
  return words;
}

struct CoherenceScores {
  std::vector<double> per_topic;
  double mean = 0.0;
};

/// UMass coherence of each topic's top words against document co-occurrence
/// counts in `docs` (ids in the model's vocabulary):
///   C = sum_{i<j} log((D(w_i, w_j) + 1) / D(w_j))
inline CoherenceScores coherence(const TopicModel& model, std::span<const WordIds> docs, std::size_t top_m) {
  if (top_m < 1) throw std::invalid_argument("top_m must be at least 1");
  // Sorted list of documents containing each word.
  std::vector<std::vector<std::uint32_t>> postings(model.vocab.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::set<std::uint32_t> uniq(docs[d].begin(), docs[d].end());
    for (auto w : uniq) postings.at(w).push_back(static_cast<std::uint32_t>(d));
  }
  auto co_count = [&](std::size_t a, std::size_t b) {
    const auto& pa = postings[a];
    const auto& pb = postings[b];
    std::size_t n = 0, i = 0, j = 0;
    while (i < pa.size() && j < pb.size()) {
      if (pa[i] < pb[j]) {
        ++i;
      } else if (pb[j] < pa[i]) {
        ++j;
      } else {
        ++n, ++i, ++j;
      }
    }
    return n;
  };

  CoherenceScores out;
  for (std::size_t k = 0; k < model.num_topics; ++k) {
    const auto top = topic_top_word_ids(model, k, top_m);
    double c = 0.0;
    for (std::size_t j = 1; j < top.size(); ++j) {
      const auto dj = postings[top[j]].size();
      if (dj == 0) throw std::invalid_argument("top word '" + model.vocab.term(top[j]) + "' absent from corpus");
      for (std::size_t i = 0; i < j; ++i)
        c += std::log((static_cast<double>(co_count(top[i], top[j])) + 1.0) / static_cast<double>(dj));
    }
    out.per_topic.push_back(c);
  }
  out.mean = std::accumulate(out.per_topic.begin(), out.per_topic.end(), 0.0) /
             static_cast<double>(out.per_topic.size());
  return out;
}

struct TopicCountSelection {
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, double>> curve;  // (K, mean coherence), ascending K
};

struct TopicSearchParams {
  std::vector<std::size_t> k_range;
  AlphaRule alpha;
  double beta = 0.01;
  std::size_t iterations = 1000;
  std::uint64_t seed = 0;
  std::size_t top_m = 8;
};

/// Trains one model per candidate K and keeps the most coherent; ties go to
/// the smaller K.
inline TopicCountSelection select_topic_count(const LdaCorpus& corpus, const TopicSearchParams& p) {
  if (p.k_range.empty()) throw ConfigError("topic-count range is empty");
  if (!std::is_sorted(p.k_range.begin(), p.k_range.end()) ||
      std::adjacent_find(p.k_range.begin(), p.k_range.end()) != p.k_range.end())
    throw ConfigError("topic-count range must be strictly ascending");
  TopicCountSelection out;
  double best_score = 0.0;
  for (auto k : p.k_range) {
    const auto model = train_lda(corpus, {k, p.alpha.alpha(k), p.beta, p.iterations, p.seed});
    const double score = coherence(model, corpus.docs, p.top_m).mean;
    out.curve.emplace_back(k, score);
    if (out.curve.size() == 1 || score > best_score) {
      best_score = score;
      out.best = k;
    }
  }
  return out;
}

/// Topic proportions for one document by Gibbs sampling its assignments with
/// phi held fixed. Out-of-vocabulary tokens are skipped; a document with no
/// known tokens gets the uniform distribution.
inline std::vector<double> infer_theta(const TopicModel& model, const WordIds& doc, std::size_t iterations,
                                       std::uint64_t seed) {
  const auto k_count = model.num_topics;
  std::vector<double> theta(k_count, 1.0 / static_cast<double>(k_count));
  if (doc.empty()) return theta;

  Rng rng(seed);
  std::vector<std::uint32_t> z(doc.size());
  std::vector<std::uint32_t> counts(k_count, 0);
  for (std::size_t i = 0; i < doc.size(); ++i) {
    z[i] = static_cast<std::uint32_t>(rng.below(k_count));
    ++counts[z[i]];
  }
  std::vector<double> weights(k_count);
  for (std::size_t it = 0; it < iterations; ++it) {
    for (std::size_t i = 0; i < doc.size(); ++i) {
      --counts[z[i]];
      for (std::size_t t = 0; t < k_count; ++t) weights[t] = (counts[t] + model.alpha) * model.phi[t][doc[i]];
      z[i] = static_cast<std::uint32_t>(detail::sample_index(weights, rng));
      ++counts[z[i]];
    }
  }
  const double denom = static_cast<double>(doc.size()) + static_cast<double>(k_count) * model.alpha;
  for (std::size_t t = 0; t < k_count; ++t) theta[t] = (counts[t] + model.alpha) / denom;
  return theta;
}

inline std::vector<double> infer_theta(const TopicModel& model, const TokenList& tokens, std::size_t iterations,
                                       std::uint64_t seed) {
  return infer_theta(model, to_word_ids(tokens, model.vocab), iterations, seed);
}

}  // namespace painsift
