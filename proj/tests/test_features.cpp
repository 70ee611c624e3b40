#include <set>

#include <gtest/gtest.h>

#include "painsift/corpus.hpp"
#include "painsift/features.hpp"

namespace painsift {
namespace {

TEST(Chi2, TextbookTable) { EXPECT_NEAR(chi2_score({{{8, 2}, {2, 8}}}), 7.2, 1e-9); }

TEST(Chi2, UniformTableIsZero) {
  EXPECT_EQ(chi2_score({{{5, 5}, {5, 5}}}), 0.0);
  EXPECT_EQ(chi2_score({{{0, 0}, {3, 7}}}), 0.0);
}

TEST(Chi2, RejectsNegativeCounts) { EXPECT_THROW(chi2_score({{{-1, 2}, {2, 8}}}), std::invalid_argument); }

TEST(Chi2, SymmetricUnderSwaps) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    Contingency o;
    for (auto& row : o)
      for (auto& v : row) v = static_cast<std::int64_t>(rng.below(50));
    const Contingency cols{{{o[0][1], o[0][0]}, {o[1][1], o[1][0]}}};
    const Contingency rows{{o[1], o[0]}};
    const double base = chi2_score(o);
    EXPECT_NEAR(chi2_score(cols), base, 1e-9 * std::max(1.0, base));
    EXPECT_NEAR(chi2_score(rows), base, 1e-9 * std::max(1.0, base));
    EXPECT_GE(base, 0.0);
  }
}

NgramBag bag(std::initializer_list<std::string> terms) {
  NgramBag b;
  for (const auto& t : terms) ++b[t];
  return b;
}

// Brute-force oracle: chi2 from explicit document loops.
double oracle_chi2(const std::vector<NgramBag>& bags, const std::vector<int>& labels, int classes,
                   const std::string& term) {
  double best = 0.0;
  for (int c = 0; c < classes; ++c) {
    Contingency o{};
    for (std::size_t i = 0; i < bags.size(); ++i) {
      const int present = bags[i].contains(term) ? 0 : 1;
      const int in_class = labels[i] == c ? 0 : 1;
      ++o[present][in_class];
    }
    best = std::max(best, chi2_score(o));
  }
  return best;
}

TEST(SelectTopK, MatchesBruteForceOnPlantedCorpus) {
  const auto corpus = generate_synthetic_corpus(planted_spec(Task::Relevance, 60, 0.3), 21);
  std::vector<NgramBag> bags;
  for (const auto& n : corpus.notes()) bags.push_back(extract_ngrams(tokenize(n.text), 1, 1));
  const auto labels = corpus.labels();
  const auto vocab = select_top_k(bags, labels, 2, 10);
  ASSERT_EQ(vocab.size(), 10u);

  std::set<std::string> all;
  for (const auto& b : bags)
    for (const auto& [t, c] : b) all.insert(t);
  std::vector<std::pair<double, std::string>> ranked;
  for (const auto& t : all) ranked.emplace_back(-oracle_chi2(bags, labels, 2, t), t);
  std::sort(ranked.begin(), ranked.end());
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(vocab.term(i), ranked[i].second);
    EXPECT_NEAR(vocab.scores()[i], -ranked[i].first, 1e-9);
  }

  // Planted class keywords dominate the shared noise pool.
  const auto spec = planted_spec(Task::Relevance, 1, 0.0);
  std::set<std::string> noise;
  for (const auto& w : spec.noise) noise.insert(tokenize(w).at(0));
  for (const auto& t : vocab.terms()) EXPECT_FALSE(noise.contains(t)) << t;
}

TEST(SelectTopK, TiesAreLexicographic) {
  const std::vector<NgramBag> bags{bag({"b", "a"}), bag({"c"})};
  const std::vector<int> labels{0, 1};
  const auto vocab = select_top_k(bags, labels, 2, 3);
  EXPECT_EQ(vocab.terms(), (std::vector<std::string>{"a", "b", "c"}));
}

TEST(SelectTopK, KLargerThanVocabulary) {
  const std::vector<NgramBag> bags{bag({"x"}), bag({"y"})};
  const std::vector<int> labels{0, 1};
  EXPECT_EQ(select_top_k(bags, labels, 2, 500).size(), 2u);
  EXPECT_THROW(select_top_k(bags, labels, 2, 0), std::invalid_argument);
}

TEST(NgramReport, PartitionsVocabulary) {
  const std::vector<NgramBag> bags{bag({"a", "s"}), bag({"a", "b"}), bag({"c", "s"}), bag({"d"})};
  const std::vector<int> labels{0, 0, 1, 2};
  const auto r = ngram_class_report(bags, labels, 3);
  EXPECT_EQ(r.exclusive[0], (std::set<std::string>{"a", "b"}));
  EXPECT_EQ(r.exclusive[1], (std::set<std::string>{"c"}));
  EXPECT_EQ(r.exclusive[2], (std::set<std::string>{"d"}));
  EXPECT_EQ(r.shared, (std::set<std::string>{"s"}));
  EXPECT_EQ(r.rows.size(), 5u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) EXPECT_GE(r.rows[i - 1].chi2, r.rows[i].chi2);
}

TEST(Vectorize, CountsAndIgnoresUnknownTerms) {
  const Vocabulary vocab({"pain", "toradol"});
  const auto v = vectorize(bag({"pain", "pain", "home"}), vocab);
  EXPECT_EQ(v.values, (std::vector<double>{2, 0}));
  EXPECT_EQ(v.layout, (FeatureLayout{2, 0}));
  EXPECT_THROW(vectorize(bag({"pain"}), Vocabulary{}), std::invalid_argument);
  EXPECT_THROW(Vocabulary({"a", "a"}), DataError);
}

TEST(Concat, LayoutAndOrder) {
  const Vocabulary vocab({"pain"});
  const std::vector<double> theta{0.25, 0.75};
  const auto v = concat_features(vectorize(bag({"pain"}), vocab), topical_features(theta));
  EXPECT_EQ(v.values, (std::vector<double>{1, 0.25, 0.75}));
  EXPECT_EQ(v.layout, (FeatureLayout{1, 2}));
  EXPECT_EQ(v.topical().size(), 2u);
  EXPECT_EQ(v.linguistic()[0], 1.0);
  EXPECT_THROW(concat_features(vectorize(bag({}), vocab), topical_features({})), std::invalid_argument);
}

}  // namespace
}  // namespace painsift
