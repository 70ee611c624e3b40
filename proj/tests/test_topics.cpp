#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "painsift/topics.hpp"

namespace painsift {
namespace {

LdaCorpus make_corpus(const std::vector<std::string>& texts) {
  std::vector<TokenList> docs;
  for (const auto& t : texts) {
    TokenList toks;
    std::istringstream in(t);
    for (std::string w; in >> w;) toks.push_back(w);
    docs.push_back(toks);
  }
  return build_lda_corpus(docs);
}

// Two disjoint 8-word blocks, 40 documents each, 12 tokens per document.
LdaCorpus planted_blocks(std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> texts;
  for (int block = 0; block < 2; ++block)
    for (int d = 0; d < 40; ++d) {
      std::string text;
      for (int i = 0; i < 12; ++i) text += std::string(1, block ? 'q' : 'g') + std::to_string(rng.below(8)) + " ";
      texts.push_back(text);
    }
  return make_corpus(texts);
}

double block_purity(const TopicModel& m, std::size_t top) {
  std::size_t pure = 0, total = 0;
  for (std::size_t k = 0; k < m.num_topics; ++k) {
    const auto words = topic_top_words(m, k, top);
    std::size_t g = 0;
    for (const auto& w : words) g += w[0] == 'g' || w[0] == 'a' || w[0] == 'b';
    pure += std::max(g, words.size() - g);
    total += words.size();
  }
  return static_cast<double>(pure) / static_cast<double>(total);
}

void expect_normalized(const TopicModel& m) {
  for (const auto& row : m.phi) {
    EXPECT_NEAR(std::accumulate(row.begin(), row.end(), 0.0), 1.0, 1e-9);
    for (double p : row) EXPECT_GT(p, 0.0);
  }
}

TEST(Lda, SingleTopicIsSmoothedUnigram) {
  const auto c = make_corpus({"pain pain dose", "pain home", "dose"});
  const double beta = 0.01;
  const auto m = train_lda(c, {1, 1.0, beta, 5, 3});
  const double total = 6, v = 3;
  EXPECT_NEAR(m.phi[0][*c.vocab.find("pain")], (3 + beta) / (total + v * beta), 1e-12);
  EXPECT_NEAR(m.phi[0][*c.vocab.find("dose")], (2 + beta) / (total + v * beta), 1e-12);
  EXPECT_NEAR(m.phi[0][*c.vocab.find("home")], (1 + beta) / (total + v * beta), 1e-12);
  EXPECT_EQ(topic_top_words(m, 0).front(), "pain");
  EXPECT_EQ(topic_top_words(m, 0).size(), 3u);
}

TEST(Lda, ToyBlocksArePure) {
  const auto c = make_corpus({"a a b", "a b b", "c c d", "c d d"});
  double purity = 0.0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto m = train_lda(c, {2, 0.1, 0.01, 500, seed});
    expect_normalized(m);
    purity += block_purity(m, 2);
  }
  EXPECT_GE(purity / 10.0, 0.9);
}

TEST(Lda, BitReproducible) {
  const auto c = planted_blocks(1);
  const auto a = train_lda(c, {3, 50.0 / 3, 0.01, 50, 42});
  const auto b = train_lda(c, {3, 50.0 / 3, 0.01, 50, 42});
  EXPECT_EQ(a.phi, b.phi);
  const auto d = train_lda(c, {3, 50.0 / 3, 0.01, 50, 43});
  EXPECT_NE(a.phi, d.phi);
}

TEST(Lda, Errors) {
  const auto c = make_corpus({"a b"});
  EXPECT_THROW(train_lda(c, {0, 1.0, 0.01, 5, 0}), std::invalid_argument);
  EXPECT_THROW(train_lda(c, {1, 1.0, 0.01, 0, 0}), std::invalid_argument);
  EXPECT_THROW(train_lda(make_corpus({""}), {1, 1.0, 0.01, 5, 0}), DataError);
}

TEST(TopWords, TiesAreLexicographic) {
  TopicModel m;
  m.num_topics = 1;
  m.vocab = Vocabulary({"zeta", "alpha", "mid"});
  m.phi = {{0.25, 0.25, 0.5}};
  EXPECT_EQ(topic_top_words(m, 0, 3), (std::vector<std::string>{"mid", "alpha", "zeta"}));
  EXPECT_EQ(topic_top_words(m, 0, 10).size(), 3u);
}

TopicModel fixed_model(std::vector<std::string> words, std::vector<double> phi) {
  TopicModel m;
  m.num_topics = 1;
  m.vocab = Vocabulary(std::move(words));
  m.phi = {std::move(phi)};
  return m;
}

TEST(Coherence, HandValues) {
  const auto m = fixed_model({"w1", "w2"}, {0.6, 0.4});
  std::vector<WordIds> together(10, WordIds{0, 1});
  EXPECT_NEAR(coherence(m, together, 2).mean, std::log(11.0 / 10.0), 1e-12);

  std::vector<WordIds> apart;
  for (int i = 0; i < 5; ++i) apart.push_back({0});
  for (int i = 0; i < 5; ++i) apart.push_back({1});
  EXPECT_NEAR(coherence(m, apart, 2).mean, std::log(1.0 / 5.0), 1e-12);
  EXPECT_EQ(coherence(m, apart, 1).mean, 0.0);
  EXPECT_THROW(coherence(m, apart, 0), std::invalid_argument);
}

TEST(Coherence, InvariantToDocumentOrder) {
  const auto c = planted_blocks(2);
  const auto m = train_lda(c, {2, 0.5, 0.01, 50, 1});
  auto docs = c.docs;
  std::reverse(docs.begin(), docs.end());
  EXPECT_NEAR(coherence(m, c.docs, 8).mean, coherence(m, docs, 8).mean, 1e-12);
}

TEST(SelectTopicCount, SingletonRangeAndCurveShape) {
  const auto c = planted_blocks(3);
  TopicSearchParams p{{3}, AlphaRule::scaled(50), 0.01, 30, 1, 8};
  const auto one = select_topic_count(c, p);
  EXPECT_EQ(one.best, 3u);
  ASSERT_EQ(one.curve.size(), 1u);
  p.k_range = {2, 4, 5};
  const auto sel = select_topic_count(c, p);
  ASSERT_EQ(sel.curve.size(), 3u);
  EXPECT_EQ(sel.curve[0].first, 2u);
  EXPECT_EQ(sel.curve[2].first, 5u);
  p.k_range = {};
  EXPECT_THROW(select_topic_count(c, p), ConfigError);
  p.k_range = {3, 2};
  EXPECT_THROW(select_topic_count(c, p), ConfigError);
}

TEST(SelectTopicCount, PlantedBlocksGiveTwo) {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto c = planted_blocks(100 + seed);
    const auto sel = select_topic_count(c, {{2, 3, 4, 5, 6}, AlphaRule::scaled(50), 0.01, 200, seed, 8});
    hits += sel.best == 2;
  }
  EXPECT_GE(hits, 9);
}

TEST(InferTheta, UniformWithoutKnownWords) {
  const auto c = planted_blocks(4);
  const auto m = train_lda(c, {4, 0.5, 0.01, 30, 1});
  for (const auto& theta : {infer_theta(m, WordIds{}, 50, 1), infer_theta(m, TokenList{"unseen", "x"}, 50, 1)})
    for (double t : theta) EXPECT_DOUBLE_EQ(t, 0.25);
}

TEST(InferTheta, PlantedDocumentLandsInItsTopic) {
  const auto c = planted_blocks(5);
  const auto m = train_lda(c, {2, 25.0, 0.01, 300, 9});
  const auto topic_of_g = m.phi[0][*c.vocab.find("g0")] > m.phi[1][*c.vocab.find("g0")] ? 0u : 1u;
  const TokenList doc{"g0", "g1", "g2", "g3", "g4", "g5", "g6", "g7", "g1", "g2", "g3", "g0"};
  const auto theta = infer_theta(m, doc, 100, 7);
  EXPECT_GT(theta[topic_of_g], 0.5);
  EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
  EXPECT_EQ(theta, infer_theta(m, doc, 100, 7));

  // A smaller prior lets the evidence dominate.
  const auto sharp = train_lda(c, {2, 0.1, 0.01, 300, 9});
  const auto g = sharp.phi[0][*c.vocab.find("g0")] > sharp.phi[1][*c.vocab.find("g0")] ? 0u : 1u;
  EXPECT_GT(infer_theta(sharp, doc, 100, 7)[g], 0.8);
}

TEST(InferTheta, AlwaysNormalized) {
  const auto c = planted_blocks(6);
  const auto m = train_lda(c, {5, 10.0, 0.01, 20, 2});
  expect_normalized(m);
  for (const auto& d : c.docs) {
    const auto theta = infer_theta(m, d, 20, 3);
    EXPECT_NEAR(std::accumulate(theta.begin(), theta.end(), 0.0), 1.0, 1e-9);
  }
}

TEST(AlphaRule, ParseAndFormat) {
  EXPECT_DOUBLE_EQ(AlphaRule::parse("50/K").alpha(5), 10.0);
  EXPECT_DOUBLE_EQ(AlphaRule::parse("0.1").alpha(5), 0.1);
  EXPECT_EQ(AlphaRule::parse("50/K").str(), "50/K");
  EXPECT_THROW(AlphaRule::parse("x/K"), ConfigError);
  EXPECT_THROW(AlphaRule::parse("-1"), ConfigError);
}

}  // namespace
}  // namespace painsift
