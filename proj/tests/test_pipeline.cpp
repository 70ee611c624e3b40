#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "painsift/painsift.hpp"

namespace painsift {
namespace {

// Shorter LDA schedule keeps the suite quick; the acceptance binary uses the
// defaults.
PipelineConfig quick_config(Task task = Task::Relevance) {
  PipelineConfig c;
  c.task = task;
  c.lda_k_range = {2, 3, 4};
  c.lda_iterations = 200;
  c.lda_inference_iterations = 50;
  c.model_options.forest.n_trees = 20;
  c.model_options.ffnn.epochs = 60;
  return c;
}

const Corpus& relevance_corpus() {
  static const Corpus c = generate_synthetic_corpus(planted_spec(Task::Relevance, 100, 0.3), 42);
  return c;
}

const Corpus& change_corpus() {
  static const Corpus c = generate_synthetic_corpus(planted_spec(Task::Change, 50, 0.3), 42);
  return c;
}

TEST(Config, SetGetRoundTrip) {
  PipelineConfig c;
  c.set("lda_k_range", "3..5");
  EXPECT_EQ(c.lda_k_range, (std::vector<std::size_t>{3, 4, 5}));
  c.set("lda_k_range", "2,7");
  EXPECT_EQ(c.get("lda_k_range"), "2,7");
  c.set("lda_alpha", "0.1");
  EXPECT_EQ(c.get("lda_alpha"), "0.1");
  c.set("smote", "off");
  EXPECT_FALSE(c.smote);
  c.set("rf_feature_fraction", "sqrt");
  EXPECT_FALSE(c.model_options.forest.feature_fraction);
  EXPECT_THROW(c.set("no_such_key", "1"), ConfigError);
  EXPECT_THROW(c.set("seed", "abc"), ConfigError);
  for (const auto& [k, v] : c.snapshot()) {
    PipelineConfig d;
    d.set(k, v);
    EXPECT_EQ(d.get(k), v) << k;
  }
}

TEST(Config, MergeTextReportsLine) {
  PipelineConfig c;
  c.merge_text("# comment\nmodel = rf\n\ntask=change  # inline\n");
  EXPECT_EQ(c.model, ModelKind::Forest);
  EXPECT_EQ(c.task, Task::Change);
  try {
    c.merge_text("model = rf\nbogus\n", "x.conf");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("x.conf:2"), std::string::npos);
  }
}

TEST(Config, EmptyTopicRangeRejectedForTopicalFeatures) {
  auto c = quick_config();
  c.set("lda_k_range", "");
  c.features = FeatureSet::Linguistic;
  EXPECT_NO_THROW(c.validate());
  for (auto f : {FeatureSet::Topical, FeatureSet::Combined}) {
    c.features = f;
    EXPECT_THROW(c.validate(), ConfigError);
    EXPECT_THROW(run_train(c, relevance_corpus()), ConfigError);
  }
}

TEST(Train, TreeOnCombinedFeaturesSeparatesPlantedCorpus) {
  const auto r = run_train(quick_config(), relevance_corpus());
  EXPECT_GE(r.report.standard.weighted.f_measure, 0.95);
  EXPECT_EQ(r.report.test_size + r.report.train_size, 200u);
  EXPECT_EQ(r.report.test_size, 40u);
  EXPECT_FALSE(r.report.graded);
  const auto layout = r.artifact.pipeline.layout();
  EXPECT_GT(layout.linguistic, 0u);
  EXPECT_GE(layout.topical, 2u);
  EXPECT_EQ(r.artifact.topic_curve.size(), 3u);
}

TEST(Train, ReportsTrainAccuracyOnOriginalRows) {
  auto c = quick_config(Task::Change);
  c.features = FeatureSet::Linguistic;
  c.model_options.tree = {0, 1};
  const auto r = run_train(c, change_corpus());
  ASSERT_TRUE(r.report.graded);
  EXPECT_GE(r.report.train_rows_after_smote, r.report.train_size);
  // An unlimited tree fits its training rows unless two notes share a vector.
  EXPECT_GE(r.report.train_accuracy, 0.95);
}

TEST(Train, ByteIdenticalAcrossRuns) {
  auto c = quick_config(Task::Change);
  c.model = ModelKind::Ffnn;
  const auto a = run_train(c, change_corpus());
  const auto b = run_train(c, change_corpus());
  EXPECT_EQ(a.artifact.to_json(), b.artifact.to_json());
  EXPECT_EQ(a.report.to_json().dump(), b.report.to_json().dump());
  c.seed = 43;
  EXPECT_NE(run_train(c, change_corpus()).artifact.to_json(), a.artifact.to_json());
}

Corpus with_mutated_test_split(const PipelineConfig& c, const Corpus& corpus, bool append) {
  const auto split = stratified_split_indices(corpus.labels(), c.test_fraction, c.stage_seed(seed_offset::kSplit));
  auto notes = corpus.notes();
  for (auto i : split.test) notes[i].text = append ? notes[i].text + " wheelchair fatigue zzzleak" : "unrelated words";
  return Corpus(corpus.task(), notes);
}

TEST(Train, TestSplitTextDoesNotLeak) {
  const auto c = quick_config();
  const auto base = run_train(c, relevance_corpus()).artifact.to_json();
  for (bool append : {false, true})
    EXPECT_EQ(run_train(c, with_mutated_test_split(c, relevance_corpus(), append)).artifact.to_json(), base);
}

TEST(Train, FullCorpusTopicsSeeTestText) {
  auto c = quick_config();
  c.lda_on_full_corpus = true;
  const auto base = run_train(c, relevance_corpus()).artifact.to_json();
  EXPECT_NE(run_train(c, with_mutated_test_split(c, relevance_corpus(), true)).artifact.to_json(), base);
}

TEST(Train, StageErrorsNameTheStage) {
  std::vector<ClinicalNote> notes;
  for (int i = 0; i < 6; ++i)
    notes.push_back({"n" + std::to_string(i), "p", "pain", i == 0 ? PainRelevance::Irrelevant : PainRelevance::Relevant,
                     std::nullopt});
  try {
    run_train(quick_config(), Corpus(Task::Relevance, notes));
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("split"), std::string::npos) << e.what();
  }
}

TEST(Predict, PlantedKeywordsAreRelevant) {
  const auto r = run_train(quick_config(), relevance_corpus());
  EXPECT_EQ(r.artifact.predict_text("patient pain increased 9/10 toradol").label,
            static_cast<int>(PainRelevance::Relevant));
  const auto empty = r.artifact.predict_text("");
  EXPECT_EQ(empty.probabilities.size(), 2u);
}

TEST(Predict, SaveLoadGivesSamePredictions) {
  auto c = quick_config(Task::Change);
  c.model = ModelKind::Forest;
  const auto r = run_train(c, change_corpus());
  const auto path = std::filesystem::temp_directory_path() / "painsift_artifact_test.json";
  {
    std::ofstream(path, std::ios::binary) << r.artifact.to_json();
  }
  const auto loaded = ModelArtifact::load(path.string());
  EXPECT_EQ(loaded.to_json(), r.artifact.to_json());
  const auto fresh = generate_synthetic_corpus(planted_spec(Task::Change, 25, 0.3), 7);
  const auto a = run_predict(r.artifact, fresh.notes());
  const auto b = run_predict(loaded, fresh.notes());
  ASSERT_EQ(a.size(), 100u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].label, b[i].label);
    EXPECT_EQ(a[i].probabilities, b[i].probabilities);
  }
  std::filesystem::remove(path);
}

TEST(Predict, RejectsForeignArtifacts) {
  EXPECT_THROW(ModelArtifact::from_json("{\"format\":\"other\"}"), DataError);
  EXPECT_THROW(ModelArtifact::from_json("not json"), DataError);
  EXPECT_THROW(ModelArtifact::load("/nonexistent/artifact.json"), DataError);
}

TEST(Evaluate, ArtifactAndGridTables) {
  auto c = quick_config();
  const std::vector<ModelKind> models{ModelKind::LogReg, ModelKind::Tree};
  const std::vector<FeatureSet> sets{FeatureSet::Linguistic, FeatureSet::Combined};
  const auto reports = run_evaluation_grid(c, relevance_corpus(), models, sets);
  ASSERT_EQ(reports.size(), 4u);
  const auto table = format_results_table(reports);
  EXPECT_NE(table.find("Logistic Regression"), std::string::npos);
  EXPECT_NE(table.find("Linguistic + Topical"), std::string::npos);
  EXPECT_NE(table.find("F-measure"), std::string::npos);

  const auto r = run_train(c, relevance_corpus());
  const auto held_out = generate_synthetic_corpus(planted_spec(Task::Relevance, 20, 0.3), 9);
  const auto e = evaluate_artifact(r.artifact, held_out);
  EXPECT_EQ(e.test_size, 40u);
  EXPECT_GE(e.standard.weighted.f_measure, 0.9);
  EXPECT_EQ(e.to_json()["format"], std::string(kReportFormat));
}

std::vector<std::string> body_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') out.push_back(line);
  return out;
}

TEST(Report, NgramProfiles) {
  auto c = quick_config();
  const auto lines = body_lines(report_ngrams(c, relevance_corpus()));
  ASSERT_GT(lines.size(), 1u);
  EXPECT_EQ(lines[0], "term\tclass_profile\tchi2\tdoc_freq:no\tdoc_freq:yes");
  std::size_t no = 0, yes = 0, shared = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    no += lines[i].find("\texclusive:no\t") != std::string::npos;
    yes += lines[i].find("\texclusive:yes\t") != std::string::npos;
    shared += lines[i].find("\tshared\t") != std::string::npos;
  }
  EXPECT_EQ(no, 10u);
  EXPECT_EQ(yes, 10u);
  EXPECT_EQ(shared, 10u);
}

TEST(Report, TwoTopicsPerClassWithEightWords) {
  auto c = quick_config();
  const auto lines = body_lines(report_topics(c, relevance_corpus()));
  ASSERT_EQ(lines.size(), 5u);
  EXPECT_EQ(lines[0], "class\ttopic\twords");
  for (std::size_t i = 1; i < lines.size(); ++i)
    EXPECT_EQ(std::count(lines[i].begin(), lines[i].end(), ','), 7) << lines[i];
}

TEST(Report, CoherenceCurve) {
  auto c = quick_config();
  const auto text = report_coherence(c, relevance_corpus());
  EXPECT_NE(text.find("# best_k: "), std::string::npos);
  EXPECT_EQ(body_lines(text).size(), 4u);
}

}  // namespace
}  // namespace painsift
