#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "painsift/balance.hpp"
#include "painsift/config.hpp"
#include "painsift/corpus.hpp"
#include "painsift/eval.hpp"
#include "painsift/features.hpp"
#include "painsift/models/model.hpp"
#include "painsift/textprep.hpp"
#include "painsift/topics.hpp"

namespace painsift {

inline constexpr std::string_view kArtifactFormat = "painsift-model-v1";
inline constexpr std::string_view kReportFormat = "painsift-report-v1";

namespace detail {

// Runs one pipeline stage, prefixing any library error with the stage name
// while keeping its type (and therefore its exit code).
template <class F>
auto run_stage(std::string_view stage, F&& f) -> decltype(f()) {
  auto wrap = [&](const std::exception& e) { return std::string(stage) + ": " + e.what(); };
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(wrap(e));
  } catch (const DataError& e) {
    throw DataError(wrap(e));
  } catch (const LayoutError& e) {
    throw LayoutError(wrap(e));
  } catch (const TrainingError& e) {
    throw TrainingError(wrap(e));
  } catch (const std::invalid_argument& e) {
    throw DataError(wrap(e));
  }
}

}  // namespace detail

inline TextPreprocessor make_preprocessor(const PipelineConfig& c) {
  return TextPreprocessor(c.stopwords.empty() ? StopwordList() : StopwordList::from_file(c.stopwords),
                          c.stemmer_rules.empty() ? Stemmer() : Stemmer::from_file(c.stemmer_rules));
}

inline Corpus load_configured_corpus(const PipelineConfig& c) {
  if (c.corpus.empty()) throw ConfigError("no corpus given (set 'corpus' or pass --corpus)");
  const auto format = c.corpus_format.empty() ? guess_corpus_format(c.corpus) : parse_corpus_format(c.corpus_format);
  return load_corpus(c.corpus, format, c.task);
}

/// Everything needed to turn raw note text into a model input row.
struct FeaturePipeline {
  Task task = Task::Relevance;
  FeatureSet features = FeatureSet::Combined;
  TextPreprocessor prep;
  int ngram_min = 1;
  int ngram_max = 2;
  Vocabulary vocab;                 // selected n-grams; empty for topical-only
  std::optional<TopicModel> topics;
  std::size_t inference_iterations = 100;
  std::uint64_t inference_seed = 0;

  FeatureLayout layout() const {
    return {uses_linguistic(features) ? vocab.size() : 0, topics ? topics->num_topics : 0};
  }

  FeatureVector extract(const TokenList& tokens) const {
    std::optional<FeatureVector> ling, top;
    if (uses_linguistic(features)) ling = vectorize(extract_ngrams(tokens, ngram_min, ngram_max), vocab);
    if (uses_topics(features)) top = topical_features(infer_theta(*topics, tokens, inference_iterations, inference_seed));
    if (ling && top) return concat_features(*ling, *top);
    return ling ? *ling : *top;
  }

  FeatureVector extract_text(std::string_view text) const { return extract(prep.tokenize(text)); }
};

struct EvalReport {
  Task task = Task::Relevance;
  ModelKind model = ModelKind::Tree;
  FeatureSet features = FeatureSet::Combined;
  bool smote = true;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;

  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t train_rows_after_smote = 0;
  double train_accuracy = 0.0;
  ConfusionMatrix confusion;
  StandardMetrics standard;
  std::optional<GradedCounts> graded;
  Prf graded_metrics;

  /// The triple a results table shows: graded metrics for the ordinal task,
  /// support-weighted standard metrics otherwise.
  Prf headline() const { return graded ? graded_metrics : standard.weighted; }

  nlohmann::ordered_json to_json() const {
    using ojson = nlohmann::ordered_json;
    const auto names = class_names(task);
    ojson j;
    j["format"] = std::string(kReportFormat);
    ojson meta;
    meta["task"] = std::string(to_string(task));
    meta["model"] = std::string(to_string(model));
    meta["features"] = std::string(to_string(features));
    meta["smote"] = smote;
    meta["seed"] = seed;
    meta["averaging"] = "weighted";
    ojson cfg = ojson::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    meta["config"] = cfg;
    j["metadata"] = meta;
    j["train_size"] = train_size;
    j["test_size"] = test_size;
    j["train_rows_after_smote"] = train_rows_after_smote;
    j["train_accuracy"] = train_accuracy;
    j["classes"] = std::vector<std::string>(names.begin(), names.end());
    j["confusion"] = confusion;
    ojson per_class = ojson::array();
    for (std::size_t c = 0; c < standard.per_class.size(); ++c) {
      const auto& p = standard.per_class[c];
      per_class.push_back({{"class", std::string(names[c])},
                           {"precision", p.precision},
                           {"recall", p.recall},
                           {"f_measure", p.f_measure},
                           {"support", standard.support[c]}});
    }
    j["per_class"] = per_class;
    j["weighted"] = {{"precision", standard.weighted.precision},
                     {"recall", standard.weighted.recall},
                     {"f_measure", standard.weighted.f_measure}};
    if (graded) {
      j["graded"] = {{"tp", graded->tp},
                     {"fp", graded->fp},
                     {"fn", graded->fn},
                     {"precision", graded_metrics.precision},
                     {"recall", graded_metrics.recall},
                     {"f_measure", graded_metrics.f_measure}};
    } else {
      j["graded"] = nullptr;
    }
    return j;
  }
};

/// Self-contained trained pipeline: preprocessing, selected vocabulary, topic
/// model and classifier.
struct ModelArtifact {
  std::vector<std::pair<std::string, std::string>> config;
  FeaturePipeline pipeline;
  std::vector<std::pair<std::size_t, double>> topic_curve;
  TrainedModel model;

  Prediction predict_text(std::string_view text) const { return predict(model, pipeline.extract_text(text)); }

  std::string to_json() const {
    using ojson = nlohmann::ordered_json;
    ojson j;
    j["format"] = std::string(kArtifactFormat);
    ojson cfg = ojson::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    const auto names = class_names(pipeline.task);
    j["task"] = std::string(to_string(pipeline.task));
    j["classes"] = std::vector<std::string>(names.begin(), names.end());
    j["features"] = std::string(to_string(pipeline.features));
    j["preprocessing"] = {{"ngram_min", pipeline.ngram_min},
                          {"ngram_max", pipeline.ngram_max},
                          {"stopwords", pipeline.prep.stopwords().text()},
                          {"stemmer_rules", pipeline.prep.stemmer().text()}};
    j["vocabulary"] = {{"terms", pipeline.vocab.terms()}, {"chi2", pipeline.vocab.scores()}};
    if (pipeline.topics) {
      const auto& t = *pipeline.topics;
      ojson curve = ojson::array();
      for (const auto& [k, c] : topic_curve) curve.push_back({k, c});
      j["topic_model"] = {{"num_topics", t.num_topics},
                          {"alpha", t.alpha},
                          {"beta", t.beta},
                          {"seed", t.seed},
                          {"iterations", t.iterations},
                          {"inference_iterations", pipeline.inference_iterations},
                          {"inference_seed", pipeline.inference_seed},
                          {"coherence_curve", curve},
                          {"vocab", t.vocab.terms()},
                          {"phi", t.phi}};
    } else {
      j["topic_model"] = nullptr;
    }
    j["model"] = model_to_json(model);
    return j.dump(1) + "\n";
  }

  static ModelArtifact from_json(std::string_view text) {
    using ojson = nlohmann::ordered_json;
    ojson j;
    try {
      j = ojson::parse(text);
    } catch (const ojson::parse_error& e) {
      throw DataError(std::string("artifact is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("format")) throw DataError("artifact has no format tag");
    const auto format = j.at("format").get<std::string>();
    if (format != kArtifactFormat)
      throw DataError("unsupported artifact format '" + format + "' (expected " + std::string(kArtifactFormat) + ")");
    try {
      ModelArtifact a;
      for (const auto& [k, v] : j.at("config").items()) a.config.emplace_back(k, v.get<std::string>());
      auto& p = a.pipeline;
      p.task = parse_task(j.at("task").get<std::string>());
      p.features = parse_feature_set(j.at("features").get<std::string>());
      const auto& pre = j.at("preprocessing");
      p.ngram_min = pre.at("ngram_min").get<int>();
      p.ngram_max = pre.at("ngram_max").get<int>();
      p.prep = TextPreprocessor(StopwordList(pre.at("stopwords").get<std::string>()),
                                Stemmer(pre.at("stemmer_rules").get<std::string>()));
      p.vocab = Vocabulary(j.at("vocabulary").at("terms").get<std::vector<std::string>>(),
                           j.at("vocabulary").at("chi2").get<std::vector<double>>());
      if (const auto& t = j.at("topic_model"); !t.is_null()) {
        TopicModel m;
        m.num_topics = t.at("num_topics").get<std::size_t>();
        m.alpha = t.at("alpha").get<double>();
        m.beta = t.at("beta").get<double>();
        m.seed = t.at("seed").get<std::uint64_t>();
        m.iterations = t.at("iterations").get<std::size_t>();
        m.vocab = Vocabulary(t.at("vocab").get<std::vector<std::string>>());
        m.phi = t.at("phi").get<std::vector<std::vector<double>>>();
        if (m.phi.size() != m.num_topics) throw DataError("topic model phi has the wrong number of rows");
        for (const auto& row : m.phi)
          if (row.size() != m.vocab.size()) throw DataError("topic model phi row has the wrong width");
        p.inference_iterations = t.at("inference_iterations").get<std::size_t>();
        p.inference_seed = t.at("inference_seed").get<std::uint64_t>();
        for (const auto& pt : t.at("coherence_curve"))
          a.topic_curve.emplace_back(pt.at(0).get<std::size_t>(), pt.at(1).get<double>());
        p.topics = std::move(m);
      }
      a.model = model_from_json(j.at("model"));
      if (!(a.model.layout == p.layout())) throw DataError("artifact model layout disagrees with its feature pipeline");
      return a;
    } catch (const ojson::exception& e) {
      throw DataError(std::string("malformed artifact: ") + e.what());
    } catch (const ConfigError& e) {
      throw DataError(std::string("malformed artifact: ") + e.what());
    }
  }

  static ModelArtifact load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open artifact '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
  }
};

struct TrainResult {
  ModelArtifact artifact;
  EvalReport report;
};

namespace detail {

inline Matrix feature_matrix(const FeaturePipeline& fp, std::span<const TokenList> tokens,
                             std::span<const std::size_t> rows) {
  Matrix x(0, fp.layout().size());
  for (auto i : rows) x.append_row(fp.extract(tokens[i]).values);
  return x;
}

template <class T>
std::vector<T> gather(std::span<const T> v, std::span<const std::size_t> rows) {
  std::vector<T> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(v[i]);
  return out;
}

}  // namespace detail

/// Split, fit features and topics on the training side, rebalance, train and
/// evaluate on the untouched test side.
inline TrainResult run_train(const PipelineConfig& config, const Corpus& corpus) {
  detail::run_stage("config", [&] { config.validate(); });
  if (corpus.task() != config.task) throw ConfigError("corpus task does not match the configured task");
  const int num_classes = class_count(config.task);
  const auto labels = corpus.labels();

  const auto split = detail::run_stage("split", [&] {
    return stratified_split_indices(labels, config.test_fraction, config.stage_seed(seed_offset::kSplit));
  });

  FeaturePipeline fp;
  fp.task = config.task;
  fp.features = config.features;
  fp.ngram_min = config.ngram_min;
  fp.ngram_max = config.ngram_max;
  fp.inference_iterations = config.lda_inference_iterations;
  fp.inference_seed = config.stage_seed(seed_offset::kInference);
  fp.prep = detail::run_stage("preprocess", [&] { return make_preprocessor(config); });

  std::vector<TokenList> tokens;
  tokens.reserve(corpus.size());
  for (const auto& n : corpus.notes()) tokens.push_back(fp.prep.tokenize(n.text));
  const auto train_labels = detail::gather<int>(labels, split.train);
  const auto test_labels = detail::gather<int>(labels, split.test);

  if (uses_linguistic(config.features)) {
    fp.vocab = detail::run_stage("features", [&] {
      std::vector<NgramBag> bags;
      for (auto i : split.train) bags.push_back(extract_ngrams(tokens[i], config.ngram_min, config.ngram_max));
      auto v = select_top_k(bags, train_labels, num_classes, config.chi2_k);
      if (v.empty()) throw DataError("training notes contain no n-grams");
      return v;
    });
  }

  std::vector<std::pair<std::size_t, double>> curve;
  if (uses_topics(config.features)) {
    fp.topics = detail::run_stage("topics", [&] {
      std::vector<TokenList> docs;
      if (config.lda_on_full_corpus) {
        docs = tokens;
      } else {
        for (auto i : split.train) docs.push_back(tokens[i]);
      }
      const auto lda_corpus = build_lda_corpus(docs);
      TopicSearchParams search{config.lda_k_range, config.lda_alpha, config.lda_beta, config.lda_iterations,
                               config.stage_seed(seed_offset::kLda), config.lda_top_m};
      const auto selection = select_topic_count(lda_corpus, search);
      curve = selection.curve;
      return train_lda(lda_corpus, {selection.best, config.lda_alpha.alpha(selection.best), config.lda_beta,
                                    config.lda_iterations, config.stage_seed(seed_offset::kLda)});
    });
  }

  const auto x_train = detail::run_stage("features", [&] { return detail::feature_matrix(fp, tokens, split.train); });
  auto balanced = LabeledMatrix::real(x_train, train_labels);
  if (config.smote)
    balanced = detail::run_stage("smote", [&] {
      return smote(balanced, config.smote_k, config.stage_seed(seed_offset::kSmote));
    });

  ModelArtifact artifact;
  artifact.config = config.snapshot();
  artifact.topic_curve = curve;
  artifact.model = detail::run_stage("train", [&] {
    return train_model(config.model, balanced.rows, balanced.labels, fp.layout(), config.model_options,
                       config.stage_seed(seed_offset::kModel));
  });
  artifact.pipeline = std::move(fp);

  EvalReport report;
  report.task = config.task;
  report.model = config.model;
  report.features = config.features;
  report.smote = config.smote;
  report.seed = config.seed;
  report.config = artifact.config;
  report.train_size = split.train.size();
  report.test_size = split.test.size();
  report.train_rows_after_smote = balanced.size();
  detail::run_stage("evaluate", [&] {
    std::size_t correct = 0;
    for (std::size_t r = 0; r < x_train.rows(); ++r) {
      const auto p = predict_proba(artifact.model, x_train.row(r));
      correct += artifact.model.label_map.label(argmax(p)) == train_labels[r];
    }
    report.train_accuracy = static_cast<double>(correct) / static_cast<double>(x_train.rows());

    const auto x_test = detail::feature_matrix(artifact.pipeline, tokens, split.test);
    std::vector<int> pred;
    for (std::size_t r = 0; r < x_test.rows(); ++r)
      pred.push_back(artifact.model.label_map.label(argmax(predict_proba(artifact.model, x_test.row(r)))));
    report.confusion = confusion_matrix(test_labels, pred, num_classes);
    report.standard = standard_prf(report.confusion);
    if (config.task == Task::Change) {
      report.graded = graded_counts(test_labels, pred);
      report.graded_metrics = graded_prf(*report.graded);
    }
  });
  return {std::move(artifact), std::move(report)};
}

inline TrainResult run_train(const PipelineConfig& config) {
  detail::run_stage("config", [&] { config.validate(); });
  return run_train(config, detail::run_stage("ingest", [&] { return load_configured_corpus(config); }));
}

struct NotePrediction {
  std::string id;
  int label = 0;
  std::vector<double> probabilities;  // aligned with the model's label map
};

inline std::vector<NotePrediction> run_predict(const ModelArtifact& artifact, std::span<const ClinicalNote> notes) {
  std::vector<NotePrediction> out;
  out.reserve(notes.size());
  for (const auto& n : notes) {
    auto p = artifact.predict_text(n.text);
    out.push_back({n.id, p.label, std::move(p.probabilities)});
  }
  return out;
}

inline std::string predictions_to_jsonl(const ModelArtifact& artifact, std::span<const NotePrediction> preds) {
  const auto names = class_names(artifact.pipeline.task);
  std::string out;
  for (const auto& p : preds) {
    nlohmann::ordered_json j;
    j["id"] = p.id;
    j["label"] = std::string(names[static_cast<std::size_t>(p.label)]);
    nlohmann::ordered_json probs = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < p.probabilities.size(); ++i)
      probs[std::string(names[static_cast<std::size_t>(artifact.model.label_map.label(i))])] = p.probabilities[i];
    j["probabilities"] = probs;
    out += j.dump() + "\n";
  }
  return out;
}

/// Scores an artifact against labelled notes; same metrics as training.
inline EvalReport evaluate_artifact(const ModelArtifact& artifact, const Corpus& corpus) {
  if (corpus.task() != artifact.pipeline.task) throw ConfigError("corpus task does not match the artifact's task");
  EvalReport r;
  r.task = corpus.task();
  r.model = artifact.model.kind;
  r.features = artifact.pipeline.features;
  r.config = artifact.config;
  for (const auto& [k, v] : artifact.config) {
    if (k == "seed") r.seed = std::stoull(v);
    if (k == "smote") r.smote = v == "on";
  }
  r.test_size = corpus.size();
  std::vector<int> pred;
  for (const auto& n : corpus.notes()) pred.push_back(artifact.predict_text(n.text).label);
  const auto truth = corpus.labels();
  r.confusion = confusion_matrix(truth, pred, class_count(corpus.task()));
  r.standard = standard_prf(r.confusion);
  if (corpus.task() == Task::Change) {
    r.graded = graded_counts(truth, pred);
    r.graded_metrics = graded_prf(*r.graded);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation grid (one row per model and feature set)

inline std::vector<EvalReport> run_evaluation_grid(const PipelineConfig& base, const Corpus& corpus,
                                                   std::span<const ModelKind> models,
                                                   std::span<const FeatureSet> feature_sets) {
  std::vector<EvalReport> out;
  for (auto m : models)
    for (auto f : feature_sets) {
      auto c = base;
      c.model = m;
      c.features = f;
      out.push_back(run_train(c, corpus).report);
    }
  return out;
}

inline std::string format_results_table(std::span<const EvalReport> reports) {
  std::ostringstream os;
  os << std::left << std::setw(22) << "Model" << std::setw(24) << "Feature" << std::right << std::setw(10)
     << "Precision" << std::setw(10) << "Recall" << std::setw(11) << "F-measure" << "\n";
  os << std::string(77, '-') << "\n";
  for (const auto& r : reports) {
    const auto h = r.headline();
    os << std::left << std::setw(22) << display_name(r.model) << std::setw(24) << display_name(r.features) << std::right
       << std::fixed << std::setprecision(2) << std::setw(10) << h.precision << std::setw(10) << h.recall
       << std::setw(11) << h.f_measure << "\n";
  }
  if (!reports.empty()) {
    const auto& r = reports.front();
    os << "\n# task=" << to_string(r.task) << " metrics=" << (r.graded ? "graded" : "weighted")
       << " smote=" << (r.smote ? "on" : "off") << " seed=" << r.seed << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Reports

enum class ReportKind { Ngrams, Topics, Coherence };

inline ReportKind parse_report_kind(std::string_view s) {
  if (s == "ngrams" || s == "ngram") return ReportKind::Ngrams;
  if (s == "topics") return ReportKind::Topics;
  if (s == "coherence") return ReportKind::Coherence;
  throw ConfigError("unknown report kind '" + std::string(s) + "' (expected ngrams|topics|coherence)");
}

namespace detail {

inline void report_header(std::ostream& os, std::string_view kind, const PipelineConfig& c) {
  os << "# painsift report: " << kind << "\n# seed: " << c.seed << "\n";
  for (const auto& [k, v] : c.snapshot()) os << "# config: " << k << "=" << v << "\n";
}

inline std::string format_score(double d) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << d;
  return os.str();
}

}  // namespace detail

/// n-gram profile table: exclusive terms per class, then shared terms, each
/// group by descending chi-squared.
inline std::string report_ngrams(const PipelineConfig& c, const Corpus& corpus) {
  const auto prep = make_preprocessor(c);
  std::vector<NgramBag> bags;
  for (const auto& n : corpus.notes()) bags.push_back(extract_ngrams(prep.tokenize(n.text), c.ngram_min, c.ngram_max));
  const auto names = class_names(corpus.task());
  const int num_classes = class_count(corpus.task());
  const auto labels = corpus.labels();
  const auto report = ngram_class_report(bags, labels, num_classes);

  std::ostringstream os;
  detail::report_header(os, "ngrams", c);
  os << "term\tclass_profile\tchi2";
  for (auto n : names) os << "\tdoc_freq:" << n;
  os << "\n";
  auto emit_group = [&](int cls) {
    std::size_t shown = 0;
    for (const auto& row : report.rows) {
      if (row.exclusive_class != cls) continue;
      if (c.report_top_ngrams && shown == c.report_top_ngrams) break;
      ++shown;
      os << row.term << "\t"
         << (cls < 0 ? std::string("shared") : "exclusive:" + std::string(names[static_cast<std::size_t>(cls)])) << "\t"
         << detail::format_score(row.chi2);
      for (auto df : row.doc_freq) os << "\t" << df;
      os << "\n";
    }
  };
  for (int cls = 0; cls < num_classes; ++cls) emit_group(cls);
  emit_group(-1);
  return os.str();
}

/// Per-class topic tables. Each class gets its own LDA run; words that appear
/// in no other class's topic lists are flagged with '*'.
inline std::string report_topics(const PipelineConfig& c, const Corpus& corpus) {
  const auto prep = make_preprocessor(c);
  const auto names = class_names(corpus.task());
  const auto labels = corpus.labels();
  const std::uint64_t seed = c.stage_seed(seed_offset::kLda);

  std::vector<std::pair<int, std::vector<std::vector<std::string>>>> per_class;
  for (int cls = 0; cls < class_count(corpus.task()); ++cls) {
    std::vector<TokenList> docs;
    for (std::size_t i = 0; i < corpus.size(); ++i)
      if (labels[i] == cls) docs.push_back(prep.tokenize(corpus[i].text));
    if (docs.empty()) continue;
    const auto lda_corpus = build_lda_corpus(docs);
    std::size_t k = c.report_topics_k;
    if (k == 0)
      k = select_topic_count(lda_corpus, {c.lda_k_range, c.lda_alpha, c.lda_beta, c.lda_iterations, seed, c.lda_top_m})
              .best;
    const auto model = train_lda(lda_corpus, {k, c.lda_alpha.alpha(k), c.lda_beta, c.lda_iterations, seed});
    std::vector<std::vector<std::string>> topics;
    for (std::size_t t = 0; t < k; ++t) topics.push_back(topic_top_words(model, t, c.report_top_words));
    per_class.emplace_back(cls, std::move(topics));
  }

  std::map<std::string, std::set<int>> word_classes;
  for (const auto& [cls, topics] : per_class)
    for (const auto& t : topics)
      for (const auto& w : t) word_classes[w].insert(cls);

  std::ostringstream os;
  detail::report_header(os, "topics", c);
  os << "class\ttopic\twords\n";
  for (const auto& [cls, topics] : per_class)
    for (std::size_t t = 0; t < topics.size(); ++t) {
      os << names[static_cast<std::size_t>(cls)] << "\t" << (t + 1) << "\t";
      for (std::size_t i = 0; i < topics[t].size(); ++i) {
        const auto& w = topics[t][i];
        os << (i ? ", " : "") << w << (word_classes[w].size() == 1 ? "*" : "");
      }
      os << "\n";
    }
  return os.str();
}

/// (K, mean UMass coherence) for every K in the configured range.
inline std::string report_coherence(const PipelineConfig& c, const Corpus& corpus) {
  if (c.lda_k_range.empty()) throw ConfigError("lda_k_range is empty");
  const auto prep = make_preprocessor(c);
  std::vector<TokenList> docs;
  for (const auto& n : corpus.notes()) docs.push_back(prep.tokenize(n.text));
  const auto sel = select_topic_count(build_lda_corpus(docs), {c.lda_k_range, c.lda_alpha, c.lda_beta,
                                                               c.lda_iterations, c.stage_seed(seed_offset::kLda),
                                                               c.lda_top_m});
  std::ostringstream os;
  detail::report_header(os, "coherence", c);
  os << "# best_k: " << sel.best << "\nk\tcoherence\n";
  for (const auto& [k, score] : sel.curve) os << k << "\t" << detail::format_score(score) << "\n";
  return os.str();
}

inline std::string run_report(const PipelineConfig& c, const Corpus& corpus, ReportKind kind) {
  switch (kind) {
    case ReportKind::Ngrams: return report_ngrams(c, corpus);
    case ReportKind::Topics: return report_topics(c, corpus);
    case ReportKind::Coherence: return report_coherence(c, corpus);
  }
  throw ConfigError("unknown report kind");
}

}  // namespace painsift
