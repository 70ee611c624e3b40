// painsift: train, evaluate and apply pain classifiers for clinical notes.
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 internal error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "painsift/painsift.hpp"

namespace {

using namespace painsift;

enum ExitCode { kOk = 0, kUsage = 1, kData = 2, kInternal = 3 };

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;  // key=value
  std::string seed, task, features, model, smote, smote_k, corpus, format, out;
  bool lda_on_full_corpus = false;
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  f << text;
  if (!f) throw ConfigError("failed writing '" + path + "'");
}

// Config file first, then --set overrides, then dedicated flags.
PipelineConfig build_config(const GlobalOptions& g) {
  PipelineConfig c;
  if (!g.config_path.empty()) c.merge_file(g.config_path);
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    c.set(detail::trim(kv.substr(0, eq)), kv.substr(eq + 1));
  }
  auto apply = [&](const char* key, const std::string& v) {
    if (!v.empty()) c.set(key, v);
  };
  apply("seed", g.seed);
  apply("task", g.task);
  apply("features", g.features);
  apply("model", g.model);
  apply("smote", g.smote);
  apply("smote_k", g.smote_k);
  apply("corpus", g.corpus);
  apply("corpus_format", g.format);
  if (g.lda_on_full_corpus) c.lda_on_full_corpus = true;
  return c;
}

std::vector<ModelKind> parse_models(const std::string& list) {
  if (list == "all") return {ModelKind::LogReg, ModelKind::Tree, ModelKind::Forest, ModelKind::Ffnn};
  std::vector<ModelKind> out;
  std::istringstream in(list);
  for (std::string m; std::getline(in, m, ',');) out.push_back(parse_model_kind(detail::trim(m)));
  return out;
}

std::vector<FeatureSet> parse_feature_sets(const std::string& list) {
  if (list == "all") return {FeatureSet::Linguistic, FeatureSet::Topical, FeatureSet::Combined};
  std::vector<FeatureSet> out;
  std::istringstream in(list);
  for (std::string f; std::getline(in, f, ',');) out.push_back(parse_feature_set(detail::trim(f)));
  return out;
}

int cmd_train(const GlobalOptions& g, const std::string& report_path) {
  auto c = build_config(g);
  if (!g.out.empty()) c.artifact_out = g.out;
  if (!report_path.empty()) c.report_out = report_path;
  const auto result = run_train(c);
  if (c.artifact_out.empty()) throw ConfigError("no artifact path (use --out or the 'out' config key)");
  write_output(c.artifact_out, result.artifact.to_json());
  if (!c.report_out.empty()) write_output(c.report_out, result.report.to_json().dump(2) + "\n");
  const auto h = result.report.headline();
  std::cerr << "trained " << to_string(c.model) << " on " << to_string(c.features) << " features: " << "train="
            << result.report.train_size << " test=" << result.report.test_size << " P=" << h.precision
            << " R=" << h.recall << " F=" << h.f_measure << (result.report.graded ? " (graded)" : " (weighted)")
            << "\n";
  return kOk;
}

int cmd_evaluate(const GlobalOptions& g, const std::string& artifact_path, const std::string& input,
                 const std::string& models, const std::string& feature_sets, const std::string& json_path) {
  auto c = build_config(g);
  if (!artifact_path.empty()) {
    const auto artifact = ModelArtifact::load(artifact_path);
    const auto path = input.empty() ? c.corpus : input;
    if (path.empty()) throw ConfigError("evaluate --artifact needs --input");
    const auto format = c.corpus_format.empty() ? guess_corpus_format(path) : parse_corpus_format(c.corpus_format);
    const auto report = evaluate_artifact(artifact, load_corpus(path, format, artifact.pipeline.task));
    const std::vector<EvalReport> rows{report};
    if (!json_path.empty()) write_output(json_path, report.to_json().dump(2) + "\n");
    write_output(g.out, format_results_table(rows));
    return kOk;
  }
  c.validate();
  const auto corpus = load_configured_corpus(c);
  const auto model_list = parse_models(models.empty() ? (g.model.empty() ? "all" : g.model) : models);
  const auto feature_list =
      parse_feature_sets(feature_sets.empty() ? (g.features.empty() ? "all" : g.features) : feature_sets);
  const auto reports = run_evaluation_grid(c, corpus, model_list, feature_list);
  if (!json_path.empty()) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) arr.push_back(r.to_json());
    write_output(json_path, arr.dump(2) + "\n");
  }
  write_output(g.out, format_results_table(reports));
  return kOk;
}

int cmd_predict(const GlobalOptions& g, const std::string& artifact_path, const std::string& input,
                const std::string& text) {
  if (artifact_path.empty()) throw ConfigError("predict needs --artifact");
  const auto artifact = ModelArtifact::load(artifact_path);
  std::vector<ClinicalNote> notes;
  if (!text.empty()) {
    notes.push_back({"cli", "", text, std::nullopt, std::nullopt});
  } else {
    if (input.empty()) throw ConfigError("predict needs --input or --text");
    const auto format = g.format.empty() ? guess_corpus_format(input) : parse_corpus_format(g.format);
    notes = read_notes(input, format);
  }
  const auto preds = run_predict(artifact, notes);
  write_output(g.out, predictions_to_jsonl(artifact, preds));
  return kOk;
}

int cmd_report(const GlobalOptions& g, const std::string& kind) {
  auto c = build_config(g);
  const auto report_kind = parse_report_kind(kind);
  const auto corpus = load_configured_corpus(c);
  write_output(g.out, run_report(c, corpus, report_kind));
  return kOk;
}

int cmd_synth(const GlobalOptions& g, std::size_t per_class, double noise_rate, const std::string& out_format) {
  auto c = build_config(g);
  const auto spec = planted_spec(c.task, per_class, noise_rate);
  const auto corpus = generate_synthetic_corpus(spec, c.seed);
  std::ostringstream os;
  const auto format = out_format.empty() ? guess_corpus_format(g.out) : parse_corpus_format(out_format);
  if (format == CorpusFormat::Csv)
    write_csv(os, corpus.notes());
  else
    write_jsonl(os, corpus.notes());
  write_output(g.out, os.str());
  return kOk;
}

int cmd_config(const GlobalOptions& g) {
  const auto c = build_config(g);
  std::ostringstream os;
  for (const auto& k : detail::config_keys()) os << "# " << k.doc << "\n" << k.key << " = " << k.get(c) << "\n\n";
  write_output(g.out, os.str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"painsift: pain relevance and pain change classification for clinical notes"};
  app.require_subcommand(1);
  GlobalOptions g;

  app.add_option("--config", g.config_path, "flat key=value configuration file");
  app.add_option("--set", g.overrides, "override one config key (key=value); repeatable");
  app.add_option("--seed", g.seed, "master seed");
  app.add_option("--task", g.task, "relevance | change");
  app.add_option("--features", g.features, "linguistic | topical | combined");
  app.add_option("--model", g.model, "lr | dt | rf | ffnn");
  app.add_option("--smote", g.smote, "on | off");
  app.add_option("--smote-k", g.smote_k, "SMOTE neighbour count");
  app.add_option("--corpus", g.corpus, "labelled corpus (JSONL or CSV)");
  app.add_option("--format", g.format, "jsonl | csv (default: from extension)");
  app.add_option("--out", g.out, "output path (default: stdout where applicable)");
  app.add_flag("--lda-on-full-corpus", g.lda_on_full_corpus, "fit LDA on train and test text");

  std::string report_path, artifact_path, input, models, feature_sets, json_path, text, kind, synth_format;
  std::size_t per_class = 100;
  double noise_rate = 0.3;

  auto* train = app.add_subcommand("train", "train one model and evaluate it on the held-out split");
  train->add_option("--report", report_path, "write the evaluation report (JSON) here");
  auto* evaluate = app.add_subcommand("evaluate", "results table over models x feature sets, or score an artifact");
  evaluate->add_option("--artifact", artifact_path, "score this artifact instead of training");
  evaluate->add_option("--input", input, "labelled notes for --artifact");
  evaluate->add_option("--models", models, "comma list of lr,dt,rf,ffnn or 'all'");
  evaluate->add_option("--feature-sets", feature_sets, "comma list of linguistic,topical,combined or 'all'");
  evaluate->add_option("--json", json_path, "also write the reports as JSON");
  auto* predict_cmd = app.add_subcommand("predict", "label notes with a trained artifact");
  predict_cmd->add_option("--artifact", artifact_path, "trained artifact")->required();
  predict_cmd->add_option("--input", input, "notes to label (JSONL or CSV; labels optional)");
  predict_cmd->add_option("--text", text, "label a single note given inline");
  auto* report = app.add_subcommand("report", "n-gram, topic or coherence tables as TSV");
  report->add_option("kind", kind, "ngrams | topics | coherence")->required();
  auto* synth = app.add_subcommand("synth", "generate a planted synthetic corpus");
  synth->add_option("--notes-per-class", per_class, "notes per class");
  synth->add_option("--noise-rate", noise_rate, "probability of drawing a token from the shared pool");
  synth->add_option("--output-format", synth_format, "jsonl | csv (default: from --out extension)");
  app.add_subcommand("config", "print every config key with its documentation and current value");

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*train) return cmd_train(g, report_path);
    if (*evaluate) return cmd_evaluate(g, artifact_path, input, models, feature_sets, json_path);
    if (*predict_cmd) return cmd_predict(g, artifact_path, input, text);
    if (*report) return cmd_report(g, kind);
    if (*synth) return cmd_synth(g, per_class, noise_rate, synth_format);
    return cmd_config(g);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const TrainingError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
