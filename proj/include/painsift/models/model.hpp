#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "painsift/features.hpp"
#include "painsift/models/common.hpp"
#include "painsift/models/ffnn.hpp"
#include "painsift/models/forest.hpp"
#include "painsift/models/logreg.hpp"
#include "painsift/models/tree.hpp"

namespace painsift {

enum class ModelKind { LogReg, Tree, Forest, Ffnn };

inline std::string_view to_string(ModelKind k) {
  switch (k) {
    case ModelKind::LogReg: return "lr";
    case ModelKind::Tree: return "dt";
    case ModelKind::Forest: return "rf";
    case ModelKind::Ffnn: return "ffnn";
  }
  return "?";
}

inline std::string_view display_name(ModelKind k) {
  switch (k) {
    case ModelKind::LogReg: return "Logistic Regression";
    case ModelKind::Tree: return "Decision Trees";
    case ModelKind::Forest: return "Random Forest";
    case ModelKind::Ffnn: return "FFNN";
  }
  return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
  if (s == "lr") return ModelKind::LogReg;
  if (s == "dt") return ModelKind::Tree;
  if (s == "rf") return ModelKind::Forest;
  if (s == "ffnn") return ModelKind::Ffnn;
  throw ConfigError("unknown model '" + std::string(s) + "' (expected lr|dt|rf|ffnn)");
}

struct ModelOptions {
  LogRegOptions logreg;
  TreeOptions tree;
  ForestOptions forest;
  FfnnOptions ffnn;
};

struct TrainedModel {
  ModelKind kind = ModelKind::LogReg;
  std::variant<LogRegParams, TreeParams, ForestParams, FfnnParams> params;
  LabelMap label_map;
  FeatureLayout layout;
  std::uint64_t seed = 0;

  friend bool operator==(const TrainedModel&, const TrainedModel&) = default;
};

struct Prediction {
  int label = 0;
  std::vector<double> probabilities;  // aligned with the model's label map
};

/// Trains one classifier family on rows of `x` whose columns follow `layout`.
/// `y` holds task labels; they are mapped to dense indices internally.
inline TrainedModel train_model(ModelKind kind, const Matrix& x, std::span<const int> y, const FeatureLayout& layout,
                                const ModelOptions& opt, std::uint64_t seed) {
  if (x.cols() != layout.size()) throw LayoutError("training matrix width does not match the feature layout");
  TrainedModel m{kind, LogRegParams{}, LabelMap::from_targets(y), layout, seed};
  const auto dense = m.label_map.encode(y);
  const auto classes = m.label_map.size();
  switch (kind) {
    case ModelKind::LogReg: m.params = train_logreg(x, dense, classes, opt.logreg).params; break;
    case ModelKind::Tree: m.params = train_tree(x, dense, classes, opt.tree); break;
    case ModelKind::Forest: m.params = train_forest(x, dense, classes, opt.forest, seed); break;
    case ModelKind::Ffnn: m.params = train_ffnn(x, dense, classes, opt.ffnn, seed).params; break;
  }
  return m;
}

/// Class probabilities for a raw row (softmax for lr/ffnn, leaf fractions for
/// dt, vote fractions for rf).
inline std::vector<double> predict_proba(const TrainedModel& m, std::span<const double> x) {
  if (x.size() != m.layout.size())
    throw LayoutError("feature vector has length " + std::to_string(x.size()) + ", model expects " +
                      std::to_string(m.layout.size()));
  return std::visit(
      [&](const auto& p) -> std::vector<double> {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogRegParams>) return logreg_probabilities(p, x);
        else if constexpr (std::is_same_v<P, TreeParams>) return tree_probabilities(p, x);
        else if constexpr (std::is_same_v<P, ForestParams>) return forest_votes(p, x, m.label_map.size());
        else return ffnn_probabilities(p, x);
      },
      m.params);
}

inline Prediction predict(const TrainedModel& m, const FeatureVector& x) {
  if (!(x.layout == m.layout))
    throw LayoutError("feature layout (" + std::to_string(x.layout.linguistic) + "," + std::to_string(x.layout.topical) +
                      ") does not match the model's (" + std::to_string(m.layout.linguistic) + "," +
                      std::to_string(m.layout.topical) + ")");
  if (x.values.size() != x.layout.size()) throw LayoutError("feature vector length disagrees with its layout");
  Prediction p;
  p.probabilities = predict_proba(m, x.values);
  p.label = m.label_map.label(argmax(p.probabilities));
  return p;
}

// ---------------------------------------------------------------------------
// JSON

using ojson = nlohmann::ordered_json;

inline ojson matrix_to_json(const Matrix& m) {
  return ojson{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::vector<double>(m.data().begin(), m.data().end())}};
}

inline Matrix matrix_from_json(const ojson& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  const auto data = j.at("data").get<std::vector<double>>();
  if (data.size() != m.data().size()) throw DataError("matrix payload has the wrong size");
  std::copy(data.begin(), data.end(), m.data().begin());
  return m;
}

inline ojson tree_to_json(const TreeParams& t) {
  ojson nodes = ojson::array();
  for (const auto& n : t.nodes) {
    if (n.is_leaf())
      nodes.push_back({{"label", n.label}, {"histogram", n.histogram}});
    else
      nodes.push_back({{"feature", n.feature}, {"threshold", n.threshold}, {"left", n.left}, {"right", n.right}});
  }
  return nodes;
}

inline TreeParams tree_from_json(const ojson& j) {
  TreeParams t;
  for (const auto& n : j) {
    TreeNode node;
    if (n.contains("feature")) {
      node.feature = n.at("feature").get<int>();
      node.threshold = n.at("threshold").get<double>();
      node.left = n.at("left").get<int>();
      node.right = n.at("right").get<int>();
    } else {
      node.label = n.at("label").get<int>();
      node.histogram = n.at("histogram").get<std::vector<double>>();
      if (node.histogram.empty()) throw DataError("tree leaf has an empty histogram");
    }
    t.nodes.push_back(std::move(node));
  }
  const auto n_nodes = static_cast<int>(t.nodes.size());
  if (n_nodes == 0) throw DataError("tree has no nodes");
  for (const auto& n : t.nodes)
    if (!n.is_leaf() && (n.left <= 0 || n.right <= 0 || n.left >= n_nodes || n.right >= n_nodes))
      throw DataError("tree node has an invalid child index");
  return t;
}

inline ojson model_to_json(const TrainedModel& m) {
  ojson j;
  j["kind"] = std::string(to_string(m.kind));
  j["label_map"] = m.label_map.labels();
  j["layout"] = {{"linguistic", m.layout.linguistic}, {"topical", m.layout.topical}};
  j["seed"] = m.seed;
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, LogRegParams>) {
          j["params"] = {{"weights", matrix_to_json(p.weights)}, {"bias", p.bias}};
        } else if constexpr (std::is_same_v<P, TreeParams>) {
          j["params"] = {{"nodes", tree_to_json(p)}};
        } else if constexpr (std::is_same_v<P, ForestParams>) {
          ojson trees = ojson::array();
          for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
          j["params"] = {{"trees", trees}};
        } else {
          j["params"] = {{"w1", matrix_to_json(p.w1)}, {"b1", p.b1}, {"w2", matrix_to_json(p.w2)}, {"b2", p.b2}};
        }
      },
      m.params);
  return j;
}

inline TrainedModel model_from_json(const ojson& j) {
  TrainedModel m;
  m.kind = parse_model_kind(j.at("kind").get<std::string>());
  m.label_map = LabelMap(j.at("label_map").get<std::vector<int>>());
  m.layout = {j.at("layout").at("linguistic").get<std::size_t>(), j.at("layout").at("topical").get<std::size_t>()};
  m.seed = j.at("seed").get<std::uint64_t>();
  const auto& p = j.at("params");
  switch (m.kind) {
    case ModelKind::LogReg:
      m.params = LogRegParams{matrix_from_json(p.at("weights")), p.at("bias").get<std::vector<double>>()};
      break;
    case ModelKind::Tree: m.params = tree_from_json(p.at("nodes")); break;
    case ModelKind::Forest: {
      ForestParams f;
      for (const auto& t : p.at("trees")) f.trees.push_back(tree_from_json(t));
      m.params = std::move(f);
      break;
    }
    case ModelKind::Ffnn:
      m.params = FfnnParams{matrix_from_json(p.at("w1")), p.at("b1").get<std::vector<double>>(),
                            matrix_from_json(p.at("w2")), p.at("b2").get<std::vector<double>>()};
      break;
  }
  return m;
}

}  // namespace painsift
