#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "painsift/models/common.hpp"

namespace painsift {

/// Multinomial logistic regression weights over dense class indices.
struct LogRegParams {
  Matrix weights;             // classes x features
  std::vector<double> bias;   // classes

  friend bool operator==(const LogRegParams&, const LogRegParams&) = default;
};

struct LogRegOptions {
  double learning_rate = 0.1;
  std::size_t epochs = 300;
  double l2 = 1e-4;
};

inline std::vector<double> logreg_probabilities(const LogRegParams& p, std::span<const double> x) {
  std::vector<double> z(p.bias);
  for (std::size_t c = 0; c < z.size(); ++c) {
    const auto w = p.weights.row(c);
    for (std::size_t j = 0; j < x.size(); ++j) z[c] += w[j] * x[j];
  }
  softmax_inplace(z);
  return z;
}

struct LogRegGradient {
  double loss = 0.0;
  Matrix d_weights;
  std::vector<double> d_bias;
};

/// Mean cross-entropy plus l2 * |W|^2 / 2 (bias unpenalised) and its gradient.
/// `y` holds dense class indices.
inline LogRegGradient logreg_loss_gradient(const LogRegParams& p, const Matrix& x, std::span<const int> y, double l2) {
  const auto n = x.rows();
  const auto classes = p.bias.size();
  LogRegGradient g{0.0, Matrix(classes, x.cols()), std::vector<double>(classes, 0.0)};
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto prob = logreg_probabilities(p, x.row(i));
    const auto yi = static_cast<std::size_t>(y[i]);
    g.loss -= std::log(std::max(prob[yi], 1e-300)) * inv_n;
    prob[yi] -= 1.0;
    const auto xi = x.row(i);
    for (std::size_t c = 0; c < classes; ++c) {
      const double r = prob[c] * inv_n;
      g.d_bias[c] += r;
      auto dw = g.d_weights.row(c);
      for (std::size_t j = 0; j < xi.size(); ++j) dw[j] += r * xi[j];
    }
  }
  const auto w = p.weights.data();
  auto dw = g.d_weights.data();
  double sq = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    sq += w[j] * w[j];
    dw[j] += l2 * w[j];
  }
  g.loss += 0.5 * l2 * sq;
  return g;
}

struct LogRegFit {
  LogRegParams params;
  std::vector<double> loss_history;  // loss before each epoch's update
};

/// Full-batch gradient descent from zero weights.
inline LogRegFit train_logreg(const Matrix& x, std::span<const int> y, std::size_t classes, const LogRegOptions& opt) {
  require_training_set(x, y, 2);
  require_finite(x);
  if (classes < 2) throw DataError("logistic regression needs at least two classes");
  LogRegFit fit{{Matrix(classes, x.cols()), std::vector<double>(classes, 0.0)}, {}};
  fit.loss_history.reserve(opt.epochs);
  for (std::size_t e = 0; e < opt.epochs; ++e) {
    const auto g = logreg_loss_gradient(fit.params, x, y, opt.l2);
    if (!std::isfinite(g.loss)) throw TrainingError("logistic regression diverged; lower the learning rate");
    fit.loss_history.push_back(g.loss);
    auto w = fit.params.weights.data();
    const auto dw = g.d_weights.data();
    for (std::size_t j = 0; j < w.size(); ++j) w[j] -= opt.learning_rate * dw[j];
    for (std::size_t c = 0; c < classes; ++c) fit.params.bias[c] -= opt.learning_rate * g.d_bias[c];
  }
  return fit;
}

}  // namespace painsift
