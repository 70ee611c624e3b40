#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "painsift/models/common.hpp"
#include "painsift/random.hpp"

namespace painsift {

/// One ReLU hidden layer followed by a softmax output layer.
struct FfnnParams {
  Matrix w1;                // hidden x inputs
  std::vector<double> b1;   // hidden
  Matrix w2;                // classes x hidden
  std::vector<double> b2;   // classes

  friend bool operator==(const FfnnParams&, const FfnnParams&) = default;
};

struct FfnnOptions {
  std::size_t hidden = 64;
  double learning_rate = 0.05;
  std::size_t epochs = 200;
  std::size_t batch_size = 16;
};

/// Weights uniform in +-1/sqrt(fan_in), biases zero.
inline FfnnParams ffnn_init(std::size_t inputs, std::size_t hidden, std::size_t classes, Rng& rng) {
  FfnnParams p{Matrix(hidden, inputs), std::vector<double>(hidden, 0.0), Matrix(classes, hidden),
               std::vector<double>(classes, 0.0)};
  const double r1 = 1.0 / std::sqrt(static_cast<double>(std::max<std::size_t>(inputs, 1)));
  const double r2 = 1.0 / std::sqrt(static_cast<double>(hidden));
  for (auto& w : p.w1.data()) w = (2.0 * rng.uniform() - 1.0) * r1;
  for (auto& w : p.w2.data()) w = (2.0 * rng.uniform() - 1.0) * r2;
  return p;
}

namespace detail {

struct FfnnForward {
  std::vector<double> hidden;  // post-ReLU
  std::vector<double> prob;
};

// Count features are mostly zero, so products run over the non-zero inputs.
inline std::vector<std::size_t> nonzero_indices(std::span<const double> x) {
  std::vector<std::size_t> nz;
  for (std::size_t j = 0; j < x.size(); ++j)
    if (x[j] != 0.0) nz.push_back(j);
  return nz;
}

inline FfnnForward ffnn_forward(const FfnnParams& p, std::span<const double> x, std::span<const std::size_t> nz) {
  FfnnForward f{p.b1, p.b2};
  for (std::size_t h = 0; h < f.hidden.size(); ++h) {
    const auto w = p.w1.row(h);
    double z = f.hidden[h];
    for (auto j : nz) z += w[j] * x[j];
    f.hidden[h] = z > 0.0 ? z : 0.0;
  }
  for (std::size_t c = 0; c < f.prob.size(); ++c) {
    const auto w = p.w2.row(c);
    for (std::size_t h = 0; h < f.hidden.size(); ++h) f.prob[c] += w[h] * f.hidden[h];
  }
  softmax_inplace(f.prob);
  return f;
}

}  // namespace detail

inline std::vector<double> ffnn_probabilities(const FfnnParams& p, std::span<const double> x) {
  return detail::ffnn_forward(p, x, detail::nonzero_indices(x)).prob;
}

struct FfnnGradient {
  double loss = 0.0;
  FfnnParams grad;
};

/// Mean cross-entropy over `rows` of x and its backpropagated gradient.
inline FfnnGradient ffnn_loss_gradient(const FfnnParams& p, const Matrix& x, std::span<const int> y,
                                       std::span<const std::size_t> rows) {
  FfnnGradient g{0.0,
                 {Matrix(p.w1.rows(), p.w1.cols()), std::vector<double>(p.b1.size(), 0.0),
                  Matrix(p.w2.rows(), p.w2.cols()), std::vector<double>(p.b2.size(), 0.0)}};
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  std::vector<double> d_hidden(p.b1.size());
  for (auto i : rows) {
    const auto xi = x.row(i);
    const auto nz = detail::nonzero_indices(xi);
    auto f = detail::ffnn_forward(p, xi, nz);
    const auto yi = static_cast<std::size_t>(y[i]);
    g.loss -= std::log(std::max(f.prob[yi], 1e-300)) * inv_n;
    f.prob[yi] -= 1.0;
    std::fill(d_hidden.begin(), d_hidden.end(), 0.0);
    for (std::size_t c = 0; c < f.prob.size(); ++c) {
      const double dz = f.prob[c] * inv_n;
      g.grad.b2[c] += dz;
      auto dw = g.grad.w2.row(c);
      const auto w = p.w2.row(c);
      for (std::size_t h = 0; h < f.hidden.size(); ++h) {
        dw[h] += dz * f.hidden[h];
        d_hidden[h] += dz * w[h];
      }
    }
    for (std::size_t h = 0; h < d_hidden.size(); ++h) {
      if (f.hidden[h] <= 0.0) continue;
      g.grad.b1[h] += d_hidden[h];
      auto dw = g.grad.w1.row(h);
      for (auto j : nz) dw[j] += d_hidden[h] * xi[j];
    }
  }
  return g;
}

inline double ffnn_loss(const FfnnParams& p, const Matrix& x, std::span<const int> y) {
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    loss -= std::log(std::max(ffnn_probabilities(p, x.row(i))[static_cast<std::size_t>(y[i])], 1e-300));
  return loss / static_cast<double>(x.rows());
}

struct FfnnFit {
  FfnnParams params;
  std::vector<double> loss_history;  // full-data loss before each epoch
};

/// Mini-batch gradient descent. Row order is reshuffled every epoch from the
/// seeded stream, so the batch sequence is fixed for a given seed.
inline FfnnFit train_ffnn(const Matrix& x, std::span<const int> y, std::size_t classes, const FfnnOptions& opt,
                          std::uint64_t seed) {
  require_training_set(x, y, 2);
  require_finite(x);
  if (classes < 2) throw DataError("FFNN needs at least two classes");
  if (opt.hidden < 1 || opt.batch_size < 1) throw std::invalid_argument("FFNN hidden size and batch size must be positive");
  Rng rng(seed);
  FfnnFit fit{ffnn_init(x.cols(), opt.hidden, classes, rng), {}};
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);

  auto step = [&](FfnnParams& p, const FfnnParams& g) {
    auto apply = [&](std::span<double> w, std::span<const double> d) {
      for (std::size_t j = 0; j < w.size(); ++j) w[j] -= opt.learning_rate * d[j];
    };
    apply(p.w1.data(), g.w1.data());
    apply(p.b1, g.b1);
    apply(p.w2.data(), g.w2.data());
    apply(p.b2, g.b2);
  };

  for (std::size_t e = 0; e < opt.epochs; ++e) {
    const double loss = ffnn_loss(fit.params, x, y);
    if (!std::isfinite(loss)) throw TrainingError("FFNN training diverged (non-finite loss); lower the learning rate");
    fit.loss_history.push_back(loss);
    rng.shuffle(std::span(order));
    for (std::size_t start = 0; start < order.size(); start += opt.batch_size) {
      const auto len = std::min(opt.batch_size, order.size() - start);
      const auto g = ffnn_loss_gradient(fit.params, x, y, std::span(order).subspan(start, len));
      if (!std::isfinite(g.loss)) throw TrainingError("FFNN training diverged (non-finite loss); lower the learning rate");
      step(fit.params, g.grad);
    }
  }
  for (double v : fit.params.w1.data())
    if (!std::isfinite(v)) throw TrainingError("FFNN training diverged (non-finite weights); lower the learning rate");
  return fit;
}

}  // namespace painsift
