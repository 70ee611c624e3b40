#include <map>

#include <gtest/gtest.h>

#include "painsift/balance.hpp"

namespace painsift {
namespace {

std::map<int, std::size_t> counts(const std::vector<int>& y) {
  std::map<int, std::size_t> c;
  for (int v : y) ++c[v];
  return c;
}

// Largest distance from a synthetic row to the line through its parents,
// and the interpolation parameter along it.
std::pair<double, double> segment_fit(std::span<const double> s, std::span<const double> a,
                                      std::span<const double> b) {
  double dd = 0.0, sd = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dd += (b[i] - a[i]) * (b[i] - a[i]);
    sd += (s[i] - a[i]) * (b[i] - a[i]);
  }
  const double u = dd > 0 ? sd / dd : 0.0;
  double off = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) off = std::max(off, std::abs(a[i] + u * (b[i] - a[i]) - s[i]));
  return {off, u};
}

TEST(Smote, BalancedInputUnchanged) {
  const auto data = LabeledMatrix::real(Matrix::from_rows({{0, 1}, {1, 0}, {2, 2}, {3, 1}}), {0, 1, 0, 1});
  const auto out = smote(data, 5, 1);
  EXPECT_EQ(out.rows, data.rows);
  EXPECT_EQ(out.labels, data.labels);
}

TEST(Smote, TwoPointMinorityLiesOnSegment) {
  const auto data = LabeledMatrix::real(Matrix::from_rows({{0, 0}, {2, 2}, {5, 5}, {6, 5}, {7, 5}}), {1, 1, 0, 0, 0});
  const auto out = smote(data, 1, 3);
  ASSERT_EQ(out.size(), 6u);
  const auto s = out.rows.row(5);
  EXPECT_EQ(out.labels[5], 1);
  EXPECT_DOUBLE_EQ(s[0], s[1]);
  EXPECT_GE(s[0], 0.0);
  EXPECT_LE(s[0], 2.0);
}

TEST(Smote, NineVersusThree) {
  Matrix x;
  std::vector<int> y;
  for (int i = 0; i < 12; ++i) {
    x.append_row(std::vector<double>{static_cast<double>(i), static_cast<double>(i * i % 7)});
    y.push_back(i < 9 ? 0 : 1);
  }
  const auto out = smote(LabeledMatrix::real(x, y), 5, 8);
  EXPECT_EQ(out.size(), 18u);
  EXPECT_EQ(counts(out.labels), (std::map<int, std::size_t>{{0, 9}, {1, 9}}));
  for (std::size_t i = 12; i < 18; ++i) {
    EXPECT_TRUE(out.origins[i].synthetic);
    EXPECT_GE(out.origins[i].base, 9u);
    EXPECT_GE(out.origins[i].neighbor, 9u);
    EXPECT_NE(out.origins[i].base, out.origins[i].neighbor);
  }
}

TEST(Smote, SingleSampleClassRejected) {
  const auto data = LabeledMatrix::real(Matrix::from_rows({{0}, {1}, {2}}), {0, 0, 1});
  EXPECT_THROW(smote(data, 5, 0), DataError);
  EXPECT_THROW(smote(data, 0, 0), std::invalid_argument);
}

TEST(Smote, RandomDatasetsProperties) {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t classes = 2 + rng.below(3), cols = 1 + rng.below(6);
    Matrix x;
    std::vector<int> y;
    for (std::size_t c = 0; c < classes; ++c) {
      const auto n = 2 + rng.below(20);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(cols);
        for (auto& v : row) v = 10.0 * rng.uniform() - 5.0;
        x.append_row(row);
        y.push_back(static_cast<int>(c));
      }
    }
    const auto data = LabeledMatrix::real(x, y);
    const auto seed = rng.next();
    const auto k = 1 + rng.below(6);
    const auto out = smote(data, k, seed);

    std::size_t majority = 0;
    for (auto [c, n] : counts(y)) majority = std::max(majority, n);
    for (auto [c, n] : counts(out.labels)) EXPECT_EQ(n, majority);
    for (std::size_t i = 0; i < data.size(); ++i) {
      EXPECT_FALSE(out.origins[i].synthetic);
      EXPECT_EQ(out.labels[i], y[i]);
      for (std::size_t j = 0; j < cols; ++j) EXPECT_EQ(out.rows(i, j), x(i, j));
    }
    for (std::size_t i = data.size(); i < out.size(); ++i) {
      const auto& o = out.origins[i];
      ASSERT_TRUE(o.synthetic);
      EXPECT_EQ(y[o.base], out.labels[i]);
      EXPECT_EQ(y[o.neighbor], out.labels[i]);
      const auto [off, u] = segment_fit(out.rows.row(i), x.row(o.base), x.row(o.neighbor));
      EXPECT_LE(off, 1e-9);
      EXPECT_GE(u, -1e-9);
      EXPECT_LE(u, 1.0 + 1e-9);
    }
    const auto again = smote(data, k, seed);
    EXPECT_EQ(again.rows, out.rows);
    EXPECT_EQ(again.origins, out.origins);
  }
}

TEST(Smote, DeterministicPerSeed) {
  Matrix x;
  std::vector<int> y;
  Rng rng(1);
  for (int i = 0; i < 30; ++i) {
    x.append_row(std::vector<double>{rng.uniform(), rng.uniform(), rng.uniform()});
    y.push_back(i % 4 == 0 ? 1 : 0);
  }
  const auto data = LabeledMatrix::real(x, y);
  const auto a = smote(data, 3, 77), b = smote(data, 3, 77), c = smote(data, 3, 78);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.origins, b.origins);
  EXPECT_NE(a.rows, c.rows);
}

}  // namespace
}  // namespace painsift
