#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slim/eval.hpp"

namespace slim {
namespace {

TEST(Metrics, WorkedExample) {
  const std::vector<int> pred{1, 1, 0, 0}, y{1, 0, 0, 1};
  const std::vector<double> s{0.9, 0.8, 0.3, 0.2};
  const auto m = compute_metrics(pred, s, y);
  EXPECT_NEAR(m.accuracy, oracle::accuracy(pred, y), 1e-15);
  EXPECT_NEAR(m.macro_f1, oracle::macro_f1(pred, y), 1e-15);
  EXPECT_NEAR(*m.auc, oracle::auc_pairs(s, y), 1e-15);
  EXPECT_DOUBLE_EQ(m.accuracy, 0.5);
  EXPECT_DOUBLE_EQ(m.macro_f1, 0.5);
  EXPECT_DOUBLE_EQ(*m.auc, 0.5);
}

TEST(Metrics, RandomInputsMatchOracles) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto n = 1 + uniform_below(rng, 100);
    std::vector<int> pred(n), y(n);
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = static_cast<int>(uniform_below(rng, 2));
      y[i] = static_cast<int>(uniform_below(rng, 2));
      // coarse scores so ties are common
      s[i] = static_cast<double>(uniform_below(rng, 5)) / 4.0;
    }
    const auto m = compute_metrics(pred, s, y);
    EXPECT_NEAR(m.accuracy, oracle::accuracy(pred, y), 1e-12);
    EXPECT_NEAR(m.macro_f1, oracle::macro_f1(pred, y), 1e-12);
    const bool both = std::count(y.begin(), y.end(), 1) > 0 && std::count(y.begin(), y.end(), 0) > 0;
    ASSERT_EQ(m.auc.has_value(), both);
    if (both) {
      EXPECT_NEAR(*m.auc, oracle::auc_pairs(s, y), 1e-12);
    }
  }
}

TEST(Metrics, EdgeCases) {
  const std::vector<int> all1{1, 1, 1};
  const std::vector<double> s{0.1, 0.2, 0.3};
  const auto m = compute_metrics(all1, s, all1);
  EXPECT_DOUBLE_EQ(m.accuracy, 1.0);
  EXPECT_DOUBLE_EQ(m.macro_f1, 0.5);  // class 0 never appears: its F1 counts as 0
  EXPECT_FALSE(m.auc.has_value());
  const std::vector<int> y{0, 1};
  const std::vector<double> tied{0.5, 0.5};
  EXPECT_DOUBLE_EQ(*auc_score(tied, y), 0.5);
  EXPECT_THROW(compute_metrics(std::vector<int>{}, std::vector<double>{}, std::vector<int>{}), ValidationError);
  EXPECT_THROW(compute_metrics(y, s, y), ValidationError);
}

TEST(Welch, ClearlySeparatedGroupsAreHighlySignificant) {
  const std::vector<double> a{0.90, 0.91, 0.89, 0.905, 0.895}, b{0.80, 0.81, 0.79, 0.805, 0.795};
  const auto r = welch_test(a, b);
  EXPECT_LT(r.p_value, 0.01);
  EXPECT_EQ(r.marker, Significance::p01);
  EXPECT_EQ(marker(r.marker), "**");
}

TEST(Welch, StatisticAndDegreesOfFreedomByHand) {
  const std::vector<double> a{0.82, 0.85, 0.79, 0.88, 0.81}, b{0.80, 0.78, 0.83, 0.76, 0.79, 0.81};
  // Hand-expanded: means, (n-1) variances, Welch-Satterthwaite.
  double ma = 0, mb = 0;
  for (double x : a) ma += x / 5;
  for (double x : b) mb += x / 6;
  double va = 0, vb = 0;
  for (double x : a) va += (x - ma) * (x - ma) / 4;
  for (double x : b) vb += (x - mb) * (x - mb) / 5;
  const double t = (ma - mb) / std::sqrt(va / 5 + vb / 6);
  const double df = std::pow(va / 5 + vb / 6, 2) / (std::pow(va / 5, 2) / 4 + std::pow(vb / 6, 2) / 5);
  const auto r = welch_test(a, b);
  EXPECT_NEAR(r.t, t, 1e-12);
  EXPECT_NEAR(r.df, df, 1e-9);
  EXPECT_NEAR(r.p_value, oracle::t_two_tailed_simpson(t, df), 1e-8);
}

TEST(Welch, PValuesMatchNumericIntegration) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> a(2 + uniform_below(rng, 8)), b(2 + uniform_below(rng, 8));
    const double shift = 0.3 * standard_normal(rng);
    for (auto& x : a) x = 0.8 + 0.05 * standard_normal(rng) + shift * 0.1;
    for (auto& x : b) x = 0.8 + 0.03 * standard_normal(rng);
    const auto r = welch_test(a, b);
    EXPECT_NEAR(r.p_value, oracle::t_two_tailed_simpson(r.t, r.df), 1e-7);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
}

TEST(Welch, DegenerateInputs) {
  const std::vector<double> c{0.5, 0.5, 0.5}, d{0.7, 0.7}, one{0.1};
  EXPECT_DOUBLE_EQ(welch_test(c, c).p_value, 1.0);
  EXPECT_DOUBLE_EQ(welch_test(c, d).p_value, 0.0);
  EXPECT_EQ(welch_test(c, d).marker, Significance::p01);
  EXPECT_THROW(welch_test(c, one), ValidationError);
}

TEST(Significance, Thresholds) {
  EXPECT_EQ(significance_marker(0.009), Significance::p01);
  EXPECT_EQ(significance_marker(0.01), Significance::p05);
  EXPECT_EQ(significance_marker(0.049), Significance::p05);
  EXPECT_EQ(significance_marker(0.05), Significance::none);
}

TEST(IncompleteBeta, KnownValues) {
  // I_x(1, 1) = x; I_x(a, 1) = x^a; I_0.5(a, a) = 0.5.
  for (double x : {0.1, 0.37, 0.5, 0.93}) {
    EXPECT_NEAR(incomplete_beta(1, 1, x), x, 1e-14);
    EXPECT_NEAR(incomplete_beta(3.5, 1, x), std::pow(x, 3.5), 1e-13);
  }
  EXPECT_NEAR(incomplete_beta(7.25, 7.25, 0.5), 0.5, 1e-13);
  // t = 2.0 with 1 degree of freedom: p = 1 - 2 atan(2) / pi.
  EXPECT_NEAR(student_t_two_tailed(2.0, 1.0), 1.0 - 2.0 * std::atan(2.0) / M_PI, 1e-13);
}

TEST(AccuracyRatio, Example) {
  EXPECT_DOUBLE_EQ(accuracy_ratio(0.475, 0.95), 0.5);
  EXPECT_THROW(accuracy_ratio(0.5, 0.0), ValidationError);
}

TEST(Format, MeanStd) {
  EXPECT_EQ(format_mean_std(0.9555, 0.0046, Significance::p01), "95.55**\xC2\xB1" "0.0046");
  EXPECT_EQ(format_mean_std(0.9, 0.01234), "90.00\xC2\xB1" "0.0123");
  EXPECT_NEAR(sample_stddev(std::vector<double>{1, 2, 3, 4}), std::sqrt(5.0 / 3.0), 1e-15);
}

}  // namespace
}  // namespace slim
