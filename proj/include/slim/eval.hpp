#ifndef SLIM_EVAL_HPP
#define SLIM_EVAL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "slim/util.hpp"

namespace slim {

struct MetricSet {
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  std::optional<double> auc;  // undefined when labels hold one class only
};

/// AUC as the Mann-Whitney statistic: average ranks over tied scores, so a
/// tied positive/negative pair earns half credit.
inline std::optional<double> auc_score(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw ValidationError("auc: length mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int y : labels) n_pos += (y == 1);
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) return std::nullopt;

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  double pos_rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    // ranks i+1 .. j share their mean
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t t = i; t < j; ++t)
      if (labels[order[t]] == 1) pos_rank_sum += rank;
    i = j;
  }
  const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * nn);
}

/// Accuracy, macro-F1 (an undefined per-class F1 counts as 0) and AUC of
/// class-1 scores.
inline MetricSet compute_metrics(std::span<const int> predictions, std::span<const double> scores,
                                 std::span<const int> labels) {
  if (predictions.size() != labels.size() || scores.size() != labels.size())
    throw ValidationError("metrics: predictions, scores and labels differ in length");
  if (labels.empty()) throw ValidationError("metrics: no items");
  MetricSet m;
  std::size_t correct = 0;
  std::size_t tp[2] = {0, 0}, fp[2] = {0, 0}, fn[2] = {0, 0};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const int p = predictions[i], y = labels[i];
    if (p == y) {
      ++correct;
      ++tp[y];
    } else {
      ++fp[p];
      ++fn[y];
    }
  }
  m.accuracy = static_cast<double>(correct) / static_cast<double>(labels.size());
  double f1_sum = 0.0;
  for (int c = 0; c < 2; ++c) {
    const std::size_t denom = 2 * tp[c] + fp[c] + fn[c];
    f1_sum += denom == 0 ? 0.0 : 2.0 * static_cast<double>(tp[c]) / static_cast<double>(denom);
  }
  m.macro_f1 = f1_sum / 2.0;
  m.auc = auc_score(scores, labels);
  return m;
}

// ---------------------------------------------------------------------------
// Welch's t-test

namespace detail {

// Continued fraction for the incomplete beta function (modified Lentz).
inline double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b).
inline double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                          b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

/// Two-tailed p-value of Student's t with `df` degrees of freedom.
inline double student_t_two_tailed(double t, double df) {
  if (std::isinf(t)) return 0.0;
  return incomplete_beta(0.5 * df, 0.5, df / (df + t * t));
}

enum class Significance { none, p05, p01 };

inline std::string marker(Significance s) {
  switch (s) {
    case Significance::p01: return "**";
    case Significance::p05: return "*";
    case Significance::none: return "";
  }
  return "";
}

struct WelchResult {
  double t = 0.0;
  double df = 0.0;
  double p_value = 1.0;
  Significance marker = Significance::none;
};

inline Significance significance_marker(double p) {
  if (p < 0.01) return Significance::p01;
  if (p < 0.05) return Significance::p05;
  return Significance::none;
}

inline double mean_of(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

/// Sample (n - 1) variance; 0 for fewer than two values.
inline double sample_variance(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

inline double sample_stddev(std::span<const double> v) { return std::sqrt(sample_variance(v)); }

/// Two-tailed Welch t-test. Both groups constant: p = 1 when the means agree,
/// p = 0 otherwise.
inline WelchResult welch_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw ValidationError("welch test needs at least two observations per group");
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  const double ma = mean_of(a), mb = mean_of(b);
  const double qa = sample_variance(a) / na, qb = sample_variance(b) / nb;
  const double se2 = qa + qb;
  WelchResult r;
  if (se2 == 0.0) {
    r.t = ma == mb ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), ma - mb);
    r.df = na + nb - 2.0;
    r.p_value = ma == mb ? 1.0 : 0.0;
  } else {
    r.t = (ma - mb) / std::sqrt(se2);
    r.df = se2 * se2 / (qa * qa / (na - 1.0) + qb * qb / (nb - 1.0));
    r.p_value = student_t_two_tailed(r.t, r.df);
  }
  r.marker = significance_marker(r.p_value);
  return r;
}

inline double accuracy_ratio(double acc, double baseline_acc) {
  if (!(baseline_acc > 0.0)) throw ValidationError("accuracy ratio needs a positive baseline accuracy");
  return acc / baseline_acc;
}

/// "95.55±0.0046": mean accuracy in percent, sample std as a fraction. The
/// marker, if any, goes after the mean.
inline std::string format_mean_std(double mean, double stddev, Significance sig = Significance::none) {
  return strformat("%.2f", mean * 100.0) + marker(sig) + "\xC2\xB1" + strformat("%.4f", stddev);
}

}  // namespace slim

#endif  // SLIM_EVAL_HPP
