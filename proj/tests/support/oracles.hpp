#ifndef SLIM_TEST_ORACLES_HPP
#define SLIM_TEST_ORACLES_HPP

// Reference implementations written independently of the library: plain
// loops, no shared helpers beyond the std library. Tests compare the library
// against these.

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0, aa = 0, bb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / (std::sqrt(aa) * std::sqrt(bb));
}

/// Greedy MMR recomputing every score from scratch at every step.
inline std::vector<std::string> mmr(const std::vector<double>& doc,
                                    const std::map<std::string, std::vector<double>>& cand,
                                    std::size_t budget, double lambda) {
  std::vector<std::string> chosen;
  std::set<std::string> used;
  while (chosen.size() < budget && chosen.size() < cand.size()) {
    std::string best;
    double best_score = 0;
    bool have = false;
    // std::map iterates in lexicographic order, so ">" keeps the smallest on ties.
    for (const auto& [w, v] : cand) {
      if (used.count(w)) continue;
      double red = 0;
      bool first = true;
      for (const auto& s : chosen) {
        const double c = cosine(v, cand.at(s));
        if (first || c > red) red = c;
        first = false;
      }
      const double score = lambda * cosine(doc, v) - (1 - lambda) * red;
      if (!have || score > best_score) {
        best = w;
        best_score = score;
        have = true;
      }
    }
    chosen.push_back(best);
    used.insert(best);
  }
  return chosen;
}

/// FNV-1a, 64-bit, over the bytes of s.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h = h ^ c;
    h = h * 1099511628211ull;
  }
  return h;
}

/// Sum over occurrences of -log2(f_w / |S|).
inline double occurrence_entropy(const std::vector<std::string>& v, const std::map<std::string, double>& freq,
                                 double total) {
  double e = 0;
  for (const auto& w : v) {
    double f = freq.count(w) ? freq.at(w) : 0.0;
    if (f < 1) f = 1;
    e += -std::log2(f / total);
  }
  return e;
}

/// Greedy longest-match segmentation: at each position take the longest
/// vocabulary entry; otherwise one UTF-8 code point.
inline std::vector<std::string> greedy_segment(const std::string& word, const std::set<std::string>& vocab) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < word.size()) {
    std::string found;
    for (std::size_t end = word.size(); end > pos; --end) {
      const std::string piece = word.substr(pos, end - pos);
      if (vocab.count(piece)) {
        found = piece;
        break;
      }
    }
    if (found.empty()) {
      std::size_t len = 1;
      const unsigned char c = static_cast<unsigned char>(word[pos]);
      if (c >= 0xF0) len = 4;
      else if (c >= 0xE0) len = 3;
      else if (c >= 0xC0) len = 2;
      found = word.substr(pos, len);
    }
    out.push_back(found);
    pos += found.size();
  }
  return out;
}

inline double accuracy(const std::vector<int>& pred, const std::vector<int>& y) {
  double ok = 0;
  for (std::size_t i = 0; i < y.size(); ++i) ok += pred[i] == y[i];
  return ok / static_cast<double>(y.size());
}

/// Per-class F1 from precision and recall, averaged over both classes.
inline double macro_f1(const std::vector<int>& pred, const std::vector<int>& y) {
  double sum = 0;
  for (int c = 0; c < 2; ++c) {
    double tp = 0, pp = 0, ap = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      tp += pred[i] == c && y[i] == c;
      pp += pred[i] == c;
      ap += y[i] == c;
    }
    const double precision = pp > 0 ? tp / pp : 0;
    const double recall = ap > 0 ? tp / ap : 0;
    sum += precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0;
  }
  return sum / 2;
}

/// Fraction of (positive, negative) pairs ranked correctly, ties counting 1/2.
inline double auc_pairs(const std::vector<double>& score, const std::vector<int>& y) {
  double good = 0, pairs = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] != 1) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j] != 0) continue;
      pairs += 1;
      if (score[i] > score[j]) good += 1;
      else if (score[i] == score[j]) good += 0.5;
    }
  }
  return good / pairs;
}

/// Numerically integrated Student-t two-tailed p-value (Simpson's rule over
/// the density), used for coarse cross-checks.
inline double t_two_tailed_simpson(double t, double df) {
  const double at = std::abs(t);
  const double lc = std::lgamma((df + 1) / 2) - std::lgamma(df / 2) - 0.5 * std::log(df * M_PI);
  auto pdf = [&](double x) { return std::exp(lc - (df + 1) / 2 * std::log1p(x * x / df)); };
  const int n = 200000;
  const double h = at / n;
  double s = pdf(0) + pdf(at);
  for (int i = 1; i < n; ++i) s += pdf(i * h) * (i % 2 ? 4 : 2);
  const double central = s * h / 3;  // integral over [0, |t|]
  return 1 - 2 * central;
}

}  // namespace oracle

#endif  // SLIM_TEST_ORACLES_HPP
