#ifndef SLIM_KEYWORDS_HPP
#define SLIM_KEYWORDS_HPP

// Embedding-based keyword selection: cosine-filtered candidates, then greedy
// maximal-marginal-relevance ranking truncated at floor(|A| * k).

#include <algorithm>
#include <limits>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "slim/embedding.hpp"
#include "slim/view.hpp"

namespace slim {

/// English function words excluded from keyword candidacy.
inline const std::unordered_set<std::string_view>& english_stopwords() {
  static const std::unordered_set<std::string_view> words = {
      "a", "about", "above", "after", "again", "against", "all", "also", "am", "an", "and", "any",
      "are", "as", "at", "be", "because", "been", "before", "being", "below", "between", "both",
      "but", "by", "can", "could", "did", "do", "does", "doing", "down", "during", "each", "few",
      "for", "from", "further", "had", "has", "have", "having", "he", "her", "here", "hers",
      "herself", "him", "himself", "his", "how", "i", "if", "in", "into", "is", "it", "its",
      "itself", "just", "me", "more", "most", "my", "myself", "no", "nor", "not", "now", "of",
      "off", "on", "once", "only", "or", "other", "our", "ours", "ourselves", "out", "over", "own",
      "same", "said", "says", "she", "should", "so", "some", "such", "than", "that", "the", "their",
      "theirs", "them", "themselves", "then", "there", "these", "they", "this", "those", "through",
      "to", "too", "under", "until", "up", "us", "very", "was", "we", "were", "what", "when",
      "where", "which", "while", "who", "whom", "why", "will", "with", "would", "you", "your",
      "yours", "yourself", "yourselves", "s", "t", "don", "it's", "i'm", "don't", "can't", "won't",
      "didn't", "doesn't", "isn't", "aren't", "wasn't", "weren't", "he's", "she's", "that's",
      "there's", "they're", "we're", "you're", "i've", "we've", "they've", "let's"};
  return words;
}

inline bool is_stopword(std::string_view w) { return english_stopwords().count(w) > 0; }

struct KeywordConfig {
  double k = 0.10;       // proportion of |A|
  double lambda = 0.5;   // relevance/diversity trade-off
  bool remove_stopwords = true;

  void validate() const {
    if (!(k > 0.0 && k <= 1.0)) throw ValidationError("keyword k must be in (0, 1]");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ValidationError("lambda must be in [0, 1]");
  }
};

/// Distinct in-vocabulary words whose cosine with `doc` is strictly positive,
/// in lexicographic order.
inline std::vector<std::string> keyword_candidates(std::span<const std::string> words,
                                                   const EmbeddingTable& table,
                                                   std::span<const double> doc,
                                                   bool remove_stopwords = true) {
  if (l2_norm(doc) == 0.0) throw UndefinedSimilarity("keyword candidates: zero document vector");
  std::set<std::string> chosen;
  for (const auto& w : words) {
    if (chosen.count(w)) continue;
    if (remove_stopwords && is_stopword(w)) continue;
    auto v = table.find(w);
    if (!v || l2_norm(*v) == 0.0) continue;
    if (cosine(*v, doc) > 0.0) chosen.insert(w);
  }
  return {chosen.begin(), chosen.end()};
}

/// Greedy MMR over `candidates` for at most `budget` picks. The redundancy
/// term is 0 while nothing is selected; exact score ties go to the
/// lexicographically smallest word. Returns words in selection order.
inline std::vector<std::string> mmr_rank(std::span<const double> doc,
                                         std::span<const std::string> candidates,
                                         std::size_t budget, double lambda,
                                         const EmbeddingTable& table) {
  std::vector<std::string> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());

  const std::size_t n = pool.size();
  std::vector<std::span<const double>> vecs;
  vecs.reserve(n);
  std::vector<double> relevance(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto v = table.find(pool[i]);
    if (!v) throw ValidationError("candidate '" + pool[i] + "' is not in the embedding table");
    vecs.push_back(*v);
    relevance[i] = cosine(doc, *v);
  }

  // redundancy[i] = max similarity of candidate i to anything already selected.
  std::vector<double> redundancy(n, 0.0);
  std::vector<bool> taken(n, false);
  std::vector<std::string> selected;
  const std::size_t target = std::min(budget, n);
  selected.reserve(target);
  while (selected.size() < target) {
    std::size_t best = n;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double score = lambda * relevance[i] - (1.0 - lambda) * redundancy[i];
      if (best == n || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    taken[best] = true;
    selected.push_back(pool[best]);
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double s = cosine(vecs[i], vecs[best]);
      if (selected.size() == 1 || s > redundancy[i]) redundancy[i] = s;
    }
  }
  return selected;
}

/// Keyword view with budget floor(article_len * k).
inline LimitedView mmr_select(std::string article_id, std::span<const double> doc,
                              std::span<const std::string> candidates, std::size_t article_len,
                              const KeywordConfig& config, const EmbeddingTable& table) {
  config.validate();
  LimitedView view;
  view.article_id = std::move(article_id);
  view.kind = ViewKind::keyword;
  view.k_used = config.k;
  const std::size_t budget = proportion_budget(article_len, config.k);
  if (budget == 0) {
    view.warning = "zero-budget";
    return view;
  }
  view.words = mmr_rank(doc, candidates, budget, config.lambda, table);
  return view;
}

/// Full keyword pipeline for one article: document embedding, candidates,
/// MMR. `words` is the article's tokenized normalized text.
inline LimitedView extract_keywords(const std::string& article_id,
                                    std::span<const std::string> words,
                                    const EmbeddingTable& table, const KeywordConfig& config,
                                    const DocVectors* doc_vectors = nullptr) {
  const Vector doc = doc_embedding(article_id, words, table, doc_vectors);
  const auto cands = keyword_candidates(words, table, doc, config.remove_stopwords);
  return mmr_select(article_id, doc, cands, words.size(), config, table);
}

}  // namespace slim

#endif  // SLIM_KEYWORDS_HPP
