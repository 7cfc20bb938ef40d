#ifndef SLIM_DENSITY_HPP
#define SLIM_DENSITY_HPP

// Information density of views: normalized Shannon entropy against the
// article's full-text word distribution, and subword token counts.

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "slim/pipeline.hpp"
#include "slim/view.hpp"

namespace slim {

struct FullTextStats {
  std::string article_id;
  std::map<std::string, std::size_t> freq;
  std::size_t total = 0;

  std::size_t count(const std::string& w) const {
    auto it = freq.find(w);
    return it == freq.end() ? 0 : it->second;
  }
};

inline FullTextStats full_text_stats(std::span<const std::string> words, std::string article_id = {}) {
  if (words.empty()) throw ValidationError("full_text_stats: empty article '" + article_id + "'");
  FullTextStats s;
  s.article_id = std::move(article_id);
  for (const auto& w : words) ++s.freq[w];
  s.total = words.size();
  return s;
}

/// How the per-word terms of the entropy score are read.
enum class EntropyReading {
  /// -log2(sig(w)) summed over every token occurrence in the view (default).
  surprisal_occurrences,
  /// -log2(sig(w)) summed once per distinct view word.
  surprisal_distinct,
  /// H(w) = -q log2 q with q the view-local relative frequency, divided by
  /// sig(w), summed over distinct view words.
  view_local_entropy,
};

inline EntropyReading parse_entropy_reading(std::string_view s) {
  if (s == "occurrences" || s == "surprisal") return EntropyReading::surprisal_occurrences;
  if (s == "distinct") return EntropyReading::surprisal_distinct;
  if (s == "view-local") return EntropyReading::view_local_entropy;
  throw ValidationError("unknown entropy reading: " + std::string(s));
}

/// sig(w) = f_w / |T|, with f_w floored at 1 for words absent from the text.
inline double significance(const FullTextStats& stats, const std::string& w) {
  const auto f = std::max<std::size_t>(stats.count(w), 1);
  return static_cast<double>(f) / static_cast<double>(stats.total);
}

/// Normalized Shannon entropy S of a view. Separator tokens are structural
/// and contribute nothing.
inline double normalized_entropy(std::span<const std::string> view_words, const FullTextStats& stats,
                                 EntropyReading reading = EntropyReading::surprisal_occurrences) {
  double s = 0.0;
  switch (reading) {
    case EntropyReading::surprisal_occurrences:
      for (const auto& w : view_words) {
        if (w == kSeparatorToken) continue;
        s += -std::log2(significance(stats, w));
      }
      break;
    case EntropyReading::surprisal_distinct: {
      std::unordered_set<std::string_view> seen;
      for (const auto& w : view_words) {
        if (w == kSeparatorToken || !seen.insert(w).second) continue;
        s += -std::log2(significance(stats, w));
      }
      break;
    }
    case EntropyReading::view_local_entropy: {
      std::map<std::string, std::size_t> local;
      std::size_t n = 0;
      for (const auto& w : view_words) {
        if (w == kSeparatorToken) continue;
        ++local[w];
        ++n;
      }
      for (const auto& [w, c] : local) {
        const double q = static_cast<double>(c) / static_cast<double>(n);
        s += -q * std::log2(q) / significance(stats, w);
      }
      break;
    }
  }
  // -log2(1) is -0.0; keep reports free of negative zero.
  return s == 0.0 ? 0.0 : s;
}

inline double normalized_entropy(const LimitedView& view, const FullTextStats& stats,
                                 EntropyReading reading = EntropyReading::surprisal_occurrences) {
  return normalized_entropy(std::span<const std::string>(view.words), stats, reading);
}

// ---------------------------------------------------------------------------
// Tokenizers

/// Subword tokenizer: greedy longest match over a vocabulary, or plain
/// whitespace splitting.
class SubwordTokenizer {
 public:
  static SubwordTokenizer whitespace() {
    SubwordTokenizer t;
    t.name_ = "whitespace";
    return t;
  }

  static SubwordTokenizer from_vocab(std::vector<std::string> vocab, std::string name = "vocab") {
    SubwordTokenizer t;
    t.name_ = std::move(name);
    t.greedy_ = true;
    for (auto& v : vocab) {
      if (v.empty()) continue;
      t.max_piece_ = std::max(t.max_piece_, v.size());
      t.vocab_.insert(std::move(v));
    }
    if (t.vocab_.empty()) throw ValidationError("tokenizer vocabulary is empty");
    return t;
  }

  /// One token per line.
  static SubwordTokenizer load(const std::string& path) {
    std::vector<std::string> vocab;
    for (auto& line : read_lines(path)) {
      if (!line.empty()) vocab.push_back(std::move(line));
    }
    return from_vocab(std::move(vocab), "greedy:" + corpus_name_from_path(path));
  }

  const std::string& name() const { return name_; }

  /// Pieces for one whitespace-free word. A position with no vocabulary match
  /// becomes a one-code-point unknown piece.
  std::vector<std::string> segment(std::string_view word) const {
    std::vector<std::string> out;
    if (!greedy_) {
      if (!word.empty()) out.emplace_back(word);
      return out;
    }
    std::size_t pos = 0;
    while (pos < word.size()) {
      std::size_t len = std::min(max_piece_, word.size() - pos);
      for (; len > 0; --len) {
        if (vocab_.count(std::string(word.substr(pos, len)))) break;
      }
      if (len == 0) len = utf8_char_len(word, pos);
      out.emplace_back(word.substr(pos, len));
      pos += len;
    }
    return out;
  }

  /// Token count of the words joined by single spaces.
  std::size_t count(std::span<const std::string> words) const {
    if (!greedy_) return words.size();
    std::size_t n = 0;
    for (const auto& w : words) n += segment(w).size();
    return n;
  }

 private:
  static std::size_t utf8_char_len(std::string_view s, std::size_t pos) {
    const auto c = static_cast<unsigned char>(s[pos]);
    std::size_t len = 1;
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    return std::min(len, s.size() - pos);
  }

  std::string name_;
  bool greedy_ = false;
  std::unordered_set<std::string> vocab_;
  std::size_t max_piece_ = 0;
};

inline std::size_t token_count(const LimitedView& view, const SubwordTokenizer& tokenizer) {
  return tokenizer.count(view.words);
}

// ---------------------------------------------------------------------------
// Corpus report

struct DensityRow {
  ViewSpec spec;
  double mean_entropy = 0.0;
  double mean_tokens = 0.0;
  std::size_t n_articles = 0;
};

struct DensityReport {
  std::string corpus;
  std::string tokenizer;
  std::vector<DensityRow> rows;
  std::vector<std::string> warnings;
};

namespace detail {

inline int density_rank(const ViewSpec& s) {
  if (s.second) return 6;
  switch (s.kind) {
    case ViewKind::full: return 0;
    case ViewKind::pos: return 1;
    case ViewKind::keyword: return 2;
    case ViewKind::ner: return 3;
    case ViewKind::title: return 4;
    case ViewKind::author: return 5;
    default: return 7;
  }
}

}  // namespace detail

/// Row order: full text, POS (descending k), keywords (descending k), NER,
/// title, author, then multimodal specs in input order.
inline std::vector<ViewSpec> order_density_specs(std::vector<ViewSpec> specs) {
  std::stable_sort(specs.begin(), specs.end(), [](const ViewSpec& a, const ViewSpec& b) {
    const int ra = detail::density_rank(a), rb = detail::density_rank(b);
    if (ra != rb) return ra < rb;
    if (ra == 6) return false;
    return a.k.value_or(0.0) > b.k.value_or(0.0);
  });
  return specs;
}

/// Mean entropy and token count per spec. Specs needing metadata the corpus
/// lacks are skipped with a warning. Articles for which any remaining view
/// cannot be built are dropped from every row so all rows share one article set.
inline DensityReport density_report(const Corpus& corpus, std::vector<ViewSpec> specs,
                                    const ViewResources& res, const SubwordTokenizer& tokenizer,
                                    EntropyReading reading = EntropyReading::surprisal_occurrences) {
  DensityReport report;
  report.corpus = corpus.name;
  report.tokenizer = tokenizer.name();

  std::vector<ViewSpec> kept;
  for (auto& s : order_density_specs(std::move(specs))) {
    if (auto f = required_field(s); f && !corpus.has_field(*f)) {
      report.warnings.push_back("skipped " + s.label() + ": corpus has no " + std::string(to_string(*f)) + " field");
      continue;
    }
    kept.push_back(s);
  }

  std::vector<double> sum_entropy(kept.size(), 0.0), sum_tokens(kept.size(), 0.0);
  std::size_t n = 0;
  std::vector<double> ent(kept.size()), tok(kept.size());
  for (const auto& a : corpus.articles) {
    const PreparedArticle pa(a);
    bool ok = true;
    try {
      const auto stats = full_text_stats(pa.words, a.id);
      for (std::size_t i = 0; i < kept.size(); ++i) {
        const auto view = build_view(pa, kept[i], res);
        ent[i] = normalized_entropy(view, stats, reading);
        tok[i] = static_cast<double>(token_count(view, tokenizer));
      }
    } catch (const Error& e) {
      report.warnings.push_back("dropped article " + a.id + ": " + e.what());
      ok = false;
    }
    if (!ok) continue;
    for (std::size_t i = 0; i < kept.size(); ++i) {
      sum_entropy[i] += ent[i];
      sum_tokens[i] += tok[i];
    }
    ++n;
  }
  for (std::size_t i = 0; i < kept.size(); ++i) {
    DensityRow row;
    row.spec = kept[i];
    row.n_articles = n;
    if (n) {
      row.mean_entropy = sum_entropy[i] / static_cast<double>(n);
      row.mean_tokens = sum_tokens[i] / static_cast<double>(n);
    }
    report.rows.push_back(row);
  }
  return report;
}

/// CSV: kind,k,mean_entropy,mean_tokens,n_articles,tokenizer.
inline std::string density_csv(const DensityReport& r) {
  std::string out = "kind,k,mean_entropy,mean_tokens,n_articles,tokenizer\n";
  for (const auto& row : r.rows) {
    const std::string kind = row.spec.second ? row.spec.label() : std::string(to_string(row.spec.kind));
    out += kind + "," + (row.spec.k ? format_k(*row.spec.k) : std::string()) + "," +
           strformat("%.6f,%.6f,%zu", row.mean_entropy, row.mean_tokens, row.n_articles) + "," +
           r.tokenizer + "\n";
  }
  return out;
}

/// Gnuplot-ready TSV, one bar per row.
inline std::string density_tsv(const DensityReport& r) {
  std::string out = "# corpus=" + r.corpus + " tokenizer=" + r.tokenizer + "\n";
  out += "# label\tmean_entropy\tmean_tokens\n";
  for (const auto& row : r.rows) {
    out += row.spec.label() + "\t" + strformat("%.6f\t%.6f", row.mean_entropy, row.mean_tokens) + "\n";
  }
  return out;
}

}  // namespace slim

#endif  // SLIM_DENSITY_HPP
