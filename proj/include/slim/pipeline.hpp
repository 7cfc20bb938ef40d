#ifndef SLIM_PIPELINE_HPP
#define SLIM_PIPELINE_HPP

// Builds any view kind for an article from a textual view spec such as
// "full", "pos@0.10", "keyword@0.30" or "keyword@0.30+title".

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "slim/compose.hpp"
#include "slim/corpus.hpp"
#include "slim/embedding.hpp"
#include "slim/keywords.hpp"
#include "slim/tagging.hpp"
#include "slim/view.hpp"

namespace slim {

struct ViewSpec {
  ViewKind kind = ViewKind::full;
  std::optional<double> k;
  std::optional<ViewKind> second;  // for keyword@k+<kind>

  ViewSpec() = default;
  explicit ViewSpec(ViewKind kind_, std::optional<double> k_ = std::nullopt,
                    std::optional<ViewKind> second_ = std::nullopt)
      : kind(kind_), k(k_), second(second_) {}

  bool operator==(const ViewSpec&) const = default;

  /// Multimodal specs render as "keyword@0.30+ner".
  std::string label() const {
    std::string s(to_string(kind));
    if (k) s += "@" + format_k(*k);
    if (second) s += "+" + std::string(to_string(*second));
    return s;
  }

  /// The kind reported for this spec (multimodal when a second part exists).
  ViewKind output_kind() const { return second ? ViewKind::multimodal : kind; }

  void validate() const {
    if (takes_proportion(kind)) {
      if (!k) throw ValidationError("view '" + label() + "' needs a proportion k");
      if (!(*k > 0.0 && *k <= 1.0)) throw ValidationError("view '" + label() + "': k must be in (0, 1]");
    } else if (k) {
      throw ValidationError("view kind '" + std::string(to_string(kind)) + "' takes no k");
    }
    if (kind == ViewKind::multimodal) throw ValidationError("write multimodal views as keyword@k+<kind>");
    if (second) {
      if (kind != ViewKind::keyword) throw ValidationError("multimodal views start with keyword@k");
      if (*second != ViewKind::ner && *second != ViewKind::title && *second != ViewKind::author)
        throw ValidationError("keywords combine with ner, title or author only");
    }
  }
};

inline ViewSpec parse_view_spec(std::string_view text) {
  ViewSpec spec;
  auto s = std::string(trim(text));
  if (auto plus = s.find('+'); plus != std::string::npos) {
    spec.second = parse_view_kind(trim(std::string_view(s).substr(plus + 1)));
    s = s.substr(0, plus);
  }
  if (auto at = s.find('@'); at != std::string::npos) {
    const auto num = s.substr(at + 1);
    char* end = nullptr;
    const double k = std::strtod(num.c_str(), &end);
    if (num.empty() || *end != '\0') throw ValidationError("bad proportion in view spec '" + std::string(text) + "'");
    spec.k = k;
    s = s.substr(0, at);
  }
  spec.kind = parse_view_kind(s);
  spec.validate();
  return spec;
}

/// Shared, read-only inputs for view construction.
struct ViewResources {
  const EmbeddingTable* embeddings = nullptr;
  const DocVectors* doc_vectors = nullptr;
  TaggerBackend tagger = TaggerBackend::builtin();
  double lambda = 0.5;
  bool remove_stopwords = true;
};

/// Per-article cache of the tokenized text.
struct PreparedArticle {
  const Article* article = nullptr;
  std::vector<std::string> words;

  explicit PreparedArticle(const Article& a) : article(&a), words(word_tokenize(a.text)) {}
};

inline LimitedView full_text_view(const PreparedArticle& pa) {
  LimitedView v;
  v.article_id = pa.article->id;
  v.kind = ViewKind::full;
  v.words = pa.words;
  return v;
}

namespace detail {

inline LimitedView build_single(const PreparedArticle& pa, ViewKind kind, std::optional<double> k,
                                const ViewResources& res) {
  const Article& a = *pa.article;
  switch (kind) {
    case ViewKind::full:
      return full_text_view(pa);
    case ViewKind::keyword: {
      if (!res.embeddings) throw ValidationError("keyword views need an embedding table");
      KeywordConfig cfg{*k, res.lambda, res.remove_stopwords};
      return extract_keywords(a.id, pa.words, *res.embeddings, cfg, res.doc_vectors);
    }
    case ViewKind::pos: {
      const auto tagged = res.tagger.pos_tag(a.id, pa.words);
      return pos_select(a.id, tagged, pa.words.size(), *k);
    }
    case ViewKind::ner:
      return ner_extract(a, pa.words, res.tagger);
    case ViewKind::title:
      return metadata_view(a, MetadataField::title);
    case ViewKind::author:
      return metadata_view(a, MetadataField::author);
    case ViewKind::multimodal:
      break;
  }
  throw ValidationError("cannot build a bare multimodal view");
}

}  // namespace detail

inline LimitedView build_view(const PreparedArticle& pa, const ViewSpec& spec, const ViewResources& res) {
  auto first = detail::build_single(pa, spec.kind, spec.k, res);
  if (!spec.second) return first;
  auto second = detail::build_single(pa, *spec.second, std::nullopt, res);
  return concat_views(first, second);
}

inline LimitedView build_view(const Article& a, const ViewSpec& spec, const ViewResources& res) {
  return build_view(PreparedArticle(a), spec, res);
}

/// Metadata field a spec depends on, if any.
inline std::optional<MetadataField> required_field(const ViewSpec& spec) {
  auto of = [](ViewKind k) -> std::optional<MetadataField> {
    if (k == ViewKind::title) return MetadataField::title;
    if (k == ViewKind::author) return MetadataField::author;
    return std::nullopt;
  };
  if (auto f = of(spec.kind)) return f;
  if (spec.second) return of(*spec.second);
  return std::nullopt;
}

/// Expands a kind with a k grid: proportion kinds get one spec per k.
inline std::vector<ViewSpec> expand_grid(ViewKind kind, const std::vector<double>& ks,
                                         std::optional<ViewKind> second = std::nullopt) {
  std::vector<ViewSpec> out;
  if (takes_proportion(kind)) {
    for (double k : ks) out.push_back(ViewSpec{kind, k, second});
  } else {
    out.push_back(ViewSpec{kind, std::nullopt, second});
  }
  for (const auto& s : out) s.validate();
  return out;
}

/// 0.10, 0.15, ... up to `max_k` (inclusive, clamped to [0.10, 1.0]).
inline std::vector<double> default_k_grid(double max_k) {
  std::vector<double> ks;
  max_k = std::clamp(max_k, 0.10, 1.0);
  for (int step = 0;; ++step) {
    const double k = (10 + 5 * step) / 100.0;
    if (k > max_k + 1e-9) break;
    ks.push_back(k);
  }
  return ks;
}

}  // namespace slim

#endif  // SLIM_PIPELINE_HPP
