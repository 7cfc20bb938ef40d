#ifndef SLIM_COMPOSE_HPP
#define SLIM_COMPOSE_HPP

#include <span>
#include <string>

#include "slim/corpus.hpp"
#include "slim/view.hpp"

namespace slim {

/// Title or author as a view. An absent field yields an empty view flagged
/// "missing-field".
inline LimitedView metadata_view(const Article& article, MetadataField field) {
  LimitedView v;
  v.article_id = article.id;
  v.kind = field == MetadataField::title ? ViewKind::title : ViewKind::author;
  const auto& value = article.field(field);
  if (!value) {
    v.warning = "missing-field";
    return v;
  }
  v.words = word_tokenize(normalize(*value));
  return v;
}

/// Concatenates views of one article, in order, with kSeparatorToken between
/// segments. Multimodal inputs contribute their own provenance.
inline LimitedView concat_views(std::span<const LimitedView> views) {
  if (views.size() < 2) throw ValidationError("concatenation needs at least two views");
  LimitedView out;
  out.article_id = views[0].article_id;
  out.kind = ViewKind::multimodal;
  for (std::size_t i = 0; i < views.size(); ++i) {
    const auto& v = views[i];
    if (v.article_id != out.article_id)
      throw ValidationError("cannot concatenate views of different articles ('" + out.article_id +
                            "' and '" + v.article_id + "')");
    if (i > 0) out.words.push_back(kSeparatorToken);
    out.words.insert(out.words.end(), v.words.begin(), v.words.end());
    if (v.kind == ViewKind::multimodal) {
      out.provenance.insert(out.provenance.end(), v.provenance.begin(), v.provenance.end());
    } else {
      out.provenance.push_back(v.kind);
    }
    if (v.k_used && !out.k_used) out.k_used = v.k_used;
  }
  return out;
}

inline LimitedView concat_views(const LimitedView& a, const LimitedView& b) {
  const LimitedView both[] = {a, b};
  return concat_views(both);
}

}  // namespace slim

#endif  // SLIM_COMPOSE_HPP
