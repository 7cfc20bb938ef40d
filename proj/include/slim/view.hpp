#ifndef SLIM_VIEW_HPP
#define SLIM_VIEW_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "slim/util.hpp"

namespace slim {

enum class ViewKind { full, keyword, pos, ner, title, author, multimodal };

inline std::string_view to_string(ViewKind k) {
  switch (k) {
    case ViewKind::full: return "full";
    case ViewKind::keyword: return "keyword";
    case ViewKind::pos: return "pos";
    case ViewKind::ner: return "ner";
    case ViewKind::title: return "title";
    case ViewKind::author: return "author";
    case ViewKind::multimodal: return "multimodal";
  }
  return "?";
}

inline ViewKind parse_view_kind(std::string_view s) {
  if (s == "full" || s == "fulltext" || s == "full-text") return ViewKind::full;
  if (s == "keyword" || s == "keywords") return ViewKind::keyword;
  if (s == "pos") return ViewKind::pos;
  if (s == "ner") return ViewKind::ner;
  if (s == "title") return ViewKind::title;
  if (s == "author") return ViewKind::author;
  if (s == "multimodal") return ViewKind::multimodal;
  throw ValidationError("unknown view kind: " + std::string(s));
}

/// Kinds whose size is governed by a proportion k.
inline bool takes_proportion(ViewKind k) { return k == ViewKind::keyword || k == ViewKind::pos; }

/// Reserved token placed between the segments of a multimodal view.
inline const std::string kSeparatorToken = "\xE2\x9F\xA8sep\xE2\x9F\xA9";  // ⟨sep⟩

/// An ordered word sequence standing in for an article's full text.
struct LimitedView {
  std::string article_id;
  ViewKind kind = ViewKind::full;
  std::vector<std::string> words;
  std::optional<double> k_used;
  std::vector<ViewKind> provenance;  // segment kinds, multimodal only
  std::optional<std::string> warning;  // e.g. "missing-field", "zero-budget"

  bool operator==(const LimitedView&) const = default;
};

inline nlohmann::json view_to_json(const LimitedView& v) {
  nlohmann::json j;
  j["id"] = v.article_id;
  j["kind"] = std::string(to_string(v.kind));
  j["k"] = v.k_used ? nlohmann::json(*v.k_used) : nlohmann::json(nullptr);
  j["words"] = v.words;
  if (v.kind == ViewKind::multimodal) {
    auto& p = j["provenance"] = nlohmann::json::array();
    for (auto k : v.provenance) p.push_back(std::string(to_string(k)));
  }
  if (v.warning) j["warning"] = *v.warning;
  return j;
}

inline LimitedView view_from_json(const nlohmann::json& j) {
  LimitedView v;
  v.article_id = j.at("id").get<std::string>();
  v.kind = parse_view_kind(j.at("kind").get<std::string>());
  if (j.contains("k") && !j["k"].is_null()) v.k_used = j["k"].get<double>();
  v.words = j.at("words").get<std::vector<std::string>>();
  if (j.contains("provenance"))
    for (const auto& p : j["provenance"]) v.provenance.push_back(parse_view_kind(p.get<std::string>()));
  if (j.contains("warning")) v.warning = j["warning"].get<std::string>();
  return v;
}

}  // namespace slim

#endif  // SLIM_VIEW_HPP
