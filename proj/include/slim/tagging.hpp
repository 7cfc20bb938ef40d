#ifndef SLIM_TAGGING_HPP
#define SLIM_TAGGING_HPP

// Sequence tagging views: adjective/adverb subsets (POS) and named-entity
// words (NER). Two backends: a deterministic builtin tagger, and a pass-through
// over externally produced gold annotations.

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "json.hpp"
#include "slim/corpus.hpp"
#include "slim/keywords.hpp"
#include "slim/view.hpp"

namespace slim {

struct TaggedToken {
  std::string word;
  std::string tag;  // Penn Treebank tag
  std::size_t index = 0;

  bool operator==(const TaggedToken&) const = default;
};

inline bool is_adjective_or_adverb(std::string_view tag) {
  return tag == "JJ" || tag == "JJR" || tag == "JJS" || tag == "RB" || tag == "RBR" || tag == "RBS";
}

/// Word span [start, end) over the article's word sequence.
struct EntitySpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

namespace lexicon {

inline const std::unordered_map<std::string_view, std::string_view>& closed_class() {
  static const std::unordered_map<std::string_view, std::string_view> m = {
      // determiners
      {"the", "DT"}, {"a", "DT"}, {"an", "DT"}, {"this", "DT"}, {"that", "DT"}, {"these", "DT"},
      {"those", "DT"}, {"every", "DT"}, {"each", "DT"}, {"some", "DT"}, {"any", "DT"},
      {"no", "DT"}, {"all", "DT"}, {"both", "DT"}, {"another", "DT"}, {"either", "DT"},
      {"neither", "DT"},
      // prepositions / subordinators
      {"of", "IN"}, {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"by", "IN"}, {"for", "IN"},
      {"with", "IN"}, {"from", "IN"}, {"about", "IN"}, {"into", "IN"}, {"over", "IN"},
      {"after", "IN"}, {"before", "IN"}, {"between", "IN"}, {"through", "IN"}, {"during", "IN"},
      {"under", "IN"}, {"against", "IN"}, {"among", "IN"}, {"without", "IN"}, {"within", "IN"},
      {"since", "IN"}, {"because", "IN"}, {"if", "IN"}, {"while", "IN"}, {"although", "IN"},
      {"though", "IN"}, {"whether", "IN"}, {"than", "IN"}, {"as", "IN"}, {"like", "IN"},
      {"per", "IN"}, {"via", "IN"}, {"across", "IN"}, {"toward", "IN"}, {"towards", "IN"},
      {"upon", "IN"}, {"despite", "IN"}, {"until", "IN"}, {"amid", "IN"},
      {"to", "TO"},
      // conjunctions
      {"and", "CC"}, {"or", "CC"}, {"but", "CC"}, {"nor", "CC"}, {"yet", "CC"},
      // pronouns
      {"i", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"she", "PRP"}, {"it", "PRP"}, {"we", "PRP"},
      {"they", "PRP"}, {"me", "PRP"}, {"him", "PRP"}, {"her", "PRP$"}, {"us", "PRP"},
      {"them", "PRP"}, {"my", "PRP$"}, {"your", "PRP$"}, {"his", "PRP$"}, {"its", "PRP$"},
      {"our", "PRP$"}, {"their", "PRP$"}, {"who", "WP"}, {"whom", "WP"}, {"what", "WP"},
      {"which", "WDT"}, {"whose", "WP$"}, {"when", "WRB"}, {"where", "WRB"}, {"why", "WRB"},
      {"how", "WRB"}, {"there", "EX"},
      // modals and auxiliaries
      {"can", "MD"}, {"could", "MD"}, {"may", "MD"}, {"might", "MD"}, {"must", "MD"},
      {"shall", "MD"}, {"should", "MD"}, {"will", "MD"}, {"would", "MD"},
      {"is", "VBZ"}, {"are", "VBP"}, {"was", "VBD"}, {"were", "VBD"}, {"be", "VB"},
      {"been", "VBN"}, {"being", "VBG"}, {"am", "VBP"}, {"has", "VBZ"}, {"have", "VBP"},
      {"had", "VBD"}, {"do", "VBP"}, {"does", "VBZ"}, {"did", "VBD"}, {"said", "VBD"},
      {"says", "VBZ"}, {"say", "VBP"},
      // comparative / superlative forms and adverbs that suffix rules miss
      {"more", "RBR"}, {"less", "RBR"}, {"most", "RBS"}, {"least", "RBS"},
      {"better", "JJR"}, {"worse", "JJR"}, {"best", "JJS"}, {"worst", "JJS"},
      {"not", "RB"}, {"very", "RB"}, {"also", "RB"}, {"too", "RB"}, {"so", "RB"},
      {"just", "RB"}, {"still", "RB"}, {"even", "RB"}, {"ever", "RB"}, {"never", "RB"},
      {"always", "RB"}, {"often", "RB"}, {"now", "RB"}, {"then", "RB"}, {"here", "RB"},
      {"soon", "RB"}, {"already", "RB"}, {"again", "RB"}, {"almost", "RB"}, {"perhaps", "RB"},
      {"quite", "RB"}, {"rather", "RB"}, {"well", "RB"}, {"once", "RB"}, {"away", "RB"},
      {"ago", "RB"}, {"later", "RB"}, {"today", "NN"}, {"yesterday", "NN"}, {"tomorrow", "NN"},
      {"however", "RB"}, {"instead", "RB"}, {"indeed", "RB"}, {"else", "RB"}, {"thus", "RB"},
      {"much", "JJ"}, {"many", "JJ"}, {"few", "JJ"}, {"several", "JJ"}, {"only", "RB"},
      {"far", "RB"}, {"further", "RBR"}, {"first", "JJ"}, {"last", "JJ"}, {"next", "JJ"},
      {"own", "JJ"}, {"same", "JJ"}, {"such", "JJ"}, {"other", "JJ"}, {"up", "RP"},
      {"out", "RP"}, {"off", "RP"}, {"down", "RP"},
      // frequent -ly nouns and other suffix-rule exceptions
      {"family", "NN"}, {"supply", "NN"}, {"apply", "VB"}, {"reply", "NN"}, {"rally", "NN"},
      {"italy", "NNP"}, {"july", "NNP"}, {"ally", "NN"}, {"assembly", "NN"}, {"anomaly", "NN"},
      {"monopoly", "NN"}, {"fly", "VB"}, {"rely", "VB"}, {"imply", "VB"}, {"belly", "NN"},
      {"jelly", "NN"}, {"bully", "NN"}, {"holly", "NN"}, {"lily", "NN"}, {"emily", "NNP"},
      {"interest", "NN"}, {"test", "NN"}, {"protest", "NN"}, {"request", "NN"},
      {"forest", "NN"}, {"west", "NN"}, {"rest", "NN"}, {"nest", "NN"}, {"guest", "NN"},
      {"chest", "NN"}, {"arrest", "NN"}, {"contest", "NN"}, {"harvest", "NN"}, {"suggest", "VB"},
      {"invest", "VB"}, {"digest", "NN"}, {"honest", "JJ"}, {"modest", "JJ"}, {"manifest", "VB"},
      {"quest", "NN"}, {"crest", "NN"}, {"unrest", "NN"}, {"pest", "NN"}, {"vest", "NN"},
      {"priest", "NN"}, {"attest", "VB"}, {"detest", "VB"}};
  return m;
}

/// Adjective stems used for base JJ, -er -> JJR and -est -> JJS.
inline const std::unordered_set<std::string_view>& adjectives() {
  static const std::unordered_set<std::string_view> s = {
      "able", "bad", "big", "bold", "brave", "bright", "broad", "busy", "calm", "cheap", "clean",
      "clear", "close", "cold", "cool", "dark", "dead", "deep", "dirty", "dry", "early", "easy",
      "fair", "false", "fast", "fat", "fine", "firm", "free", "fresh", "full", "funny", "good",
      "great", "green", "happy", "hard", "harsh", "healthy", "heavy", "high", "hot", "huge",
      "kind", "large", "late", "lazy", "light", "long", "loud", "low", "lucky", "mild", "near",
      "new", "nice", "old", "poor", "proud", "pure", "quick", "quiet", "rare", "real", "rich",
      "right", "rough", "sad", "safe", "scary", "sharp", "short", "sick", "simple", "slow",
      "small", "smart", "soft", "solid", "strange", "strict", "strong", "sure", "sweet", "tall",
      "thick", "thin", "tight", "tiny", "tough", "true", "ugly", "warm", "weak", "wealthy",
      "wet", "wide", "wild", "wise", "wrong", "young", "angry", "beautiful", "important",
      "public", "political", "national", "federal", "local", "global", "social", "medical",
      "major", "serious", "recent", "current", "official", "former", "private", "possible",
      "available", "likely", "general", "special", "certain", "clinical", "human", "main",
      "fake", "viral", "deadly", "effective", "positive", "negative", "severe", "critical",
      "dangerous", "safe", "legal", "illegal", "economic", "financial", "foreign", "military",
      "international", "democratic", "republican", "conservative", "liberal", "scientific",
      "false", "misleading", "accurate", "wrong", "entire", "whole", "single", "key", "top",
      "common", "rapid", "massive", "total", "daily", "weekly", "annual", "personal", "similar",
      "different", "various", "likely", "unlikely", "ready", "open", "black", "white", "red",
      "blue", "top", "bottom", "empty", "busy", "crazy", "easy", "heavy", "pretty", "lovely",
      "friendly", "silly", "worthy", "elderly", "costly", "timely", "early", "likely", "only"};
  return s;
}

// -ly words that are adjectives, not adverbs.
inline const std::unordered_set<std::string_view>& ly_adjectives() {
  static const std::unordered_set<std::string_view> s = {
      "likely", "unlikely", "deadly", "daily", "weekly", "monthly", "yearly", "friendly",
      "lovely", "costly", "elderly", "early", "timely", "silly", "ugly", "holy", "lonely",
      "lively", "orderly", "scholarly", "worldly", "curly", "hourly", "quarterly"};
  return s;
}

inline const std::vector<std::string_view>& adjective_suffixes() {
  static const std::vector<std::string_view> s = {"ous", "ful", "ive", "able", "ible", "less",
                                                  "ical", "ish", "ary", "ant", "ent", "ic", "al"};
  return s;
}

}  // namespace lexicon

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool has_digit(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

inline bool has_alpha(std::string_view s) {
  return std::any_of(s.begin(), s.end(), [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

// Recovers an adjective stem from a comparative/superlative body, handling
// doubled consonants (bigg-er) and dropped e (larg-er) and y->i (happi-er).
inline bool degree_stem_is_adjective(std::string_view body) {
  const auto& adj = lexicon::adjectives();
  if (body.empty()) return false;
  std::string b(body);
  if (adj.count(b)) return true;
  if (adj.count(b + "e")) return true;
  if (b.size() >= 2 && b[b.size() - 1] == b[b.size() - 2] && adj.count(b.substr(0, b.size() - 1)))
    return true;
  if (b.back() == 'i' && adj.count(b.substr(0, b.size() - 1) + "y")) return true;
  return false;
}

}  // namespace detail

/// Deterministic lexicon + suffix-rule tagger for normalized words.
inline std::string builtin_pos_tag(std::string_view w) {
  using detail::ends_with;
  const auto& cc = lexicon::closed_class();
  if (auto it = cc.find(w); it != cc.end()) return std::string(it->second);
  if (!detail::has_alpha(w)) return detail::has_digit(w) ? "CD" : "SYM";
  if (detail::has_digit(w)) return "CD";
  if (lexicon::adjectives().count(w)) return "JJ";

  if (w.size() > 4 && ends_with(w, "ly")) {
    return lexicon::ly_adjectives().count(w) ? "JJ" : "RB";
  }
  if (w.size() > 4 && ends_with(w, "est")) return "JJS";
  if (w.size() > 3 && ends_with(w, "er") && detail::degree_stem_is_adjective(w.substr(0, w.size() - 2)))
    return "JJR";
  if (w.size() > 4 && ends_with(w, "ing")) return "VBG";
  if (w.size() > 3 && ends_with(w, "ed")) return "VBD";
  if (w.size() > 5) {
    for (auto suf : lexicon::adjective_suffixes())
      if (ends_with(w, suf) && w.size() > suf.size() + 2) return "JJ";
  }
  if (w.size() > 3 && ends_with(w, "s") && !ends_with(w, "ss")) return "NNS";
  return "NN";
}

/// Gold annotations for one article.
struct ArticleAnnotation {
  std::vector<std::pair<std::string, std::string>> pos;
  std::vector<EntitySpan> entities;
};

/// Annotation file: JSONL {"id", "pos": [[word, tag], ...], "entities": [[start, end], ...]}.
/// Entity spans are half-open word-index ranges.
class AnnotationSet {
 public:
  static AnnotationSet load(const std::string& path) {
    AnnotationSet set;
    const auto lines = read_lines(path);
    for (std::size_t ln = 0; ln < lines.size(); ++ln) {
      if (trim(lines[ln]).empty()) continue;
      const auto where = path + ":" + std::to_string(ln + 1);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(lines[ln]);
      } catch (const nlohmann::json::parse_error&) {
        throw ParseError(where + ": malformed JSON");
      }
      if (!j.is_object() || !j.contains("id")) throw ParseError(where + ": missing 'id'");
      ArticleAnnotation a;
      try {
        if (j.contains("pos")) {
          for (const auto& p : j["pos"]) {
            a.pos.emplace_back(normalize(p.at(0).get<std::string>()), p.at(1).get<std::string>());
          }
        }
        if (j.contains("entities")) {
          for (const auto& e : j["entities"]) {
            EntitySpan s{e.at(0).get<std::size_t>(), e.at(1).get<std::size_t>()};
            if (s.end < s.start) throw ParseError(where + ": entity span end before start");
            a.entities.push_back(s);
          }
        }
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(where + ": " + e.what());
      }
      const auto id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
      if (!set.by_id_.emplace(id, std::move(a)).second)
        throw ParseError(where + ": duplicate id '" + id + "'");
    }
    return set;
  }

  void set(std::string id, ArticleAnnotation a) { by_id_[std::move(id)] = std::move(a); }

  const ArticleAnnotation& at(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw ValidationError("no annotation for article '" + id + "'");
    return it->second;
  }

  bool contains(const std::string& id) const { return by_id_.count(id) > 0; }
  std::size_t size() const { return by_id_.size(); }

 private:
  std::map<std::string, ArticleAnnotation> by_id_;
};

/// Multi-word entity list, stored as lowercase token sequences.
class Gazetteer {
 public:
  /// A small built-in list of frequent news entities.
  static Gazetteer builtin() {
    Gazetteer g;
    for (auto e : {"World Health Organization", "United States", "United Kingdom",
                   "European Union", "United Nations", "White House", "New York", "New York Times",
                   "Centers for Disease Control and Prevention", "Wall Street Journal",
                   "Fox News", "Hong Kong", "South Korea", "North Korea", "Los Angeles",
                   "Supreme Court", "Capitol Hill", "Wuhan", "China", "Italy", "Iran", "Russia",
                   "Germany", "France", "India", "Brazil", "Japan", "Canada", "Spain", "Mexico",
                   "Congress", "Senate", "Pentagon", "Facebook", "Twitter", "YouTube", "Google",
                   "Democrats", "Republicans", "Trump", "Obama", "Clinton", "Biden", "Fauci",
                   "America", "Washington", "London", "Beijing", "Moscow", "Europe", "Africa",
                   "Asia", "Reuters", "CNN", "NPR", "BBC", "Bloomberg", "Guardian"})
      g.add(e);
    return g;
  }

  /// One entity per line; blank lines and '#' comments ignored.
  static Gazetteer load(const std::string& path) {
    Gazetteer g;
    for (const auto& line : read_lines(path)) {
      auto t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      g.add(t);
    }
    return g;
  }

  void add(std::string_view entity) {
    auto toks = word_tokenize(normalize(entity));
    if (toks.empty()) return;
    max_len_ = std::max(max_len_, toks.size());
    entries_.insert(std::move(toks));
  }

  bool contains(std::span<const std::string> toks) const {
    return entries_.count(std::vector<std::string>(toks.begin(), toks.end())) > 0;
  }

  std::size_t max_len() const { return max_len_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::set<std::vector<std::string>> entries_;
  std::size_t max_len_ = 0;
};

namespace detail {

inline bool is_capitalized(std::string_view tok) {
  for (char c : tok) {
    const auto u = static_cast<unsigned char>(c);
    if (std::isalpha(u)) return std::isupper(u) != 0;
    if (std::isdigit(u)) return false;
  }
  return false;
}

inline bool ends_sentence(std::string_view raw_tok) {
  while (!raw_tok.empty() && (raw_tok.back() == '"' || raw_tok.back() == '\'' || raw_tok.back() == ')'))
    raw_tok.remove_suffix(1);
  if (raw_tok.empty()) return false;
  const char c = raw_tok.back();
  return c == '.' || c == '!' || c == '?' || c == ':';
}

struct RawToken {
  std::string surface;  // edge-punctuation stripped, original casing
  bool sentence_initial = false;
};

// Same boundaries as word_tokenize(normalize(raw)): lowercasing ASCII never
// changes token boundaries, so index i here is word i of the article.
inline std::vector<RawToken> raw_tokens(std::string_view raw) {
  std::vector<RawToken> out;
  bool next_initial = true;
  std::size_t i = 0;
  while (i < raw.size()) {
    while (i < raw.size() && is_space_byte(raw[i])) ++i;
    std::size_t j = i;
    while (j < raw.size() && !is_space_byte(raw[j])) ++j;
    if (j > i) {
      const auto piece = raw.substr(i, j - i);
      auto w = strip_edge_punct(piece);
      if (!w.empty()) {
        out.push_back({std::move(w), next_initial});
        next_initial = false;
      }
      if (ends_sentence(piece)) {
        const auto s = strip_edge_punct(piece);
        const bool abbreviation = !s.empty() && s.back() == '.' &&
                                  detail::is_dotted_abbreviation_core(std::string_view(s).substr(0, s.size() - 1));
        if (!abbreviation) next_initial = true;
      }
    }
    i = j;
  }
  return out;
}

}  // namespace detail

/// Entity spans from gazetteer matches (longest first) and runs of
/// capitalized tokens. A lone capitalized word at a sentence start, or a
/// capitalized stop-word, does not open an entity.
inline std::vector<EntitySpan> builtin_entity_spans(std::string_view raw_text, const Gazetteer& gaz) {
  const auto toks = detail::raw_tokens(raw_text);
  std::vector<std::string> lower;
  lower.reserve(toks.size());
  for (const auto& t : toks) lower.push_back(normalize(t.surface));

  std::vector<EntitySpan> spans;
  std::size_t i = 0;
  while (i < toks.size()) {
    std::size_t matched = 0;
    for (std::size_t len = std::min(gaz.max_len(), toks.size() - i); len >= 1; --len) {
      if (gaz.contains(std::span<const std::string>(lower.data() + i, len))) {
        matched = len;
        break;
      }
    }
    if (matched) {
      spans.push_back({i, i + matched});
      i += matched;
      continue;
    }
    if (detail::is_capitalized(toks[i].surface) && !is_stopword(lower[i])) {
      std::size_t j = i + 1;
      while (j < toks.size() && detail::is_capitalized(toks[j].surface) && !toks[j].sentence_initial &&
             !is_stopword(lower[j]))
        ++j;
      const std::size_t len = j - i;
      if (len >= 2 || !toks[i].sentence_initial) {
        spans.push_back({i, j});
      }
      i = j;
      continue;
    }
    ++i;
  }
  return spans;
}

/// Tagging backend: builtin rules or external gold annotations.
class TaggerBackend {
 public:
  enum class Kind { builtin_lexicon, external_annotations };

  static TaggerBackend builtin(Gazetteer gazetteer = Gazetteer::builtin()) {
    TaggerBackend b;
    b.kind_ = Kind::builtin_lexicon;
    b.name_ = "builtin-lexicon";
    b.gazetteer_ = std::make_shared<const Gazetteer>(std::move(gazetteer));
    return b;
  }

  static TaggerBackend external(AnnotationSet annotations, std::string name = "external-annotations") {
    TaggerBackend b;
    b.kind_ = Kind::external_annotations;
    b.name_ = std::move(name);
    b.annotations_ = std::make_shared<const AnnotationSet>(std::move(annotations));
    return b;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }

  /// One tag per word, order preserved. External mode returns the file's
  /// tokens verbatim.
  std::vector<TaggedToken> pos_tag(const std::string& article_id,
                                   std::span<const std::string> words) const {
    std::vector<TaggedToken> out;
    if (kind_ == Kind::external_annotations) {
      const auto& ann = annotations_->at(article_id);
      out.reserve(ann.pos.size());
      for (std::size_t i = 0; i < ann.pos.size(); ++i) out.push_back({ann.pos[i].first, ann.pos[i].second, i});
      return out;
    }
    out.reserve(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) out.push_back({words[i], builtin_pos_tag(words[i]), i});
    return out;
  }

  /// Entity spans over the article's word sequence.
  std::vector<EntitySpan> entity_spans(const std::string& article_id, std::string_view raw_text) const {
    if (kind_ == Kind::external_annotations) return annotations_->at(article_id).entities;
    return builtin_entity_spans(raw_text, *gazetteer_);
  }

 private:
  Kind kind_ = Kind::builtin_lexicon;
  std::string name_;
  std::shared_ptr<const Gazetteer> gazetteer_;
  std::shared_ptr<const AnnotationSet> annotations_;
};

/// Adjective/adverb tokens in index order, truncated to floor(article_len * k).
inline LimitedView pos_select(std::string article_id, std::span<const TaggedToken> tagged,
                              std::size_t article_len, double k) {
  if (!(k > 0.0 && k <= 1.0)) throw ValidationError("pos k must be in (0, 1]");
  LimitedView view;
  view.article_id = std::move(article_id);
  view.kind = ViewKind::pos;
  view.k_used = k;
  const std::size_t budget = proportion_budget(article_len, k);
  for (const auto& t : tagged) {
    if (view.words.size() >= budget) break;
    if (is_adjective_or_adverb(t.tag)) view.words.push_back(t.word);
  }
  return view;
}

/// Every named-entity word, flattened in order; no proportion cap.
inline LimitedView ner_extract(const Article& article, std::span<const std::string> words,
                               const TaggerBackend& backend) {
  LimitedView view;
  view.article_id = article.id;
  view.kind = ViewKind::ner;
  const auto spans = backend.entity_spans(article.id, article.raw_text.empty() ? article.text : article.raw_text);
  for (const auto& s : spans) {
    if (s.end > words.size())
      throw ValidationError("article '" + article.id + "': entity span [" + std::to_string(s.start) +
                            ", " + std::to_string(s.end) + ") exceeds " + std::to_string(words.size()) +
                            " words");
    for (std::size_t i = s.start; i < s.end; ++i) view.words.push_back(words[i]);
  }
  return view;
}

}  // namespace slim

#endif  // SLIM_TAGGING_HPP
