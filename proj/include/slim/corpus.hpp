#ifndef SLIM_CORPUS_HPP
#define SLIM_CORPUS_HPP

// News corpora: text normalization, word tokenization, JSONL/CSV ingestion
// and seeded train/validation/test splitting.

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "json.hpp"
#include "slim/util.hpp"

namespace slim {

// ---------------------------------------------------------------------------
// Text

inline bool is_space_byte(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

/// Lowercases ASCII letters, turns every whitespace run (paragraph separators
/// included) into one space and trims both ends. Non-ASCII bytes pass through.
inline std::string normalize(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (is_space_byte(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

namespace detail {

// Multi-byte punctuation common in scraped news: curly quotes, dashes,
// ellipsis, guillemets.
inline constexpr std::array<std::string_view, 10> kUtf8Punct = {
    "“", "”", "‘", "’", "—", "–", "…", "«", "»", "•"};

inline std::size_t leading_punct_len(std::string_view s) {
  if (s.empty()) return 0;
  if (std::ispunct(static_cast<unsigned char>(s.front()))) return 1;
  for (auto p : kUtf8Punct)
    if (s.substr(0, p.size()) == p) return p.size();
  return 0;
}

inline std::size_t trailing_punct_len(std::string_view s) {
  if (s.empty()) return 0;
  if (std::ispunct(static_cast<unsigned char>(s.back()))) return 1;
  for (auto p : kUtf8Punct)
    if (s.size() >= p.size() && s.substr(s.size() - p.size()) == p) return p.size();
  return 0;
}

// "u.s", "e.g" -> single alphanumerics joined by dots, at least two of them.
inline bool is_dotted_abbreviation_core(std::string_view s) {
  if (s.size() < 3 || s.size() % 2 == 0) return false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto c = static_cast<unsigned char>(s[i]);
    if (i % 2 == 0 ? !std::isalnum(c) : c != '.') return false;
  }
  return true;
}

}  // namespace detail

/// Strips leading and trailing punctuation from one whitespace-delimited
/// token. Dotted abbreviations ("u.s.") keep their final period.
inline std::string strip_edge_punct(std::string_view tok) {
  while (auto n = detail::leading_punct_len(tok)) tok.remove_prefix(n);
  const std::string_view before = tok;
  while (auto n = detail::trailing_punct_len(tok)) tok.remove_suffix(n);
  if (before.size() > tok.size() && before[tok.size()] == '.' &&
      detail::is_dotted_abbreviation_core(tok)) {
    return std::string(before.substr(0, tok.size() + 1));
  }
  return std::string(tok);
}

/// Whitespace split plus edge-punctuation strip; empty tokens are dropped.
inline std::vector<std::string> word_tokenize(std::string_view text) {
  std::vector<std::string> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space_byte(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space_byte(text[j])) ++j;
    if (j > i) {
      auto w = strip_edge_punct(text.substr(i, j - i));
      if (!w.empty()) words.push_back(std::move(w));
    }
    i = j;
  }
  return words;
}

// ---------------------------------------------------------------------------
// Domain types

enum class MetadataField { title, author };

inline std::string_view to_string(MetadataField f) {
  return f == MetadataField::title ? "title" : "author";
}

struct Article {
  std::string id;
  std::string text;      // normalized body
  std::string raw_text;  // body as ingested; entity detection needs the casing
  std::optional<std::string> title;
  std::optional<std::string> author;
  int label = 0;  // 1 = real, 0 = fake
  std::optional<std::string> split;  // externally assigned partition, if any

  const std::optional<std::string>& field(MetadataField f) const {
    return f == MetadataField::title ? title : author;
  }
};

struct Corpus {
  std::string name;
  std::vector<Article> articles;
  std::set<MetadataField> metadata_fields;

  bool has_field(MetadataField f) const { return metadata_fields.count(f) > 0; }
  std::size_t size() const { return articles.size(); }
};

struct SplitSpec {
  std::array<double, 3> ratios{0.5, 0.25, 0.25};  // train, validation, test
  std::uint64_t seed = 0;
  bool stratify = true;

  void validate() const {
    double sum = 0.0;
    for (double r : ratios) {
      if (!(r > 0.0)) throw ValidationError("split ratios must all be positive");
      sum += r;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ValidationError("split ratios must sum to 1");
  }
};

struct SplitCorpora {
  Corpus train;
  Corpus validation;
  Corpus test;
};

enum class CorpusFormat { jsonl, csv };

inline CorpusFormat parse_corpus_format(std::string_view s) {
  if (s == "jsonl" || s == "json") return CorpusFormat::jsonl;
  if (s == "csv") return CorpusFormat::csv;
  throw ValidationError("unknown corpus format: " + std::string(s));
}

/// Maps source column/field names onto the canonical fields
/// id, text, title, author, label, split.
class FieldMapping {
 public:
  FieldMapping() = default;

  /// Reads "source_column=canonical_field" lines; '#' starts a comment.
  static FieldMapping load(const std::string& path) {
    FieldMapping m;
    std::size_t lineno = 0;
    for (const auto& raw : read_lines(path)) {
      ++lineno;
      auto line = trim(raw);
      if (line.empty() || line.front() == '#') continue;
      const auto eq = line.find('=');
      if (eq == std::string_view::npos)
        throw ParseError(path + ":" + std::to_string(lineno) + ": expected column=field");
      std::string source(trim(line.substr(0, eq)));
      std::string canonical(trim(line.substr(eq + 1)));
      if (!is_canonical(canonical))
        throw ParseError(path + ":" + std::to_string(lineno) + ": unknown canonical field '" +
                         canonical + "'");
      m.map_[source] = canonical;
    }
    return m;
  }

  void set(std::string source, std::string canonical) {
    if (!is_canonical(canonical)) throw ValidationError("unknown canonical field: " + canonical);
    map_[std::move(source)] = std::move(canonical);
  }

  /// Canonical name for a source name; unmapped names map to themselves.
  std::string canonical(const std::string& source) const {
    auto it = map_.find(source);
    return it == map_.end() ? source : it->second;
  }

  static bool is_canonical(std::string_view f) {
    return f == "id" || f == "text" || f == "title" || f == "author" || f == "label" || f == "split";
  }

 private:
  std::map<std::string, std::string> map_;
};

namespace detail {

inline std::string record_where(const std::string& path, std::size_t lineno) {
  return path + ": record at line " + std::to_string(lineno);
}

inline int parse_label_text(std::string_view s, const std::string& where) {
  auto t = normalize(s);
  if (t == "1" || t == "real" || t == "true") return 1;
  if (t == "0" || t == "fake" || t == "false") return 0;
  throw ValidationError(where + ": label '" + std::string(s) + "' is not in {0, 1}");
}

inline int parse_label_json(const nlohmann::json& v, const std::string& where) {
  if (v.is_boolean()) return v.get<bool>() ? 1 : 0;
  if (v.is_number_integer() || v.is_number_unsigned()) {
    const auto x = v.get<long long>();
    if (x != 0 && x != 1)
      throw ValidationError(where + ": label " + std::to_string(x) + " is not in {0, 1}");
    return static_cast<int>(x);
  }
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (x != 0.0 && x != 1.0) throw ValidationError(where + ": label is not in {0, 1}");
    return static_cast<int>(x);
  }
  if (v.is_string()) return parse_label_text(v.get<std::string>(), where);
  throw ValidationError(where + ": label has unsupported type");
}

inline std::optional<std::string> optional_text(std::string s) {
  if (trim(s).empty()) return std::nullopt;
  return s;
}

inline std::string json_scalar_to_string(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return {};
  return v.dump();
}

/// RFC 4180 reader: quoted fields may contain separators, doubled quotes and
/// newlines. Returns rows with the line number each row starts on.
inline std::vector<std::pair<std::size_t, std::vector<std::string>>> parse_csv(
    const std::string& data, const std::string& path) {
  std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  std::size_t row_line = 1;
  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    if (!(row.size() == 1 && row[0].empty())) rows.emplace_back(row_line, std::move(row));
    row.clear();
  };
  for (std::size_t i = 0; i < data.size(); ++i) {
    const char c = data[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < data.size() && data[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && !field_started) {
      in_quotes = true;
      field_started = true;
    } else if (c == ',') {
      end_field();
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < data.size() && data[i + 1] == '\n') ++i;
      end_row();
      ++line;
      row_line = line;
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw ParseError(path + ": unterminated quoted field starting on line " +
                                  std::to_string(row_line));
  if (field_started || !field.empty() || !row.empty()) end_row();
  return rows;
}

inline void finish_corpus(Corpus& c) {
  std::unordered_set<std::string> seen;
  for (const auto& a : c.articles) {
    if (!seen.insert(a.id).second) throw ValidationError("duplicate article id: " + a.id);
  }
  c.metadata_fields.clear();
  if (c.articles.empty()) return;
  const bool all_title = std::all_of(c.articles.begin(), c.articles.end(),
                                     [](const Article& a) { return a.title.has_value(); });
  const bool all_author = std::all_of(c.articles.begin(), c.articles.end(),
                                      [](const Article& a) { return a.author.has_value(); });
  if (all_title) c.metadata_fields.insert(MetadataField::title);
  if (all_author) c.metadata_fields.insert(MetadataField::author);
}

inline Article make_article(std::string id, std::string body, std::optional<std::string> title,
                            std::optional<std::string> author, int label,
                            std::optional<std::string> split, const std::string& where) {
  Article a;
  a.id = std::move(id);
  a.text = normalize(body);
  if (a.text.empty()) throw ValidationError(where + ": empty text");
  a.raw_text = std::move(body);
  a.title = std::move(title);
  a.author = std::move(author);
  a.label = label;
  a.split = std::move(split);
  return a;
}

}  // namespace detail

inline std::string corpus_name_from_path(const std::string& path) {
  return std::filesystem::path(path).stem().string();
}

inline Corpus load_jsonl_corpus(const std::string& path, const FieldMapping& mapping = {}) {
  Corpus c;
  c.name = corpus_name_from_path(path);
  const auto lines = read_lines(path);
  std::size_t index = 0;
  for (std::size_t ln = 0; ln < lines.size(); ++ln) {
    if (trim(lines[ln]).empty()) continue;
    const auto where = detail::record_where(path, ln + 1);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(lines[ln]);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(where + ": malformed JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw ParseError(where + ": expected a JSON object");
    std::map<std::string, const nlohmann::json*> fields;
    for (auto it = obj.begin(); it != obj.end(); ++it) fields[mapping.canonical(it.key())] = &it.value();
    if (!fields.count("text")) throw ParseError(where + ": missing 'text'");
    if (!fields.count("label")) throw ParseError(where + ": missing 'label'");
    if (!fields["text"]->is_string()) throw ParseError(where + ": 'text' must be a string");
    std::string id = fields.count("id") ? detail::json_scalar_to_string(*fields["id"])
                                        : std::to_string(index);
    auto opt = [&](const char* key) -> std::optional<std::string> {
      auto it = fields.find(key);
      if (it == fields.end() || it->second->is_null()) return std::nullopt;
      return detail::optional_text(detail::json_scalar_to_string(*it->second));
    };
    c.articles.push_back(detail::make_article(
        std::move(id), fields["text"]->get<std::string>(), opt("title"), opt("author"),
        detail::parse_label_json(*fields["label"], where), opt("split"), where));
    ++index;
  }
  if (c.articles.empty()) throw ParseError(path + ": no records");
  detail::finish_corpus(c);
  return c;
}

inline Corpus load_csv_corpus(const std::string& path, const FieldMapping& mapping = {}) {
  Corpus c;
  c.name = corpus_name_from_path(path);
  const auto rows = detail::parse_csv(read_file(path), path);
  if (rows.empty()) throw ParseError(path + ": missing header row");
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < rows[0].second.size(); ++i) {
    col[mapping.canonical(std::string(trim(rows[0].second[i])))] = i;
  }
  if (!col.count("text")) throw ParseError(path + ": header has no 'text' column");
  if (!col.count("label")) throw ParseError(path + ": header has no 'label' column");
  const std::size_t width = rows[0].second.size();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& [lineno, row] = rows[r];
    const auto where = detail::record_where(path, lineno);
    if (row.size() != width)
      throw ParseError(where + ": expected " + std::to_string(width) + " columns, got " +
                       std::to_string(row.size()));
    auto opt = [&](const char* key) -> std::optional<std::string> {
      auto it = col.find(key);
      if (it == col.end()) return std::nullopt;
      return detail::optional_text(row[it->second]);
    };
    std::string id = col.count("id") ? row[col["id"]] : std::to_string(r - 1);
    c.articles.push_back(detail::make_article(std::move(id), row[col["text"]], opt("title"),
                                              opt("author"),
                                              detail::parse_label_text(row[col["label"]], where),
                                              opt("split"), where));
  }
  if (c.articles.empty()) throw ParseError(path + ": no records");
  detail::finish_corpus(c);
  return c;
}

inline Corpus load_corpus(const std::string& path, CorpusFormat format,
                          const FieldMapping& mapping = {}) {
  return format == CorpusFormat::jsonl ? load_jsonl_corpus(path, mapping)
                                       : load_csv_corpus(path, mapping);
}

/// Builds a corpus from in-memory articles; enforces the same invariants as
/// the loaders.
inline Corpus make_corpus(std::string name, std::vector<Article> articles) {
  Corpus c;
  c.name = std::move(name);
  c.articles = std::move(articles);
  for (const auto& a : c.articles) {
    if (a.label != 0 && a.label != 1) throw ValidationError("article " + a.id + ": label not in {0, 1}");
  }
  detail::finish_corpus(c);
  return c;
}

inline nlohmann::json article_to_json(const Article& a) {
  nlohmann::json j;
  j["id"] = a.id;
  j["text"] = a.raw_text.empty() ? a.text : a.raw_text;
  if (a.title) j["title"] = *a.title;
  if (a.author) j["author"] = *a.author;
  j["label"] = a.label;
  return j;
}

inline std::string corpus_to_jsonl(const Corpus& c) {
  std::string out;
  for (const auto& a : c.articles) {
    out += article_to_json(a).dump();
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting

namespace detail {

struct PartSizes {
  std::size_t train, validation, test;
};

// validation and test get floor(ratio * n); the remainder goes to train.
inline PartSizes part_sizes(std::size_t n, const std::array<double, 3>& ratios) {
  const std::size_t val = proportion_budget(n, ratios[1]);
  const std::size_t test = proportion_budget(n, ratios[2]);
  return {n - val - test, val, test};
}

}  // namespace detail

inline SplitCorpora split(const Corpus& corpus, const SplitSpec& spec) {
  spec.validate();
  if (corpus.size() < 3) throw ValidationError("corpus needs at least 3 articles to split");

  std::vector<std::vector<std::size_t>> groups;
  if (spec.stratify) {
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < corpus.size(); ++i) by_label[corpus.articles[i].label].push_back(i);
    for (auto& [label, idx] : by_label) groups.push_back(std::move(idx));
  } else {
    groups.emplace_back(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) groups[0][i] = i;
  }

  std::mt19937_64 rng(spec.seed);
  std::vector<std::size_t> train_idx, val_idx, test_idx;
  for (auto& g : groups) {
    shuffle_in_place(g, rng);
    const auto sizes = detail::part_sizes(g.size(), spec.ratios);
    train_idx.insert(train_idx.end(), g.begin(), g.begin() + sizes.train);
    val_idx.insert(val_idx.end(), g.begin() + sizes.train, g.begin() + sizes.train + sizes.validation);
    test_idx.insert(test_idx.end(), g.begin() + sizes.train + sizes.validation, g.end());
  }

  auto build = [&](std::vector<std::size_t> idx, const char* suffix) {
    std::sort(idx.begin(), idx.end());
    std::vector<Article> arts;
    arts.reserve(idx.size());
    for (auto i : idx) arts.push_back(corpus.articles[i]);
    auto c = make_corpus(corpus.name + "." + suffix, std::move(arts));
    return c;
  };
  return {build(std::move(train_idx), "train"), build(std::move(val_idx), "val"),
          build(std::move(test_idx), "test")};
}

/// True when every article carries an external split assignment.
inline bool has_assigned_split(const Corpus& corpus) {
  return !corpus.articles.empty() &&
         std::all_of(corpus.articles.begin(), corpus.articles.end(),
                     [](const Article& a) { return a.split.has_value(); });
}

/// Partitions by each article's own `split` field (train / val|validation|dev / test).
inline SplitCorpora split_by_assignment(const Corpus& corpus) {
  std::vector<Article> tr, va, te;
  for (const auto& a : corpus.articles) {
    if (!a.split) throw ValidationError("article " + a.id + " has no split assignment");
    const auto s = normalize(*a.split);
    if (s == "train") tr.push_back(a);
    else if (s == "val" || s == "validation" || s == "dev") va.push_back(a);
    else if (s == "test") te.push_back(a);
    else throw ValidationError("article " + a.id + ": unknown split '" + *a.split + "'");
  }
  return {make_corpus(corpus.name + ".train", std::move(tr)),
          make_corpus(corpus.name + ".val", std::move(va)),
          make_corpus(corpus.name + ".test", std::move(te))};
}

}  // namespace slim

#endif  // SLIM_CORPUS_HPP
