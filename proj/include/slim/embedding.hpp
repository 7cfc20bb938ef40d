#ifndef SLIM_EMBEDDING_HPP
#define SLIM_EMBEDDING_HPP

#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "slim/corpus.hpp"
#include "slim/util.hpp"

namespace slim {

using Vector = std::vector<double>;

/// Raised when a similarity is requested for a zero-norm vector.
class UndefinedSimilarity : public Error {
 public:
  using Error::Error;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double l2_norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// (a . b) / (|a| |b|).
inline double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size())
    throw ValidationError("cosine: dimension mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  const double na = l2_norm(a);
  const double nb = l2_norm(b);
  if (na == 0.0 || nb == 0.0) throw UndefinedSimilarity("cosine: zero-norm vector");
  return dot(a, b) / (na * nb);
}

/// Word -> vector map with a fixed dimension. Vectors live in one contiguous
/// buffer in file order.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dim, std::string name) : dim_(dim), name_(std::move(name)) {
    if (dim_ == 0) throw ValidationError("embedding dimension must be positive");
  }

  /// Parses the word-vector text format: a "<dim> <count>" header followed by
  /// "<word> <v1> ... <vdim>" rows.
  static EmbeddingTable load(const std::string& path) {
    const auto lines = read_lines(path);
    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).empty()) ++first;
    if (first == lines.size()) throw ParseError(path + ": empty embedding file");

    std::istringstream header(lines[first]);
    long long dim = 0, count = 0;
    if (!(header >> dim >> count) || dim <= 0 || count < 0)
      throw ParseError(path + ":" + std::to_string(first + 1) + ": bad header, expected '<dim> <count>'");

    EmbeddingTable table(static_cast<std::size_t>(dim), corpus_name_from_path(path));
    Vector values;
    for (std::size_t ln = first + 1; ln < lines.size(); ++ln) {
      const std::string_view line = trim(lines[ln]);
      if (line.empty()) continue;
      const auto row = std::to_string(ln + 1);
      std::istringstream in{std::string(line)};
      std::string word;
      in >> word;
      values.clear();
      std::string tok;
      while (in >> tok) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
          throw ParseError(path + ":" + row + ": bad number '" + tok + "'");
        values.push_back(v);
      }
      if (values.size() != table.dim_)
        throw ParseError(path + ":" + row + ": expected " + std::to_string(table.dim_) +
                         " values, got " + std::to_string(values.size()));
      try {
        table.add(word, values);
      } catch (const ValidationError& e) {
        throw ParseError(path + ":" + row + ": " + e.what());
      }
    }
    if (table.size() != static_cast<std::size_t>(count))
      throw ParseError(path + ": header declares " + std::to_string(count) + " rows, found " +
                       std::to_string(table.size()));
    return table;
  }

  /// Adds a word (stored lowercased). Duplicates are rejected.
  void add(std::string_view word, std::span<const double> v) {
    if (v.size() != dim_)
      throw ValidationError("vector for '" + std::string(word) + "' has wrong dimension");
    auto key = normalize(word);
    if (key.empty()) throw ValidationError("empty word");
    if (index_.count(key)) throw ValidationError("duplicate word '" + key + "'");
    index_.emplace(key, words_.size());
    words_.push_back(std::move(key));
    data_.insert(data_.end(), v.begin(), v.end());
  }

  std::optional<std::span<const double>> find(std::string_view word) const {
    auto it = index_.find(std::string(word));
    if (it == index_.end()) return std::nullopt;
    return std::span<const double>(data_.data() + it->second * dim_, dim_);
  }

  bool contains(std::string_view word) const { return index_.count(std::string(word)) > 0; }

  /// Returns a copy with every vector multiplied by `factor`.
  EmbeddingTable scaled(double factor) const {
    EmbeddingTable t = *this;
    for (double& x : t.data_) x *= factor;
    return t;
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return words_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& words() const { return words_; }

 private:
  std::size_t dim_ = 0;
  std::string name_;
  std::vector<std::string> words_;
  std::vector<double> data_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Precomputed document vectors keyed by article id (JSONL {"id", "vector"}).
class DocVectors {
 public:
  static DocVectors load(const std::string& path) {
    DocVectors dv;
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
      if (!j.is_object() || !j.contains("id") || !j.contains("vector") || !j["vector"].is_array())
        throw ParseError(where + ": expected {\"id\", \"vector\"}");
      const auto id = j["id"].is_string() ? j["id"].get<std::string>() : j["id"].dump();
      Vector v;
      for (const auto& x : j["vector"]) {
        if (!x.is_number()) throw ParseError(where + ": non-numeric vector entry");
        v.push_back(x.get<double>());
      }
      if (v.empty()) throw ParseError(where + ": empty vector");
      if (dv.dim_ != 0 && v.size() != dv.dim_) throw ParseError(where + ": dimension mismatch");
      dv.dim_ = v.size();
      if (!dv.vectors_.emplace(id, std::move(v)).second)
        throw ParseError(where + ": duplicate id '" + id + "'");
    }
    return dv;
  }

  void set(std::string id, Vector v) {
    if (dim_ != 0 && v.size() != dim_) throw ValidationError("document vector dimension mismatch");
    dim_ = v.size();
    vectors_[std::move(id)] = std::move(v);
  }

  const Vector* find(const std::string& id) const {
    auto it = vectors_.find(id);
    return it == vectors_.end() ? nullptr : &it->second;
  }

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return vectors_.size(); }

 private:
  std::size_t dim_ = 0;
  std::unordered_map<std::string, Vector> vectors_;
};

/// Mean of the in-vocabulary word vectors (duplicates counted). Returns
/// nullopt when no word is in the table.
inline std::optional<Vector> mean_word_vector(std::span<const std::string> words,
                                              const EmbeddingTable& table) {
  Vector sum(table.dim(), 0.0);
  std::size_t n = 0;
  for (const auto& w : words) {
    if (auto v = table.find(w)) {
      for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*v)[i];
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  for (double& x : sum) x /= static_cast<double>(n);
  return sum;
}

/// Document embedding: an external vector for `article_id` when one is
/// supplied, otherwise the mean of in-vocabulary word vectors.
inline Vector doc_embedding(const std::string& article_id, std::span<const std::string> words,
                            const EmbeddingTable& table, const DocVectors* external = nullptr) {
  if (external) {
    if (const Vector* v = external->find(article_id)) {
      if (v->size() != table.dim())
        throw ValidationError("document vector for '" + article_id + "' has dimension " +
                              std::to_string(v->size()) + ", table has " + std::to_string(table.dim()));
      return *v;
    }
  }
  auto mean = mean_word_vector(words, table);
  if (!mean) throw ValidationError("article '" + article_id + "': no in-vocabulary words and no document vector");
  return *std::move(mean);
}

}  // namespace slim

#endif  // SLIM_EMBEDDING_HPP
