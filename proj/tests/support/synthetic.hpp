#ifndef SLIM_TEST_SYNTHETIC_HPP
#define SLIM_TEST_SYNTHETIC_HPP

// Generated corpora with class-discriminative words planted at known rates.
//
// Each article mixes stop-word filler with content words. A content word is
// drawn from the article's own class list with probability `own_rate`,
// otherwise from the other class list. Every content word vector is a shared
// topic direction plus an individual random part, so all of them are keyword
// candidates and the extractor has to choose among them.

#include <random>
#include <string>
#include <vector>

#include "slim/corpus.hpp"
#include "slim/embedding.hpp"
#include "slim/keywords.hpp"

namespace synthetic {

struct Options {
  std::size_t articles = 1000;
  std::size_t words_per_class = 100;
  double own_rate = 0.7;
  double content_share = 0.5;
  std::size_t min_len = 80;
  std::size_t max_len = 120;
  std::size_t dim = 16;
  std::uint64_t seed = 1;
};

struct Data {
  slim::Corpus corpus;
  slim::EmbeddingTable table;
};

inline std::string content_word(int label, std::size_t i) {
  return (label == 0 ? "fk" : "rl") + std::to_string(i);
}

inline Data make(const Options& o) {
  std::mt19937_64 rng(o.seed);
  Data d{{}, slim::EmbeddingTable(o.dim, "synthetic")};

  std::vector<std::string> filler;
  for (auto w : {"the", "a", "of", "and", "to", "in", "that", "is", "was", "for", "on", "with", "as", "by",
                 "it", "this", "from", "at", "be", "were"})
    filler.emplace_back(w);
  for (const auto& w : filler) {
    slim::Vector v(o.dim);
    for (auto& x : v) x = 0.2 * slim::standard_normal(rng);
    d.table.add(w, v);
  }
  for (int label = 0; label < 2; ++label) {
    for (std::size_t i = 0; i < o.words_per_class; ++i) {
      slim::Vector v(o.dim);
      for (auto& x : v) x = 0.35 * slim::standard_normal(rng);
      v[0] += 1.0;  // shared topic direction
      d.table.add(content_word(label, i), v);
    }
  }

  std::vector<slim::Article> arts;
  for (std::size_t n = 0; n < o.articles; ++n) {
    const int label = static_cast<int>(n % 2);
    const auto len = o.min_len + slim::uniform_below(rng, o.max_len - o.min_len + 1);
    std::string text;
    for (std::size_t i = 0; i < len; ++i) {
      std::string w;
      if (slim::uniform_unit(rng) < o.content_share) {
        const int from = slim::uniform_unit(rng) < o.own_rate ? label : 1 - label;
        w = content_word(from, slim::uniform_below(rng, o.words_per_class));
      } else {
        w = filler[slim::uniform_below(rng, filler.size())];
      }
      if (i) text += ' ';
      text += w;
    }
    slim::Article a;
    a.id = "syn" + std::to_string(n);
    a.raw_text = text;
    a.text = text;
    a.label = label;
    arts.push_back(std::move(a));
  }
  d.corpus = slim::make_corpus("synthetic", std::move(arts));
  return d;
}

}  // namespace synthetic

#endif  // SLIM_TEST_SYNTHETIC_HPP
