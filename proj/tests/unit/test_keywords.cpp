#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slim/keywords.hpp"

namespace slim {
namespace {

// Unit vector in the plane at cosine c with (1, 0).
Vector at_cosine(double c) { return {c, std::sqrt(1.0 - c * c)}; }

struct RandomFixture {
  EmbeddingTable table;
  Vector doc;
  std::vector<std::string> candidates;
  std::map<std::string, std::vector<double>> by_word;
};

RandomFixture random_fixture(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  RandomFixture f{EmbeddingTable(dim, "rand"), Vector(dim), {}, {}};
  for (auto& x : f.doc) x = standard_normal(rng);
  for (std::size_t i = 0; i < n; ++i) {
    Vector v(dim);
    for (auto& x : v) x = standard_normal(rng);
    const std::string w = "w" + std::to_string(i);
    f.table.add(w, v);
    f.candidates.push_back(w);
    f.by_word[w] = v;
  }
  return f;
}

TEST(KeywordCandidates, StrictlyPositiveCosineOnly) {
  EmbeddingTable t(2, "fixture");
  t.add("alpha", at_cosine(0.9));
  t.add("bravo", at_cosine(0.4));
  t.add("charlie", at_cosine(0.1));
  t.add("delta", at_cosine(0.0));
  t.add("echo", at_cosine(-0.2));
  const std::vector<std::string> words{"alpha", "bravo", "charlie", "delta", "echo", "foxtrot"};
  const Vector doc{1, 0};
  const auto c = keyword_candidates(words, t, doc);
  EXPECT_EQ(c, (std::vector<std::string>{"alpha", "bravo", "charlie"}));
}

TEST(KeywordCandidates, DistinctSortedStopwordsRemoved) {
  EmbeddingTable t(2, "fixture");
  t.add("the", Vector{1, 0});
  t.add("zeta", Vector{1, 0.1});
  t.add("beta", Vector{1, 0.2});
  const std::vector<std::string> words{"zeta", "the", "beta", "zeta"};
  const Vector doc{1, 0};
  EXPECT_EQ(keyword_candidates(words, t, doc), (std::vector<std::string>{"beta", "zeta"}));
  EXPECT_EQ(keyword_candidates(words, t, doc, false), (std::vector<std::string>{"beta", "the", "zeta"}));
  const Vector zero{0, 0};
  EXPECT_THROW(keyword_candidates(words, t, zero), UndefinedSimilarity);
}

TEST(MmrRank, FiveCandidateFixtureMatchesOracle) {
  EmbeddingTable t(3, "fixture");
  std::map<std::string, std::vector<double>> cand = {
      {"vaccine", {0.9, 0.1, 0.0}}, {"vaccines", {0.88, 0.12, 0.01}}, {"mask", {0.5, 0.7, 0.1}},
      {"lockdown", {0.4, 0.1, 0.8}}, {"hoax", {0.3, -0.2, 0.5}}};
  std::vector<std::string> words;
  for (const auto& [w, v] : cand) {
    t.add(w, v);
    words.push_back(w);
  }
  const Vector doc{1.0, 0.2, 0.2};
  const auto got = mmr_rank(doc, words, 3, 0.5, t);
  EXPECT_EQ(got, oracle::mmr(doc, cand, 3, 0.5));
  // The near-duplicate of the first pick is penalized away.
  EXPECT_EQ(got, (std::vector<std::string>{"vaccines", "lockdown", "mask"}));
}

TEST(MmrRank, RandomFixturesMatchOracle) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = 1 + uniform_below(rng, 12);
    auto f = random_fixture(rng, n, 2 + uniform_below(rng, 6));
    const auto budget = uniform_below(rng, n + 3);
    const double lambda = std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0}[uniform_below(rng, 5)];
    EXPECT_EQ(mmr_rank(f.doc, f.candidates, budget, lambda, f.table),
              oracle::mmr(f.doc, f.by_word, budget, lambda));
  }
}

TEST(MmrRank, BudgetLawAndPrefixProperty) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto n = uniform_below(rng, 15);
    auto f = random_fixture(rng, n, 4);
    const auto full = mmr_rank(f.doc, f.candidates, n, 0.5, f.table);
    for (std::size_t b = 0; b <= n + 2; ++b) {
      const auto part = mmr_rank(f.doc, f.candidates, b, 0.5, f.table);
      ASSERT_EQ(part.size(), std::min(b, n));
      EXPECT_TRUE(std::equal(part.begin(), part.end(), full.begin()));
      EXPECT_EQ(std::set<std::string>(part.begin(), part.end()).size(), part.size());
    }
  }
}

TEST(MmrRank, LambdaExtremes) {
  EmbeddingTable t(2, "fixture");
  t.add("c", at_cosine(0.3));
  t.add("a", at_cosine(0.9));
  t.add("b", at_cosine(0.6));
  const std::vector<std::string> cands{"a", "b", "c"};
  const Vector doc{1, 0};
  // Pure relevance ranks by cosine to the document.
  EXPECT_EQ(mmr_rank(doc, cands, 3, 1.0, t), (std::vector<std::string>{"a", "b", "c"}));
  // With lambda = 0 every first-step score is 0, so the tie goes to "a".
  EXPECT_EQ(mmr_rank(doc, cands, 1, 0.0, t).front(), "a");
}

TEST(MmrRank, TiesGoToLexicographicallySmallest) {
  EmbeddingTable t(2, "fixture");
  t.add("zulu", Vector{1, 1});
  t.add("alpha", Vector{1, 1});
  t.add("mike", Vector{1, 1});
  const std::vector<std::string> cands{"zulu", "mike", "alpha"};
  const Vector doc{1, 0};
  EXPECT_EQ(mmr_rank(doc, cands, 3, 0.5, t), (std::vector<std::string>{"alpha", "mike", "zulu"}));
}

TEST(MmrSelect, BudgetIsFloorOfProportion) {
  std::mt19937_64 rng(5);
  auto f = random_fixture(rng, 50, 4);
  KeywordConfig cfg;
  for (std::size_t len : {1u, 9u, 10u, 19u, 20u, 99u, 100u, 400u}) {
    for (double k : {0.10, 0.15, 0.20, 0.25, 0.30, 0.35}) {
      cfg.k = k;
      const auto v = mmr_select("x", f.doc, f.candidates, len, cfg, f.table);
      const auto budget = static_cast<std::size_t>(std::floor(static_cast<double>(len) * k + 1e-9));
      EXPECT_EQ(v.words.size(), std::min<std::size_t>(budget, 50)) << len << " " << k;
      EXPECT_EQ(v.warning.has_value(), budget == 0);
      EXPECT_EQ(v.k_used, k);
    }
  }
}

TEST(MmrSelect, FloatingPointProportionsRoundAsExpected) {
  // 0.3 * 10 is 2.9999999999999996 in binary floating point; the budget is 3.
  EXPECT_EQ(proportion_budget(10, 0.3), 3u);
  EXPECT_EQ(proportion_budget(20, 0.35), 7u);
  EXPECT_EQ(proportion_budget(9, 0.1), 0u);
  EXPECT_EQ(proportion_budget(100, 0.07), 7u);
}

TEST(MmrSelect, ZeroBudgetWarns) {
  EmbeddingTable t(2, "fixture");
  t.add("a", Vector{1, 0});
  const std::vector<std::string> cands{"a"};
  const Vector doc{1, 0};
  const auto v = mmr_select("short", doc, cands, 5, KeywordConfig{0.10, 0.5, true}, t);
  EXPECT_TRUE(v.words.empty());
  EXPECT_EQ(v.warning, "zero-budget");
}

TEST(ExtractKeywords, ViewWordsComeFromArticle) {
  std::mt19937_64 rng(8);
  EmbeddingTable t(5, "rand");
  std::vector<std::string> vocab;
  for (int i = 0; i < 40; ++i) {
    Vector v(5);
    for (auto& x : v) x = standard_normal(rng);
    vocab.push_back("v" + std::to_string(i));
    t.add(vocab.back(), v);
  }
  t.add("the", Vector{1, 1, 1, 1, 1});
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> words;
    const auto len = 10 + uniform_below(rng, 60);
    for (std::size_t i = 0; i < len; ++i)
      words.push_back(i % 7 == 0 ? "the" : i % 11 == 0 ? "unknownword" : vocab[uniform_below(rng, vocab.size())]);
    const auto v = extract_keywords("a", words, t, KeywordConfig{0.3, 0.5, true});
    EXPECT_LE(v.words.size(), proportion_budget(len, 0.3));
    std::set<std::string> seen;
    for (const auto& w : v.words) {
      EXPECT_NE(std::find(words.begin(), words.end(), w), words.end());
      EXPECT_FALSE(is_stopword(w));
      EXPECT_TRUE(seen.insert(w).second);
    }
  }
}

TEST(ExtractKeywords, UsesExternalDocumentVector) {
  EmbeddingTable t(2, "fixture");
  t.add("east", Vector{1, 0});
  t.add("north", Vector{0, 1});
  const std::vector<std::string> words{"east", "north", "east", "north", "east", "north", "east",
                                       "north", "east", "north"};
  DocVectors dv;
  dv.set("a", Vector{0, 1});
  const auto v = extract_keywords("a", words, t, KeywordConfig{0.10, 0.5, true}, &dv);
  EXPECT_EQ(v.words, (std::vector<std::string>{"north"}));
}

TEST(KeywordConfig, Validation) {
  EXPECT_THROW((KeywordConfig{0.0, 0.5, true}.validate()), ValidationError);
  EXPECT_THROW((KeywordConfig{1.5, 0.5, true}.validate()), ValidationError);
  EXPECT_THROW((KeywordConfig{0.1, -0.1, true}.validate()), ValidationError);
  EXPECT_NO_THROW((KeywordConfig{1.0, 1.0, false}.validate()));
}

}  // namespace
}  // namespace slim
