#include <random>

#include <gtest/gtest.h>

#include "slim/pipeline.hpp"

namespace slim {
namespace {

LimitedView view(const std::string& id, ViewKind kind, std::vector<std::string> words) {
  LimitedView v;
  v.article_id = id;
  v.kind = kind;
  v.words = std::move(words);
  return v;
}

TEST(ConcatViews, SeparatorBetweenSegments) {
  const auto a = view("n1", ViewKind::keyword, {"a", "b"});
  const auto b = view("n1", ViewKind::ner, {"c"});
  const auto m = concat_views(a, b);
  EXPECT_EQ(m.words, (std::vector<std::string>{"a", "b", kSeparatorToken, "c"}));
  EXPECT_EQ(m.kind, ViewKind::multimodal);
  EXPECT_EQ(m.provenance, (std::vector<ViewKind>{ViewKind::keyword, ViewKind::ner}));
}

TEST(ConcatViews, Errors) {
  const auto a = view("n1", ViewKind::keyword, {"a"});
  const auto b = view("n2", ViewKind::title, {"b"});
  EXPECT_THROW(concat_views(a, b), ValidationError);
  const LimitedView one[] = {a};
  EXPECT_THROW(concat_views(one), ValidationError);
}

TEST(ConcatViews, LengthAndProvenanceProperty) {
  std::mt19937_64 rng(21);
  const ViewKind kinds[] = {ViewKind::keyword, ViewKind::pos, ViewKind::ner, ViewKind::title, ViewKind::author};
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = 2 + uniform_below(rng, 4);
    std::vector<LimitedView> vs;
    std::size_t total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<std::string> w(uniform_below(rng, 6));
      for (auto& x : w) x = "t" + std::to_string(uniform_below(rng, 9));
      total += w.size();
      vs.push_back(view("id", kinds[uniform_below(rng, 5)], w));
    }
    const auto m = concat_views(vs);
    EXPECT_EQ(m.words.size(), total + n - 1);
    EXPECT_EQ(std::count(m.words.begin(), m.words.end(), kSeparatorToken), static_cast<long>(n - 1));
    ASSERT_EQ(m.provenance.size(), n);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(m.provenance[i], vs[i].kind);
    // Nested concatenation flattens provenance.
    const auto nested = concat_views(m, vs[0]);
    EXPECT_EQ(nested.provenance.size(), n + 1);
  }
}

TEST(MetadataView, TitleAuthorAndMissing) {
  Article a;
  a.id = "n1";
  a.text = "body";
  a.title = "COVID-19: Vaccine \"Myths\" Busted";
  const auto t = metadata_view(a, MetadataField::title);
  EXPECT_EQ(t.words, (std::vector<std::string>{"covid-19", "vaccine", "myths", "busted"}));
  EXPECT_EQ(t.kind, ViewKind::title);
  const auto au = metadata_view(a, MetadataField::author);
  EXPECT_TRUE(au.words.empty());
  EXPECT_EQ(au.warning, "missing-field");
}

TEST(ViewSpec, ParseAndLabel) {
  const auto s = parse_view_spec("keyword@0.3+title");
  EXPECT_EQ(s.kind, ViewKind::keyword);
  EXPECT_EQ(s.k, 0.3);
  EXPECT_EQ(s.second, ViewKind::title);
  EXPECT_EQ(s.label(), "keyword@0.30+title");
  EXPECT_EQ(s.output_kind(), ViewKind::multimodal);
  EXPECT_EQ(parse_view_spec("full").label(), "full");
  EXPECT_THROW(parse_view_spec("pos"), ValidationError);
  EXPECT_THROW(parse_view_spec("ner@0.1"), ValidationError);
  EXPECT_THROW(parse_view_spec("keyword@1.5"), ValidationError);
  EXPECT_THROW(parse_view_spec("keyword@x"), ValidationError);
  EXPECT_THROW(parse_view_spec("pos@0.1+title"), ValidationError);
  EXPECT_THROW(parse_view_spec("keyword@0.1+pos"), ValidationError);
  EXPECT_THROW(parse_view_spec("sentiment"), ValidationError);
}

TEST(BuildView, MultimodalKeywordPlusTitle) {
  EmbeddingTable t(2, "toy");
  t.add("vaccine", Vector{1, 0.1});
  t.add("safe", Vector{0.9, 0.3});
  t.add("hoax", Vector{-1, 0});
  Article a;
  a.id = "n1";
  a.raw_text = "Vaccine safe vaccine safe the the the the hoax vaccine";
  a.text = normalize(a.raw_text);
  a.title = "Vaccine Facts";
  ViewResources res;
  res.embeddings = &t;
  const auto v = build_view(a, parse_view_spec("keyword@0.2+title"), res);
  EXPECT_EQ(v.kind, ViewKind::multimodal);
  EXPECT_EQ(v.k_used, 0.2);
  ASSERT_EQ(v.words.size(), 5u);
  EXPECT_EQ(v.words[2], kSeparatorToken);
  EXPECT_EQ((std::vector<std::string>{v.words[3], v.words[4]}), (std::vector<std::string>{"vaccine", "facts"}));
}

TEST(ViewJson, RoundTrip) {
  auto m = concat_views(view("n1", ViewKind::keyword, {"a"}), view("n1", ViewKind::title, {"b"}));
  m.k_used = 0.25;
  m.warning = "note";
  EXPECT_EQ(view_from_json(view_to_json(m)), m);
}

TEST(KGrid, DefaultGrid) {
  const auto g = default_k_grid(0.35);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.front(), 0.10);
  EXPECT_DOUBLE_EQ(g.back(), 0.35);
  EXPECT_EQ(expand_grid(ViewKind::ner, g).size(), 1u);
  EXPECT_EQ(expand_grid(ViewKind::pos, g).size(), 6u);
}

}  // namespace
}  // namespace slim
