#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "slim/classify.hpp"

namespace slim {
namespace {

Dataset separable(std::mt19937_64& rng, std::size_t n) {
  Dataset d(2);
  for (std::size_t i = 0; i < n; ++i) {
    const int y = static_cast<int>(i % 2);
    const double cx = y ? 2.0 : -2.0;
    const double x[] = {cx + 0.5 * standard_normal(rng), 0.5 * standard_normal(rng)};
    d.add(x, y);
  }
  return d;
}

ClassifierModel random_model(std::mt19937_64& rng, std::size_t dim) {
  ClassifierModel m(dim, "test");
  for (auto& w : m.weights) w = standard_normal(rng);
  m.bias = {standard_normal(rng), standard_normal(rng)};
  return m;
}

double accuracy_on(const ClassifierModel& m, const Dataset& d) {
  double ok = 0;
  for (std::size_t i = 0; i < d.size(); ++i) ok += predict(m, d.row(i)).label == d.labels[i];
  return ok / static_cast<double>(d.size());
}

TEST(HashedBow, MatchesIndependentHash) {
  const Featurizer f(FeaturizerMode::hashed_bow, nullptr, 8);
  const std::vector<std::string> words{"a", "a", "b"};
  const auto fv = f(words);
  Vector expect(8, 0.0);
  expect[oracle::fnv1a("a") % 8] += 2;
  expect[oracle::fnv1a("b") % 8] += 1;
  double n = 0;
  for (double x : expect) n += x * x;
  for (double& x : expect) x /= std::sqrt(n);
  ASSERT_EQ(fv.values.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(fv.values[i], expect[i], 1e-15);
  EXPECT_NEAR(l2_norm(fv.values), 1.0, 1e-12);
  EXPECT_FALSE(fv.empty);
}

TEST(HashedBow, KnownFnvValues) {
  // Published FNV-1a 64 test vectors.
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ull);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cull);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ull);
  EXPECT_EQ(oracle::fnv1a("foobar"), 0x85944171f73967e8ull);
}

TEST(Featurizer, EmptyViewsAndConcatLayout) {
  EmbeddingTable t(3, "toy");
  t.add("x", Vector{1, 2, 3});
  const Featurizer bow(FeaturizerMode::hashed_bow, nullptr, 16);
  const auto e = bow(std::vector<std::string>{});
  EXPECT_TRUE(e.empty);
  EXPECT_EQ(e.values, Vector(16, 0.0));
  const Featurizer both(FeaturizerMode::concat_both, &t, 4);
  EXPECT_EQ(both.dim(), 7u);
  const auto fv = both(std::vector<std::string>{"x", kSeparatorToken});
  ASSERT_EQ(fv.values.size(), 7u);
  EXPECT_EQ((Vector{fv.values[0], fv.values[1], fv.values[2]}), (Vector{1, 2, 3}));
  const Featurizer mean(FeaturizerMode::mean_embedding, &t);
  EXPECT_TRUE(mean(std::vector<std::string>{"unknown"}).empty);
  EXPECT_THROW(Featurizer(FeaturizerMode::mean_embedding, nullptr), ValidationError);
  EXPECT_NE(mean.id(), both.id());
}

TEST(Train, ZeroEpochsGivesLn2) {
  std::mt19937_64 rng(1);
  const auto d = separable(rng, 50);
  TrainConfig cfg;
  cfg.epochs = 0;
  const auto r = train(d, cfg);
  EXPECT_NEAR(r.final_loss, std::log(2.0), 1e-12);
  // Equal logits: every prediction is class 0.
  for (std::size_t i = 0; i < d.size(); ++i) EXPECT_EQ(predict(r.model, d.row(i)).label, 0);
}

TEST(Train, SeparableDataReachesHighAccuracy) {
  std::mt19937_64 rng(2);
  const auto d = separable(rng, 200);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 50;
  const auto r = train(d, cfg);
  EXPECT_GE(accuracy_on(r.model, d), 0.99);
  EXPECT_LT(r.final_loss, r.epoch_losses.front());
}

TEST(Train, DefaultSettingsDecreaseLoss) {
  std::mt19937_64 rng(3);
  const auto d = separable(rng, 100);
  const auto r = train(d, TrainConfig{});
  EXPECT_LT(r.final_loss, std::log(2.0));
}

TEST(Train, FirstStepMovesEachParameterByLearningRate) {
  // With zero moments, one bias-corrected step is lr * g / (|g| + eps).
  Dataset d(1);
  d.add(Vector{1.0}, 1);
  d.add(Vector{-1.0}, 0);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.epochs = 1;
  cfg.batch_size = 2;
  const ClassifierModel zero(1, "");
  const auto g = loss_and_gradient(zero, d);
  const auto r = train(d, cfg);
  for (std::size_t i = 0; i < 2; ++i) {
    const double gi = g.d_weights[i];
    EXPECT_NEAR(r.model.weights[i], -cfg.learning_rate * gi / (std::abs(gi) + cfg.epsilon), 1e-15);
  }
  EXPECT_NEAR(r.model.bias[0], 0.0, 1e-15);  // zero gradient for the balanced bias
}

TEST(Train, DeterministicAndSeedSensitive) {
  std::mt19937_64 rng(4);
  const auto d = separable(rng, 90);
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 8;
  cfg.seed = 11;
  const auto a = train(d, cfg, "f");
  const auto b = train(d, cfg, "f");
  EXPECT_EQ(a.model, b.model);
  cfg.seed = 12;
  EXPECT_NE(train(d, cfg, "f").model.weights, a.model.weights);
}

TEST(Train, Errors) {
  Dataset d(1);
  d.add(Vector{1.0}, 1);
  d.add(Vector{2.0}, 1);
  EXPECT_THROW(train(d, TrainConfig{}), ValidationError);
  EXPECT_THROW(train(Dataset(1), TrainConfig{}), ValidationError);
  TrainConfig bad;
  bad.learning_rate = 0;
  EXPECT_THROW(bad.validate(), ValidationError);
  EXPECT_THROW(d.add(Vector{NAN}, 0), ValidationError);
  EXPECT_THROW(d.add(Vector{1.0, 2.0}, 0), ValidationError);
}

TEST(LossGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t dim = 1 + uniform_below(rng, 6);
    Dataset d(dim);
    for (int i = 0; i < 12; ++i) {
      Vector x(dim);
      for (auto& v : x) v = standard_normal(rng);
      d.add(x, static_cast<int>(uniform_below(rng, 2)));
    }
    auto m = random_model(rng, dim);
    const double l2 = trial % 2 ? 0.1 : 0.0;
    const auto g = loss_and_gradient(m, d, l2);
    const double h = 1e-5;
    auto check = [&](double& p, double analytic) {
      const double keep = p;
      p = keep + h;
      const double up = loss_and_gradient(m, d, l2).loss;
      p = keep - h;
      const double down = loss_and_gradient(m, d, l2).loss;
      p = keep;
      const double numeric = (up - down) / (2 * h);
      EXPECT_LE(std::abs(numeric - analytic) / std::max(1.0, std::abs(numeric)), 1e-6);
    };
    for (std::size_t i = 0; i < m.weights.size(); ++i) check(m.weights[i], g.d_weights[i]);
    for (std::size_t c = 0; c < 2; ++c) check(m.bias[c], g.d_bias[c]);
  }
}

TEST(Predict, ProbabilitiesAndFeaturizerCheck) {
  ClassifierModel m(1, "hashed-bow:fnv1a64:8");
  m.weights = {0.0, 1.0};
  const auto p = predict(m, Vector{2.0});
  EXPECT_EQ(p.label, 1);
  EXPECT_NEAR(p.prob_real, 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
  const Featurizer wrong(FeaturizerMode::hashed_bow, nullptr, 16);
  EXPECT_THROW(predict(m, wrong, FeatureVector{Vector(16, 0.0), true}), ValidationError);
  EXPECT_THROW(m.logits(Vector{1.0, 2.0}), ValidationError);
}

TEST(ModelJson, RoundTripAndRejectsForeignFiles) {
  std::mt19937_64 rng(6);
  auto m = random_model(rng, 4);
  m.featurizer_id = "mean-embedding:toy:4";
  EXPECT_EQ(model_from_json(nlohmann::json::parse(model_to_json(m).dump())), m);
  auto j = model_to_json(m);
  j["format"] = "other";
  EXPECT_THROW(model_from_json(j), ParseError);
  auto k = model_to_json(m);
  k["weights"][0] = std::vector<double>{1.0};
  EXPECT_THROW(model_from_json(k), ParseError);
}

}  // namespace
}  // namespace slim
