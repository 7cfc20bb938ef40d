#ifndef SLIM_CLASSIFY_HPP
#define SLIM_CLASSIFY_HPP

// Softmax-linear classifier over view features, trained on mean
// cross-entropy with bias-corrected adaptive-moment updates.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "slim/embedding.hpp"
#include "slim/view.hpp"

namespace slim {

inline constexpr std::size_t kNumClasses = 2;

// ---------------------------------------------------------------------------
// Features

struct FeatureVector {
  Vector values;
  bool empty = false;  // no usable words; values are all zero

  std::size_t dim() const { return values.size(); }
};

enum class FeaturizerMode { mean_embedding, hashed_bow, concat_both };

inline std::string_view to_string(FeaturizerMode m) {
  switch (m) {
    case FeaturizerMode::mean_embedding: return "mean-embedding";
    case FeaturizerMode::hashed_bow: return "hashed-bow";
    case FeaturizerMode::concat_both: return "concat-both";
  }
  return "?";
}

inline FeaturizerMode parse_featurizer_mode(std::string_view s) {
  if (s == "mean-embedding") return FeaturizerMode::mean_embedding;
  if (s == "hashed-bow") return FeaturizerMode::hashed_bow;
  if (s == "concat-both") return FeaturizerMode::concat_both;
  throw ValidationError("unknown featurizer: " + std::string(s));
}

/// Bucket of a word in the hashed bag of words: FNV-1a 64 of its bytes, mod dim.
inline std::size_t hash_bucket(std::string_view word, std::size_t dim) {
  return static_cast<std::size_t>(fnv1a64(word) % dim);
}

class Featurizer {
 public:
  Featurizer(FeaturizerMode mode, const EmbeddingTable* table, std::size_t hash_dim = 4096)
      : mode_(mode), table_(table), hash_dim_(hash_dim) {
    if (hash_dim_ == 0) throw ValidationError("hash dimension must be positive");
    if (mode_ != FeaturizerMode::hashed_bow && !table_)
      throw ValidationError(std::string(to_string(mode_)) + " featurizer needs an embedding table");
  }

  std::size_t dim() const {
    switch (mode_) {
      case FeaturizerMode::mean_embedding: return table_->dim();
      case FeaturizerMode::hashed_bow: return hash_dim_;
      case FeaturizerMode::concat_both: return table_->dim() + hash_dim_;
    }
    return 0;
  }

  /// Identifies the feature space; models refuse inputs from another one.
  std::string id() const {
    switch (mode_) {
      case FeaturizerMode::mean_embedding:
        return "mean-embedding:" + table_->name() + ":" + std::to_string(table_->dim());
      case FeaturizerMode::hashed_bow:
        return "hashed-bow:fnv1a64:" + std::to_string(hash_dim_);
      case FeaturizerMode::concat_both:
        return "concat-both:" + table_->name() + ":" + std::to_string(table_->dim()) + ":fnv1a64:" +
               std::to_string(hash_dim_);
    }
    return {};
  }

  FeaturizerMode mode() const { return mode_; }

  FeatureVector operator()(std::span<const std::string> words) const {
    FeatureVector fv;
    bool any = false;
    if (mode_ == FeaturizerMode::mean_embedding || mode_ == FeaturizerMode::concat_both) {
      if (auto mean = mean_word_vector(words, *table_)) {
        fv.values = std::move(*mean);
        any = true;
      } else {
        fv.values.assign(table_->dim(), 0.0);
      }
    }
    if (mode_ == FeaturizerMode::hashed_bow || mode_ == FeaturizerMode::concat_both) {
      Vector bow(hash_dim_, 0.0);
      bool any_bow = false;
      for (const auto& w : words) {
        if (w == kSeparatorToken) continue;
        bow[hash_bucket(w, hash_dim_)] += 1.0;
        any_bow = true;
      }
      if (any_bow) {
        const double n = l2_norm(bow);
        for (double& x : bow) x /= n;
      }
      any = any || any_bow;
      fv.values.insert(fv.values.end(), bow.begin(), bow.end());
    }
    fv.empty = !any;
    return fv;
  }

  FeatureVector operator()(const LimitedView& v) const { return (*this)(std::span<const std::string>(v.words)); }

 private:
  FeaturizerMode mode_;
  const EmbeddingTable* table_;
  std::size_t hash_dim_;
};

// ---------------------------------------------------------------------------
// Model

struct TrainConfig {
  double learning_rate = 5e-5;
  double epsilon = 1e-8;
  double beta1 = 0.9;
  double beta2 = 0.999;
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  std::uint64_t seed = 0;
  double l2 = 0.0;

  void validate() const {
    if (!(learning_rate > 0.0)) throw ValidationError("learning rate must be positive");
    if (!(epsilon > 0.0)) throw ValidationError("epsilon must be positive");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
      throw ValidationError("beta1 and beta2 must be in (0, 1)");
    if (batch_size == 0) throw ValidationError("batch size must be positive");
    if (l2 < 0.0) throw ValidationError("l2 must be nonnegative");
  }
};

/// Row-major feature matrix with 0/1 labels.
struct Dataset {
  std::size_t dim = 0;
  std::vector<double> features;
  std::vector<int> labels;

  explicit Dataset(std::size_t d = 0) : dim(d) {}

  std::size_t size() const { return labels.size(); }

  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(features.data() + i * dim, dim);
  }

  void add(std::span<const double> x, int label) {
    if (x.size() != dim) throw ValidationError("feature dimension mismatch in dataset");
    for (double v : x)
      if (!std::isfinite(v)) throw ValidationError("non-finite feature value");
    if (label != 0 && label != 1) throw ValidationError("label not in {0, 1}");
    features.insert(features.end(), x.begin(), x.end());
    labels.push_back(label);
  }
};

struct ClassifierModel {
  std::size_t dim = 0;
  std::vector<double> weights;  // kNumClasses x dim, row-major
  std::array<double, kNumClasses> bias{0.0, 0.0};
  std::string featurizer_id;

  ClassifierModel() = default;
  ClassifierModel(std::size_t d, std::string fid)
      : dim(d), weights(kNumClasses * d, 0.0), featurizer_id(std::move(fid)) {}

  std::array<double, kNumClasses> logits(std::span<const double> x) const {
    if (x.size() != dim)
      throw ValidationError("feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                            std::to_string(dim));
    std::array<double, kNumClasses> z{};
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      z[c] = bias[c] + dot(std::span<const double>(weights.data() + c * dim, dim), x);
    }
    return z;
  }

  bool operator==(const ClassifierModel&) const = default;
};

inline std::array<double, kNumClasses> softmax(const std::array<double, kNumClasses>& z) {
  const double m = std::max(z[0], z[1]);
  const double e0 = std::exp(z[0] - m), e1 = std::exp(z[1] - m);
  const double s = e0 + e1;
  return {e0 / s, e1 / s};
}

struct Prediction {
  int label = 0;
  std::array<double, kNumClasses> logits{};
  double prob_real = 0.5;  // softmax probability of class 1
};

/// argmax over logits; ties go to class 0.
inline int argmax_label(const std::array<double, kNumClasses>& z) { return z[1] > z[0] ? 1 : 0; }

inline Prediction predict(const ClassifierModel& model, std::span<const double> x) {
  Prediction p;
  p.logits = model.logits(x);
  p.label = argmax_label(p.logits);
  p.prob_real = softmax(p.logits)[1];
  return p;
}

/// Refuses features from a featurizer other than the one the model was trained on.
inline Prediction predict(const ClassifierModel& model, const Featurizer& featurizer, const FeatureVector& fv) {
  if (featurizer.id() != model.featurizer_id)
    throw ValidationError("featurizer mismatch: model expects '" + model.featurizer_id + "', got '" +
                          featurizer.id() + "'");
  return predict(model, fv.values);
}

struct LossGradient {
  double loss = 0.0;
  std::vector<double> d_weights;
  std::array<double, kNumClasses> d_bias{0.0, 0.0};
};

/// Mean cross-entropy over `rows` plus 0.5 * l2 * |W|^2, and its gradient.
inline LossGradient loss_and_gradient(const ClassifierModel& model, const Dataset& data,
                                      std::span<const std::size_t> rows, double l2 = 0.0) {
  LossGradient g;
  g.d_weights.assign(model.weights.size(), 0.0);
  const double inv_n = 1.0 / static_cast<double>(rows.size());
  for (std::size_t r : rows) {
    const auto x = data.row(r);
    const auto z = model.logits(x);
    const double m = std::max(z[0], z[1]);
    const double lse = m + std::log(std::exp(z[0] - m) + std::exp(z[1] - m));
    const int y = data.labels[r];
    g.loss += (lse - z[y]) * inv_n;
    const auto p = softmax(z);
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const double delta = (p[c] - (static_cast<int>(c) == y ? 1.0 : 0.0)) * inv_n;
      g.d_bias[c] += delta;
      double* gw = g.d_weights.data() + c * model.dim;
      for (std::size_t j = 0; j < model.dim; ++j) gw[j] += delta * x[j];
    }
  }
  if (l2 > 0.0) {
    double sq = 0.0;
    for (std::size_t i = 0; i < model.weights.size(); ++i) {
      sq += model.weights[i] * model.weights[i];
      g.d_weights[i] += l2 * model.weights[i];
    }
    g.loss += 0.5 * l2 * sq;
  }
  return g;
}

inline LossGradient loss_and_gradient(const ClassifierModel& model, const Dataset& data, double l2 = 0.0) {
  std::vector<std::size_t> all(data.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return loss_and_gradient(model, data, all, l2);
}

struct TrainResult {
  ClassifierModel model;
  double final_loss = 0.0;
  std::vector<double> epoch_losses;  // full-data loss after each epoch
};

/// Zero-initialized weights, seeded minibatch shuffling, one adaptive-moment
/// step per minibatch.
inline TrainResult train(const Dataset& data, const TrainConfig& config, std::string featurizer_id = {}) {
  config.validate();
  if (data.size() == 0) throw ValidationError("cannot train on an empty dataset");
  const bool has0 = std::find(data.labels.begin(), data.labels.end(), 0) != data.labels.end();
  const bool has1 = std::find(data.labels.begin(), data.labels.end(), 1) != data.labels.end();
  if (!has0 || !has1) throw ValidationError("training data must contain both classes");

  TrainResult result;
  ClassifierModel& model = result.model;
  model = ClassifierModel(data.dim, std::move(featurizer_id));

  const std::size_t nw = model.weights.size();
  std::vector<double> m_w(nw, 0.0), v_w(nw, 0.0);
  std::array<double, kNumClasses> m_b{0.0, 0.0}, v_b{0.0, 0.0};
  double beta1_t = 1.0, beta2_t = 1.0;

  std::mt19937_64 rng(config.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  auto step = [&](double& theta, double grad, double& m, double& v) {
    m = config.beta1 * m + (1.0 - config.beta1) * grad;
    v = config.beta2 * v + (1.0 - config.beta2) * grad * grad;
    const double m_hat = m / (1.0 - beta1_t);
    const double v_hat = v / (1.0 - beta2_t);
    theta -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle_in_place(order, rng);
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const auto g = loss_and_gradient(model, data, std::span<const std::size_t>(order.data() + start, end - start),
                                       config.l2);
      beta1_t *= config.beta1;
      beta2_t *= config.beta2;
      for (std::size_t i = 0; i < nw; ++i) step(model.weights[i], g.d_weights[i], m_w[i], v_w[i]);
      for (std::size_t c = 0; c < kNumClasses; ++c) step(model.bias[c], g.d_bias[c], m_b[c], v_b[c]);
    }
    result.epoch_losses.push_back(loss_and_gradient(model, data, config.l2).loss);
  }
  result.final_loss = result.epoch_losses.empty() ? loss_and_gradient(model, data, config.l2).loss
                                                  : result.epoch_losses.back();
  return result;
}

// ---------------------------------------------------------------------------
// Model file

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const ClassifierModel& m) {
  nlohmann::json j;
  j["format"] = "slim-softmax-linear";
  j["version"] = kModelFormatVersion;
  j["featurizer_id"] = m.featurizer_id;
  j["dim"] = m.dim;
  j["classes"] = {0, 1};
  j["weights"] = nlohmann::json::array();
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    j["weights"].push_back(std::vector<double>(m.weights.begin() + c * m.dim, m.weights.begin() + (c + 1) * m.dim));
  }
  j["bias"] = std::vector<double>(m.bias.begin(), m.bias.end());
  return j;
}

inline ClassifierModel model_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "slim-softmax-linear") throw ParseError("not a slim model file");
    if (j.at("version").get<int>() != kModelFormatVersion) throw ParseError("unsupported model version");
    ClassifierModel m(j.at("dim").get<std::size_t>(), j.at("featurizer_id").get<std::string>());
    const auto& w = j.at("weights");
    if (w.size() != kNumClasses) throw ParseError("model must have two weight rows");
    for (std::size_t c = 0; c < kNumClasses; ++c) {
      const auto row = w[c].get<std::vector<double>>();
      if (row.size() != m.dim) throw ParseError("weight row has wrong dimension");
      std::copy(row.begin(), row.end(), m.weights.begin() + c * m.dim);
    }
    const auto b = j.at("bias").get<std::vector<double>>();
    if (b.size() != kNumClasses) throw ParseError("bias must have two entries");
    m.bias = {b[0], b[1]};
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad model file: ") + e.what());
  }
}

}  // namespace slim

#endif  // SLIM_CLASSIFY_HPP
