#ifndef SLIM_EXPERIMENT_HPP
#define SLIM_EXPERIMENT_HPP

// Experiment plans (key=value files), the repeated-trial protocol and the
// report writers built on top of it.

#include <array>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "slim/classify.hpp"
#include "slim/corpus.hpp"
#include "slim/density.hpp"
#include "slim/eval.hpp"
#include "slim/pipeline.hpp"

namespace slim {

/// Fixed offset between a trial's split seed and its minibatch-shuffle seed.
inline constexpr std::uint64_t kTrainSeedOffset = 7919;

struct ExperimentPlan {
  std::string corpus_path;
  CorpusFormat format = CorpusFormat::jsonl;
  std::string mapping_path;
  std::string embeddings_path;
  std::string doc_embeddings_path;
  std::string annotations_path;
  std::string gazetteer_path;
  std::string tokenizer_vocab_path;

  FeaturizerMode featurizer = FeaturizerMode::hashed_bow;
  std::size_t hash_dim = 4096;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  TrainConfig train;
  double lambda = 0.5;
  bool remove_stopwords = true;
  std::array<double, 3> ratios{0.5, 0.25, 0.25};
  bool stratify = true;
  EntropyReading entropy_reading = EntropyReading::surprisal_occurrences;

  std::vector<double> k_grid;                    // empty: default grid
  std::vector<std::string> view_texts;           // as written, expanded by views()
  std::string baseline = "full";
  std::vector<std::pair<std::string, double>> external_baselines;  // name -> accuracy

  /// View specs with bare proportion kinds expanded over the k grid.
  std::vector<ViewSpec> views() const {
    const auto ks = k_grid.empty() ? default_k_grid(0.35) : k_grid;
    std::vector<ViewSpec> out;
    auto push = [&](const ViewSpec& s) {
      if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
    };
    push(baseline_spec());
    for (const auto& text : view_texts) {
      const auto t = std::string(trim(text));
      const bool has_k = t.find('@') != std::string::npos;
      const auto plus = t.find('+');
      const auto head = t.substr(0, plus);
      if (!has_k && takes_proportion(parse_view_kind(head))) {
        std::optional<ViewKind> second;
        if (plus != std::string::npos) second = parse_view_kind(trim(std::string_view(t).substr(plus + 1)));
        for (const auto& s : expand_grid(parse_view_kind(head), ks, second)) push(s);
      } else {
        push(parse_view_spec(t));
      }
    }
    return out;
  }

  ViewSpec baseline_spec() const { return parse_view_spec(baseline); }

  void validate() const {
    if (corpus_path.empty()) throw ValidationError("experiment plan has no corpus");
    if (trials == 0) throw ValidationError("trial count must be positive");
    train.validate();
    for (double k : k_grid)
      if (!(k > 0.0 && k <= 1.0)) throw ValidationError("k grid values must be in (0, 1]");
    SplitSpec{ratios, seed, stratify}.validate();
    (void)views();
  }
};

namespace detail {

inline std::vector<double> parse_number_list(std::string_view s, const std::string& where) {
  std::vector<double> out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    char* end = nullptr;
    const double v = std::strtod(cur.c_str(), &end);
    if (*end != '\0') throw ParseError(where + ": bad number '" + cur + "'");
    out.push_back(v);
    cur.clear();
  };
  for (char c : s) {
    if (c == ',' || is_space_byte(c)) flush();
    else cur.push_back(c);
  }
  flush();
  return out;
}

inline bool parse_bool(std::string_view s, const std::string& where) {
  if (s == "true" || s == "on" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "off" || s == "no" || s == "0") return false;
  throw ParseError(where + ": expected a boolean, got '" + std::string(s) + "'");
}

}  // namespace detail

/// Parses a key=value plan. Relative paths resolve against `base_dir`.
inline ExperimentPlan parse_experiment_plan(const std::string& text, const std::string& base_dir = {},
                                            const std::string& source = "<plan>") {
  ExperimentPlan p;
  auto resolve = [&](std::string_view v) {
    std::filesystem::path path{std::string(v)};
    if (path.is_relative() && !base_dir.empty()) path = std::filesystem::path(base_dir) / path;
    return path.lexically_normal().string();
  };
  std::size_t lineno = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto where = source + ":" + std::to_string(lineno);
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(where + ": expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    try {
      if (key == "corpus") p.corpus_path = resolve(value);
      else if (key == "format") p.format = parse_corpus_format(value);
      else if (key == "mapping") p.mapping_path = resolve(value);
      else if (key == "embeddings") p.embeddings_path = resolve(value);
      else if (key == "doc_embeddings") p.doc_embeddings_path = resolve(value);
      else if (key == "annotations") p.annotations_path = resolve(value);
      else if (key == "gazetteer") p.gazetteer_path = resolve(value);
      else if (key == "tokenizer_vocab") p.tokenizer_vocab_path = resolve(value);
      else if (key == "featurizer") p.featurizer = parse_featurizer_mode(value);
      else if (key == "hash_dim") p.hash_dim = std::stoul(value);
      else if (key == "trials") p.trials = std::stoul(value);
      else if (key == "seed") p.seed = std::stoull(value);
      else if (key == "learning_rate") p.train.learning_rate = std::stod(value);
      else if (key == "epsilon") p.train.epsilon = std::stod(value);
      else if (key == "beta1") p.train.beta1 = std::stod(value);
      else if (key == "beta2") p.train.beta2 = std::stod(value);
      else if (key == "epochs") p.train.epochs = std::stoul(value);
      else if (key == "batch_size") p.train.batch_size = std::stoul(value);
      else if (key == "l2") p.train.l2 = std::stod(value);
      else if (key == "lambda") p.lambda = std::stod(value);
      else if (key == "stopwords") p.remove_stopwords = detail::parse_bool(value, where);
      else if (key == "stratify") p.stratify = detail::parse_bool(value, where);
      else if (key == "entropy") p.entropy_reading = parse_entropy_reading(value);
      else if (key == "ratios") {
        const auto r = detail::parse_number_list(value, where);
        if (r.size() != 3) throw ParseError(where + ": ratios needs three numbers");
        p.ratios = {r[0], r[1], r[2]};
      } else if (key == "k") {
        for (double k : detail::parse_number_list(value, where)) p.k_grid.push_back(k);
      } else if (key == "view") p.view_texts.push_back(value);
      else if (key == "baseline") p.baseline = value;
      else if (key == "external") {
        const auto colon = value.rfind(':');
        if (colon == std::string::npos) throw ParseError(where + ": expected 'name: accuracy'");
        p.external_baselines.emplace_back(std::string(trim(std::string_view(value).substr(0, colon))),
                                          std::stod(value.substr(colon + 1)));
      } else {
        throw ParseError(where + ": unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw ParseError(where + ": bad value for '" + key + "'");
    } catch (const std::out_of_range&) {
      throw ParseError(where + ": value out of range for '" + key + "'");
    } catch (const ValidationError& e) {
      throw ParseError(where + ": " + e.what());
    }
  }
  return p;
}

inline ExperimentPlan load_experiment_plan(const std::string& path) {
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_experiment_plan(read_file(path), dir, path);
}

/// Loaded inputs shared by every experiment in a plan.
struct Workspace {
  Corpus corpus;
  std::optional<EmbeddingTable> embeddings;
  std::optional<DocVectors> doc_vectors;
  ViewResources resources;

  Workspace() = default;
  Workspace(const Workspace&) = delete;
  Workspace& operator=(const Workspace&) = delete;
};

/// Loads corpus, embeddings, annotations and gazetteer named by the plan.
/// Returned by pointer because ViewResources points into it.
inline std::unique_ptr<Workspace> load_workspace(const ExperimentPlan& plan) {
  auto ws = std::make_unique<Workspace>();
  const FieldMapping mapping = plan.mapping_path.empty() ? FieldMapping{} : FieldMapping::load(plan.mapping_path);
  ws->corpus = load_corpus(plan.corpus_path, plan.format, mapping);
  if (!plan.embeddings_path.empty()) ws->embeddings = EmbeddingTable::load(plan.embeddings_path);
  if (!plan.doc_embeddings_path.empty()) ws->doc_vectors = DocVectors::load(plan.doc_embeddings_path);
  ws->resources.embeddings = ws->embeddings ? &*ws->embeddings : nullptr;
  ws->resources.doc_vectors = ws->doc_vectors ? &*ws->doc_vectors : nullptr;
  ws->resources.lambda = plan.lambda;
  ws->resources.remove_stopwords = plan.remove_stopwords;
  if (!plan.annotations_path.empty()) {
    auto ann = AnnotationSet::load(plan.annotations_path);
    for (const auto& a : ws->corpus.articles)
      if (!ann.contains(a.id)) throw ValidationError("annotation file has no entry for article '" + a.id + "'");
    ws->resources.tagger = TaggerBackend::external(std::move(ann));
  } else if (!plan.gazetteer_path.empty()) {
    auto g = Gazetteer::builtin();
    for (const auto& line : read_lines(plan.gazetteer_path)) {
      const auto t = trim(line);
      if (!t.empty() && t.front() != '#') g.add(t);
    }
    ws->resources.tagger = TaggerBackend::builtin(std::move(g));
  }
  return ws;
}

// ---------------------------------------------------------------------------
// Trials

struct TrialResult {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  MetricSet metrics;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  double train_loss = 0.0;
};

struct EvalSummary {
  std::string experiment;
  ViewSpec spec;
  std::vector<TrialResult> trials;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_macro_f1 = 0.0;
  std::optional<double> mean_auc;
  bool single_trial = false;
  std::size_t empty_views = 0;  // articles whose view produced no features
  double mean_view_words = 0.0;
  std::optional<WelchResult> vs_baseline;
  std::optional<double> accuracy_ratio;

  std::vector<double> accuracies() const {
    std::vector<double> a;
    for (const auto& t : trials) a.push_back(t.metrics.accuracy);
    return a;
  }
};

/// Features for every article of the corpus under one view spec. Articles
/// whose view cannot be built (no in-vocabulary words, say) get an empty view.
struct FeatureTable {
  std::vector<FeatureVector> rows;
  std::size_t empty_views = 0;
  double mean_view_words = 0.0;
};

inline FeatureTable featurize_corpus(const Corpus& corpus, const ViewSpec& spec, const ViewResources& res,
                                     const Featurizer& featurizer) {
  FeatureTable t;
  t.rows.reserve(corpus.size());
  double words = 0.0;
  for (const auto& a : corpus.articles) {
    LimitedView view;
    try {
      view = build_view(a, spec, res);
    } catch (const UndefinedSimilarity&) {
      view = LimitedView{};
    } catch (const ValidationError& e) {
      if (spec.kind != ViewKind::keyword) throw;
      view = LimitedView{};
    }
    words += static_cast<double>(view.words.size());
    auto fv = featurizer(view);
    if (fv.empty) ++t.empty_views;
    t.rows.push_back(std::move(fv));
  }
  t.mean_view_words = corpus.size() ? words / static_cast<double>(corpus.size()) : 0.0;
  return t;
}

struct TrialSettings {
  std::size_t trials = 5;
  std::uint64_t base_seed = 0;
  TrainConfig train;
  std::array<double, 3> ratios{0.5, 0.25, 0.25};
  bool stratify = true;
};

inline TrialResult run_one_trial(const Corpus& corpus, const FeatureTable& features, const Featurizer& featurizer,
                                 const TrialSettings& settings, std::size_t index) {
  TrialResult r;
  r.index = index;
  r.seed = settings.base_seed + index;

  const auto parts = has_assigned_split(corpus) ? split_by_assignment(corpus)
                                                : split(corpus, SplitSpec{settings.ratios, r.seed, settings.stratify});
  std::map<std::string, std::size_t> row_of;
  for (std::size_t i = 0; i < corpus.size(); ++i) row_of[corpus.articles[i].id] = i;

  Dataset train_set(featurizer.dim());
  for (const auto& a : parts.train.articles) train_set.add(features.rows[row_of.at(a.id)].values, a.label);
  TrainConfig cfg = settings.train;
  cfg.seed = r.seed + kTrainSeedOffset;
  const auto trained = train(train_set, cfg, featurizer.id());
  r.train_loss = trained.final_loss;

  std::vector<int> preds, labels;
  std::vector<double> scores;
  for (const auto& a : parts.test.articles) {
    const auto p = predict(trained.model, featurizer, features.rows[row_of.at(a.id)]);
    preds.push_back(p.label);
    scores.push_back(p.prob_real);
    labels.push_back(a.label);
  }
  if (labels.empty()) throw ValidationError("test split is empty");
  r.metrics = compute_metrics(preds, scores, labels);
  r.n_train = train_set.size();
  r.n_test = labels.size();
  return r;
}

/// Runs `settings.trials` independent trials; trial i uses seed base + i.
/// Trials run concurrently; results are folded in trial order.
inline EvalSummary run_trials(const std::string& name, const Corpus& corpus, const ViewSpec& spec,
                              const ViewResources& res, const Featurizer& featurizer,
                              const TrialSettings& settings) {
  if (settings.trials == 0) throw ValidationError("trial count must be positive");
  EvalSummary s;
  s.experiment = name;
  s.spec = spec;
  const auto features = featurize_corpus(corpus, spec, res, featurizer);
  s.empty_views = features.empty_views;
  s.mean_view_words = features.mean_view_words;

  std::vector<std::future<TrialResult>> jobs;
  for (std::size_t i = 0; i < settings.trials; ++i) {
    jobs.push_back(std::async(std::launch::async, [&, i] {
      return run_one_trial(corpus, features, featurizer, settings, i);
    }));
  }
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    try {
      s.trials.push_back(jobs[i].get());
    } catch (const Error& e) {
      for (std::size_t j = i + 1; j < jobs.size(); ++j) jobs[j].wait();
      throw Error(name + ": trial " + std::to_string(i) + " failed: " + e.what());
    }
  }

  const auto acc = s.accuracies();
  s.mean_accuracy = mean_of(acc);
  s.single_trial = acc.size() == 1;
  s.std_accuracy = s.single_trial ? 0.0 : sample_stddev(acc);
  std::vector<double> f1, auc;
  for (const auto& t : s.trials) {
    f1.push_back(t.metrics.macro_f1);
    if (t.metrics.auc) auc.push_back(*t.metrics.auc);
  }
  s.mean_macro_f1 = mean_of(f1);
  if (auc.size() == s.trials.size()) s.mean_auc = mean_of(auc);
  return s;
}

/// Fills significance and accuracy ratio of each summary against `baseline`.
inline void compare_to_baseline(std::vector<EvalSummary>& summaries, const EvalSummary& baseline) {
  const auto base_acc = baseline.accuracies();
  for (auto& s : summaries) {
    s.accuracy_ratio = baseline.mean_accuracy > 0.0 ? std::optional(accuracy_ratio(s.mean_accuracy, baseline.mean_accuracy))
                                                    : std::nullopt;
    if (s.trials.size() >= 2 && base_acc.size() >= 2) s.vs_baseline = welch_test(s.accuracies(), base_acc);
    else s.vs_baseline.reset();
  }
}

// ---------------------------------------------------------------------------
// Serialization and report writers

inline nlohmann::json summary_to_json(const EvalSummary& s) {
  nlohmann::json j;
  j["experiment"] = s.experiment;
  j["view"] = s.spec.label();
  j["mean_accuracy"] = s.mean_accuracy;
  j["std_accuracy"] = s.std_accuracy;
  j["mean_macro_f1"] = s.mean_macro_f1;
  j["mean_auc"] = s.mean_auc ? nlohmann::json(*s.mean_auc) : nlohmann::json(nullptr);
  j["single_trial"] = s.single_trial;
  j["empty_views"] = s.empty_views;
  j["mean_view_words"] = s.mean_view_words;
  auto& trials = j["trials"] = nlohmann::json::array();
  for (const auto& t : s.trials) {
    trials.push_back({{"index", t.index},
                      {"seed", t.seed},
                      {"accuracy", t.metrics.accuracy},
                      {"macro_f1", t.metrics.macro_f1},
                      {"auc", t.metrics.auc ? nlohmann::json(*t.metrics.auc) : nlohmann::json(nullptr)},
                      {"n_train", t.n_train},
                      {"n_test", t.n_test},
                      {"train_loss", t.train_loss}});
  }
  return j;
}

inline EvalSummary summary_from_json(const nlohmann::json& j) {
  EvalSummary s;
  try {
    s.experiment = j.at("experiment").get<std::string>();
    s.spec = parse_view_spec(j.at("view").get<std::string>());
    s.mean_view_words = j.value("mean_view_words", 0.0);
    s.empty_views = j.value("empty_views", std::size_t{0});
    for (const auto& t : j.at("trials")) {
      TrialResult r;
      r.index = t.at("index").get<std::size_t>();
      r.seed = t.at("seed").get<std::uint64_t>();
      r.metrics.accuracy = t.at("accuracy").get<double>();
      r.metrics.macro_f1 = t.at("macro_f1").get<double>();
      if (!t.at("auc").is_null()) r.metrics.auc = t["auc"].get<double>();
      r.n_train = t.value("n_train", std::size_t{0});
      r.n_test = t.value("n_test", std::size_t{0});
      r.train_loss = t.value("train_loss", 0.0);
      s.trials.push_back(r);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("bad summary file: ") + e.what());
  }
  if (s.trials.empty()) throw ParseError("summary has no trials");
  const auto acc = s.accuracies();
  s.mean_accuracy = mean_of(acc);
  s.single_trial = acc.size() == 1;
  s.std_accuracy = s.single_trial ? 0.0 : sample_stddev(acc);
  std::vector<double> f1, auc;
  for (const auto& t : s.trials) {
    f1.push_back(t.metrics.macro_f1);
    if (t.metrics.auc) auc.push_back(*t.metrics.auc);
  }
  s.mean_macro_f1 = mean_of(f1);
  if (auc.size() == s.trials.size()) s.mean_auc = mean_of(auc);
  return s;
}

/// Raw per-trial CSV.
inline std::string trials_csv(const std::vector<EvalSummary>& summaries) {
  std::string out = "experiment,view,trial,seed,accuracy,macro_f1,auc,n_train,n_test\n";
  for (const auto& s : summaries) {
    for (const auto& t : s.trials) {
      out += s.experiment + "," + s.spec.label() + "," + std::to_string(t.index) + "," + std::to_string(t.seed) + "," +
             strformat("%.6f,%.6f,", t.metrics.accuracy, t.metrics.macro_f1) +
             (t.metrics.auc ? strformat("%.6f", *t.metrics.auc) : std::string("NA")) + "," +
             std::to_string(t.n_train) + "," + std::to_string(t.n_test) + "\n";
    }
  }
  return out;
}

/// Markdown results table with significance stars and ratios.
inline std::string results_markdown(const std::vector<EvalSummary>& summaries, const std::string& baseline_name,
                                    const std::vector<std::pair<std::string, double>>& external = {}) {
  std::string out;
  out += "| Input | Accuracy (%) | Macro-F1 | AUC | Accuracy ratio | p-value | Avg. words |\n";
  out += "|---|---|---|---|---|---|---|\n";
  for (const auto& s : summaries) {
    const auto sig = s.vs_baseline ? s.vs_baseline->marker : Significance::none;
    out += "| " + s.experiment + " | " + format_mean_std(s.mean_accuracy, s.std_accuracy, sig) + " | " +
           strformat("%.4f", s.mean_macro_f1) + " | " +
           (s.mean_auc ? strformat("%.4f", *s.mean_auc) : std::string("n/a")) + " | " +
           (s.accuracy_ratio ? strformat("%.4f", *s.accuracy_ratio) : std::string("n/a")) + " | " +
           (s.vs_baseline && s.experiment != baseline_name ? strformat("%.4g", s.vs_baseline->p_value)
                                                           : std::string("-")) +
           " | " + strformat("%.1f", s.mean_view_words) + " |\n";
  }
  if (!external.empty()) {
    out += "\nExternally reported systems (accuracy, not re-run):\n\n| System | Accuracy (%) |\n|---|---|\n";
    for (const auto& [name, acc] : external) out += "| " + name + " | " + strformat("%.2f", acc * 100.0) + " |\n";
  }
  const auto n = summaries.empty() ? 0 : summaries.front().trials.size();
  out += "\nMean \xC2\xB1 sample standard deviation over " + std::to_string(n) +
         " trials. Significance: two-tailed Welch t-test on per-trial accuracies against `" + baseline_name +
         "`; ** p < 0.01, * 0.01 <= p < 0.05. Accuracy ratio = accuracy / baseline accuracy.\n";
  return out;
}

/// Ratio-vs-k curve data grouped by series (keyword, pos, keyword+ner, ...).
inline std::string curves_tsv(const std::vector<EvalSummary>& summaries) {
  std::map<std::string, std::vector<const EvalSummary*>> series;
  for (const auto& s : summaries) {
    if (!s.spec.k) continue;
    std::string key(to_string(s.spec.kind));
    if (s.spec.second) key += "+" + std::string(to_string(*s.spec.second));
    series[key].push_back(&s);
  }
  std::string out;
  for (auto& [key, items] : series) {
    std::stable_sort(items.begin(), items.end(), [](auto* a, auto* b) { return *a->spec.k < *b->spec.k; });
    out += "# series " + key + "\n# k_percent\tmean_accuracy\tstd_accuracy\taccuracy_ratio\n";
    for (const auto* s : items) {
      out += strformat("%.0f\t%.6f\t%.6f\t", *s->spec.k * 100.0, s->mean_accuracy, s->std_accuracy) +
             (s->accuracy_ratio ? strformat("%.6f", *s->accuracy_ratio) : std::string("NA")) + "\n";
    }
    out += "\n\n";
  }
  return out;
}

inline std::string density_markdown(const DensityReport& r) {
  std::string out = "| Input | Mean normalized entropy | Mean tokens | Articles |\n|---|---|---|---|\n";
  for (const auto& row : r.rows) {
    out += "| " + row.spec.label() + " | " + strformat("%.2f", row.mean_entropy) + " | " +
           strformat("%.2f", row.mean_tokens) + " | " + std::to_string(row.n_articles) + " |\n";
  }
  out += "\nTokenizer: `" + r.tokenizer + "`.\n";
  for (const auto& w : r.warnings) out += "\n- warning: " + w;
  if (!r.warnings.empty()) out += "\n";
  return out;
}

}  // namespace slim

#endif  // SLIM_EXPERIMENT_HPP
