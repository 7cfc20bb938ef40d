#ifndef SLIM_CLI_HPP
#define SLIM_CLI_HPP

// `slim` command line: ingest, extract, density, train, evaluate, compare,
// report. Every command writes into --out and leaves exactly one
// manifest.json there; on failure the files it wrote are removed.

#include <algorithm>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "slim/experiment.hpp"

namespace slim::cli {

inline constexpr const char* kToolVersion = "0.1.0";

namespace fs = std::filesystem;

/// Tracks files written by one command so a failure can remove them.
class OutputDir {
 public:
  explicit OutputDir(fs::path dir) : dir_(std::move(dir)) {
    created_ = !fs::exists(dir_);
    fs::create_directories(dir_);
  }

  fs::path write(const std::string& name, const std::string& content) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!out) throw Error("write failed: " + path.string());
    written_.push_back(path);
    return path;
  }

  void rollback() noexcept {
    std::error_code ec;
    for (const auto& p : written_) fs::remove(p, ec);
    written_.clear();
    if (created_ && fs::is_empty(dir_, ec)) fs::remove(dir_, ec);
  }

  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (const auto& p : written_) n.push_back(p.filename().string());
    return n;
  }

  const fs::path& path() const { return dir_; }

 private:
  fs::path dir_;
  bool created_ = false;
  std::vector<fs::path> written_;
};

struct Options {
  std::string corpus;
  std::string format = "jsonl";
  std::string mapping;
  std::vector<std::string> kinds;
  std::vector<double> ks;
  double lambda = 0.5;
  std::string tokenizer_vocab;
  std::string embeddings;
  std::string doc_embeddings;
  std::string annotations;
  std::string gazetteer;
  std::string featurizer = "hashed-bow";
  std::size_t hash_dim = 4096;
  std::size_t trials = 5;
  std::uint64_t seed = 0;
  std::string out;
  std::string spec;
  std::string model;
  std::vector<std::string> summaries;
  std::string baseline;
  std::vector<double> ratios{0.5, 0.25, 0.25};
  bool no_stratify = false;
  bool no_stopwords = false;
  std::string entropy = "occurrences";
  TrainConfig train;
};

namespace detail {

inline std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline void write_manifest(OutputDir& out, const std::vector<std::string>& args,
                           const std::vector<std::string>& inputs) {
  nlohmann::json m;
  std::string joined;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) joined += ' ';
    joined += args[i];
  }
  std::string canon;
  for (std::size_t i = 1; i < args.size(); ++i) canon += args[i] + '\x1f';
  m["command_line"] = joined;
  m["config_hash"] = hex64(fnv1a64(canon));
  auto& digests = m["inputs"] = nlohmann::json::array();
  std::vector<std::string> sorted = inputs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& p : sorted) {
    if (p.empty()) continue;
    digests.push_back({{"path", p}, {"fnv1a64", hex64(fnv1a64(read_file(p)))}});
  }
  m["outputs"] = out.names();
  m["tool_version"] = kToolVersion;
  m["timestamp"] = utc_timestamp();
  out.write("manifest.json", m.dump(2) + "\n");
}

inline std::string file_label(const ViewSpec& s) {
  std::string l(to_string(s.kind));
  if (s.k) l += "_k" + format_k(*s.k);
  if (s.second) l += "_" + std::string(to_string(*s.second));
  return l;
}

inline void require_file(const std::string& path, const char* flag) {
  if (!path.empty() && !fs::is_regular_file(path))
    throw ValidationError(std::string(flag) + ": file not found: " + path);
}

inline ExperimentPlan plan_from_options(const Options& o) {
  ExperimentPlan p;
  if (!o.spec.empty()) p = load_experiment_plan(o.spec);
  if (!o.corpus.empty()) {
    p.corpus_path = o.corpus;
    p.format = parse_corpus_format(o.format);
  }
  auto override_str = [](std::string& dst, const std::string& src) {
    if (!src.empty()) dst = src;
  };
  override_str(p.mapping_path, o.mapping);
  override_str(p.embeddings_path, o.embeddings);
  override_str(p.doc_embeddings_path, o.doc_embeddings);
  override_str(p.annotations_path, o.annotations);
  override_str(p.gazetteer_path, o.gazetteer);
  override_str(p.tokenizer_vocab_path, o.tokenizer_vocab);
  if (o.spec.empty()) {
    p.featurizer = parse_featurizer_mode(o.featurizer);
    p.hash_dim = o.hash_dim;
    p.trials = o.trials;
    p.seed = o.seed;
    p.train = o.train;
    p.lambda = o.lambda;
    p.remove_stopwords = !o.no_stopwords;
    p.stratify = !o.no_stratify;
    p.ratios = {o.ratios[0], o.ratios[1], o.ratios[2]};
    p.entropy_reading = parse_entropy_reading(o.entropy);
    p.k_grid = o.ks;
    p.view_texts = o.kinds;
    if (!o.baseline.empty()) p.baseline = o.baseline;
  }
  return p;
}

inline std::vector<std::string> plan_inputs(const ExperimentPlan& p, const Options& o) {
  return {p.corpus_path, p.mapping_path, p.embeddings_path, p.doc_embeddings_path, p.annotations_path,
          p.gazetteer_path, p.tokenizer_vocab_path, o.spec};
}

inline void check_plan_files(const ExperimentPlan& p) {
  require_file(p.corpus_path, "--corpus");
  require_file(p.mapping_path, "--mapping");
  require_file(p.embeddings_path, "--embeddings");
  require_file(p.doc_embeddings_path, "--doc-embeddings");
  require_file(p.annotations_path, "--annotations");
  require_file(p.gazetteer_path, "--gazetteer");
  require_file(p.tokenizer_vocab_path, "--tokenizer-vocab");
}

/// Median over articles of the supply ratio (candidates or adjective/adverb
/// tokens per article word); the largest grid k worth extracting.
inline double feasible_max_k(const Corpus& corpus, ViewKind kind, const ViewResources& res) {
  std::vector<double> ratios;
  for (const auto& a : corpus.articles) {
    const PreparedArticle pa(a);
    if (pa.words.empty()) continue;
    std::size_t supply = 0;
    if (kind == ViewKind::keyword) {
      try {
        const auto doc = doc_embedding(a.id, pa.words, *res.embeddings, res.doc_vectors);
        supply = keyword_candidates(pa.words, *res.embeddings, doc, res.remove_stopwords).size();
      } catch (const Error&) {
        supply = 0;
      }
    } else {
      for (const auto& t : res.tagger.pos_tag(a.id, pa.words)) supply += is_adjective_or_adverb(t.tag);
    }
    ratios.push_back(static_cast<double>(supply) / static_cast<double>(pa.words.size()));
  }
  if (ratios.empty()) return 0.10;
  std::sort(ratios.begin(), ratios.end());
  return ratios[ratios.size() / 2];
}

inline std::vector<ViewSpec> extract_specs(const ExperimentPlan& plan, const Workspace& ws) {
  std::vector<ViewSpec> specs;
  for (const auto& text : plan.view_texts) {
    auto t = std::string(trim(text));
    const auto plus = t.find('+');
    const auto head = t.substr(0, plus);
    if (t.find('@') == std::string::npos && takes_proportion(parse_view_kind(head))) {
      const auto kind = parse_view_kind(head);
      std::optional<ViewKind> second;
      if (plus != std::string::npos) second = parse_view_kind(trim(std::string_view(t).substr(plus + 1)));
      const auto ks = plan.k_grid.empty() ? default_k_grid(feasible_max_k(ws.corpus, kind, ws.resources)) : plan.k_grid;
      for (const auto& s : expand_grid(kind, ks, second)) specs.push_back(s);
    } else {
      specs.push_back(parse_view_spec(t));
    }
  }
  return specs;
}

inline std::vector<ViewSpec> density_specs(const ExperimentPlan& plan, const Workspace& ws) {
  const auto ks = plan.k_grid.empty() ? std::vector<double>{0.10, 0.15, 0.20, 0.25, 0.30} : plan.k_grid;
  std::vector<ViewSpec> specs{ViewSpec{ViewKind::full}};
  for (double k : ks) specs.push_back(ViewSpec{ViewKind::pos, k});
  if (ws.embeddings)
    for (double k : ks) specs.push_back(ViewSpec{ViewKind::keyword, k});
  specs.push_back(ViewSpec{ViewKind::ner});
  specs.push_back(ViewSpec{ViewKind::title});
  specs.push_back(ViewSpec{ViewKind::author});
  return specs;
}

inline SubwordTokenizer tokenizer_for(const ExperimentPlan& plan) {
  return plan.tokenizer_vocab_path.empty() ? SubwordTokenizer::whitespace()
                                           : SubwordTokenizer::load(plan.tokenizer_vocab_path);
}

inline Featurizer featurizer_for(const ExperimentPlan& plan, const Workspace& ws) {
  return Featurizer(plan.featurizer, ws.embeddings ? &*ws.embeddings : nullptr, plan.hash_dim);
}

inline TrialSettings trial_settings(const ExperimentPlan& plan) {
  return TrialSettings{plan.trials, plan.seed, plan.train, plan.ratios, plan.stratify};
}

inline std::vector<EvalSummary> run_plan(const ExperimentPlan& plan, const Workspace& ws, std::ostream& log) {
  const auto featurizer = featurizer_for(plan, ws);
  const auto settings = trial_settings(plan);
  const auto base = plan.baseline_spec();
  std::vector<EvalSummary> summaries;
  for (const auto& spec : plan.views()) {
    if (auto f = required_field(spec); f && !ws.corpus.has_field(*f)) {
      log << "skipping " << spec.label() << ": corpus has no " << to_string(*f) << " field\n";
      continue;
    }
    summaries.push_back(run_trials(spec.label(), ws.corpus, spec, ws.resources, featurizer, settings));
  }
  const auto it = std::find_if(summaries.begin(), summaries.end(), [&](const EvalSummary& s) { return s.spec == base; });
  if (it == summaries.end()) throw ValidationError("baseline view '" + base.label() + "' was not evaluated");
  const EvalSummary baseline = *it;
  compare_to_baseline(summaries, baseline);
  return summaries;
}

// ---------------------------------------------------------------------------
// Commands

inline void cmd_ingest(const Options& o, OutputDir& out, std::vector<std::string>& inputs) {
  require_file(o.corpus, "--corpus");
  require_file(o.mapping, "--mapping");
  if (o.ratios.size() != 3) throw ValidationError("--ratios needs three values");
  SplitSpec spec{{o.ratios[0], o.ratios[1], o.ratios[2]}, o.seed, !o.no_stratify};
  spec.validate();
  inputs = {o.corpus, o.mapping};
  const auto mapping = o.mapping.empty() ? FieldMapping{} : FieldMapping::load(o.mapping);
  const auto corpus = load_corpus(o.corpus, parse_corpus_format(o.format), mapping);
  const bool assigned = has_assigned_split(corpus);
  const auto parts = assigned ? split_by_assignment(corpus) : split(corpus, spec);
  out.write(corpus.name + ".train.jsonl", corpus_to_jsonl(parts.train));
  out.write(corpus.name + ".val.jsonl", corpus_to_jsonl(parts.validation));
  out.write(corpus.name + ".test.jsonl", corpus_to_jsonl(parts.test));
  nlohmann::json sm;
  sm["source"] = o.corpus;
  sm["mode"] = assigned ? "assigned" : "seeded";
  sm["seed"] = o.seed;
  sm["ratios"] = o.ratios;
  sm["stratify"] = spec.stratify;
  sm["sizes"] = {{"train", parts.train.size()}, {"val", parts.validation.size()}, {"test", parts.test.size()}};
  std::vector<std::string> fields;
  for (auto f : corpus.metadata_fields) fields.emplace_back(to_string(f));
  sm["metadata_fields"] = fields;
  out.write("split_manifest.json", sm.dump(2) + "\n");
}

inline void cmd_extract(const Options& o, OutputDir& out, std::vector<std::string>& inputs, std::ostream& log) {
  if (o.kinds.empty()) throw ValidationError("--kind is required");
  auto plan = plan_from_options(o);
  check_plan_files(plan);
  inputs = plan_inputs(plan, o);
  const auto ws = load_workspace(plan);
  const auto specs = extract_specs(plan, *ws);
  for (const auto& spec : specs) {
    if ((spec.kind == ViewKind::keyword) && !ws->embeddings)
      throw ValidationError("keyword views need --embeddings");
  }
  for (const auto& spec : specs) {
    if (auto f = required_field(spec); f && !ws->corpus.has_field(*f)) {
      log << "skipping " << spec.label() << ": corpus has no " << to_string(*f) << " field\n";
      continue;
    }
    std::string body;
    for (const auto& a : ws->corpus.articles) {
      LimitedView v;
      try {
        v = build_view(a, spec, ws->resources);
      } catch (const UndefinedSimilarity&) {
        v = LimitedView{a.id, spec.output_kind(), {}, spec.k, {}, std::string("no-embedding")};
      } catch (const ValidationError&) {
        if (spec.kind != ViewKind::keyword) throw;
        v = LimitedView{a.id, spec.output_kind(), {}, spec.k, {}, std::string("no-embedding")};
      }
      body += view_to_json(v).dump() + "\n";
    }
    out.write("views_" + file_label(spec) + ".jsonl", body);
  }
}

inline void cmd_density(const Options& o, OutputDir& out, std::vector<std::string>& inputs) {
  auto plan = plan_from_options(o);
  check_plan_files(plan);
  inputs = plan_inputs(plan, o);
  const auto ws = load_workspace(plan);
  std::vector<ViewSpec> specs;
  if (o.kinds.empty()) {
    specs = density_specs(plan, *ws);
  } else {
    specs = extract_specs(plan, *ws);
  }
  const auto report = density_report(ws->corpus, specs, ws->resources, tokenizer_for(plan), plan.entropy_reading);
  out.write("density.csv", density_csv(report));
  out.write("density.tsv", density_tsv(report));
}

inline void cmd_train(const Options& o, OutputDir& out, std::vector<std::string>& inputs) {
  if (o.kinds.size() != 1) throw ValidationError("train needs exactly one --kind");
  auto plan = plan_from_options(o);
  check_plan_files(plan);
  inputs = plan_inputs(plan, o);
  auto spec_text = o.kinds[0];
  if (spec_text.find('@') == std::string::npos && takes_proportion(parse_view_kind(spec_text.substr(0, spec_text.find('+'))))) {
    if (o.ks.size() != 1) throw ValidationError("train needs exactly one --k for " + spec_text);
    const auto plus = spec_text.find('+');
    spec_text = spec_text.substr(0, plus) + "@" + format_k(o.ks[0]) + (plus == std::string::npos ? "" : spec_text.substr(plus));
  }
  const auto spec = parse_view_spec(spec_text);
  const auto ws = load_workspace(plan);
  const auto featurizer = featurizer_for(plan, *ws);
  const auto features = featurize_corpus(ws->corpus, spec, ws->resources, featurizer);
  Dataset data(featurizer.dim());
  for (std::size_t i = 0; i < ws->corpus.size(); ++i) data.add(features.rows[i].values, ws->corpus.articles[i].label);
  TrainConfig cfg = plan.train;
  cfg.seed = plan.seed + kTrainSeedOffset;
  const auto result = train(data, cfg, featurizer.id());
  out.write("model.json", model_to_json(result.model).dump() + "\n");
  nlohmann::json info;
  info["view"] = spec.label();
  info["featurizer_id"] = featurizer.id();
  info["n_train"] = data.size();
  info["final_loss"] = result.final_loss;
  info["epoch_losses"] = result.epoch_losses;
  out.write("train_summary.json", info.dump(2) + "\n");
}

inline void cmd_evaluate(const Options& o, OutputDir& out, std::vector<std::string>& inputs, std::ostream& log) {
  if (o.corpus.empty()) throw ValidationError("--corpus is required");
  auto plan = plan_from_options(o);
  check_plan_files(plan);
  inputs = plan_inputs(plan, o);

  if (!o.model.empty()) {
    require_file(o.model, "--model");
    inputs.push_back(o.model);
    if (o.kinds.size() != 1) throw ValidationError("evaluating a model needs exactly one --kind");
    const auto model = model_from_json(nlohmann::json::parse(read_file(o.model)));
    auto spec_text = o.kinds[0];
    if (spec_text.find('@') == std::string::npos && takes_proportion(parse_view_kind(spec_text.substr(0, spec_text.find('+'))))) {
      if (o.ks.size() != 1) throw ValidationError("needs exactly one --k for " + spec_text);
      const auto plus = spec_text.find('+');
      spec_text = spec_text.substr(0, plus) + "@" + format_k(o.ks[0]) + (plus == std::string::npos ? "" : spec_text.substr(plus));
    }
    const auto spec = parse_view_spec(spec_text);
    const auto ws = load_workspace(plan);
    const auto featurizer = featurizer_for(plan, *ws);
    const auto features = featurize_corpus(ws->corpus, spec, ws->resources, featurizer);
    std::vector<int> preds, labels;
    std::vector<double> scores;
    for (std::size_t i = 0; i < ws->corpus.size(); ++i) {
      const auto p = predict(model, featurizer, features.rows[i]);
      preds.push_back(p.label);
      scores.push_back(p.prob_real);
      labels.push_back(ws->corpus.articles[i].label);
    }
    const auto m = compute_metrics(preds, scores, labels);
    nlohmann::json j{{"view", spec.label()},
                     {"accuracy", m.accuracy},
                     {"macro_f1", m.macro_f1},
                     {"auc", m.auc ? nlohmann::json(*m.auc) : nlohmann::json(nullptr)},
                     {"n", labels.size()}};
    out.write("metrics.json", j.dump(2) + "\n");
    return;
  }

  if (plan.view_texts.empty() && o.spec.empty()) throw ValidationError("evaluate needs --kind or --spec");
  plan.validate();
  const auto ws = load_workspace(plan);
  const auto summaries = run_plan(plan, *ws, log);
  nlohmann::json all = nlohmann::json::array();
  for (const auto& s : summaries) all.push_back(summary_to_json(s));
  out.write("summary.json", all.dump(2) + "\n");
  out.write("trials.csv", trials_csv(summaries));
  out.write("results.md", results_markdown(summaries, plan.baseline_spec().label(), plan.external_baselines));
}

inline void cmd_compare(const Options& o, OutputDir& out, std::vector<std::string>& inputs) {
  if (o.summaries.empty()) throw ValidationError("compare needs at least one --summary");
  std::vector<EvalSummary> summaries;
  for (const auto& path : o.summaries) {
    require_file(path, "--summary");
    inputs.push_back(path);
    auto j = nlohmann::json::parse(read_file(path));
    if (j.is_array()) {
      for (const auto& e : j) summaries.push_back(summary_from_json(e));
    } else {
      summaries.push_back(summary_from_json(j));
    }
  }
  const std::string base_name = o.baseline.empty() ? "full" : parse_view_spec(o.baseline).label();
  const auto it = std::find_if(summaries.begin(), summaries.end(),
                               [&](const EvalSummary& s) { return s.experiment == base_name; });
  if (it == summaries.end()) throw ValidationError("baseline '" + base_name + "' not found among summaries");
  const EvalSummary baseline = *it;
  compare_to_baseline(summaries, baseline);
  out.write("comparison.md", results_markdown(summaries, base_name));
  std::string csv = "experiment,mean_accuracy,std_accuracy,accuracy_ratio,p_value,marker\n";
  for (const auto& s : summaries) {
    csv += s.experiment + "," + strformat("%.6f,%.6f,", s.mean_accuracy, s.std_accuracy) +
           (s.accuracy_ratio ? strformat("%.6f", *s.accuracy_ratio) : std::string("NA")) + "," +
           (s.vs_baseline ? strformat("%.6g", s.vs_baseline->p_value) : std::string("NA")) + "," +
           (s.vs_baseline ? marker(s.vs_baseline->marker) : std::string()) + "\n";
  }
  out.write("comparison.csv", csv);
}

inline void cmd_report(const Options& o, OutputDir& out, std::vector<std::string>& inputs, std::ostream& log) {
  if (o.spec.empty()) throw ValidationError("report needs --spec");
  require_file(o.spec, "--spec");
  auto plan = plan_from_options(o);
  check_plan_files(plan);
  plan.validate();
  inputs = plan_inputs(plan, o);
  const auto ws = load_workspace(plan);

  const auto density = density_report(ws->corpus, density_specs(plan, *ws), ws->resources, tokenizer_for(plan),
                                      plan.entropy_reading);
  const auto summaries = run_plan(plan, *ws, log);

  out.write("density.csv", density_csv(density));
  out.write("density.tsv", density_tsv(density));
  nlohmann::json all = nlohmann::json::array();
  for (const auto& s : summaries) all.push_back(summary_to_json(s));
  out.write("summary.json", all.dump(2) + "\n");
  out.write("trials.csv", trials_csv(summaries));
  out.write("curves.tsv", curves_tsv(summaries));

  std::string md = "# Limited-information evaluation: " + ws->corpus.name + "\n\n";
  md += "Articles: " + std::to_string(ws->corpus.size()) + ". Featurizer: `" + featurizer_for(plan, *ws).id() +
        "`. Trials: " + std::to_string(plan.trials) + ", base seed " + std::to_string(plan.seed) + ".\n\n";
  md += "## Detection results\n\n" + results_markdown(summaries, plan.baseline_spec().label(), plan.external_baselines);
  md += "\n## Information density\n\n" + density_markdown(density);
  md += "\nCurve data for accuracy ratio against k: `curves.tsv`.\n";
  out.write("report.md", md);
}

}  // namespace detail

/// Runs the CLI. Returns the process exit status.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Limited-information fake-news pipeline", "slim"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* c) {
    c->add_option("--corpus", o.corpus, "Corpus file (JSONL or CSV)");
    c->add_option("--format", o.format, "Corpus format")->check(CLI::IsMember({"jsonl", "csv"}));
    c->add_option("--mapping", o.mapping, "Field-mapping file (column=field lines)");
    c->add_option("--out", o.out, "Output directory")->required();
    c->add_option("--seed", o.seed, "Base random seed");
  };
  auto view_flags = [&](CLI::App* c) {
    c->add_option("--kind", o.kinds, "View kind or spec (repeatable), e.g. keyword, ner, keyword+title");
    c->add_option("--k", o.ks, "Proportion k (repeatable)")->check(CLI::Range(0.0, 1.0));
    c->add_option("--lambda", o.lambda, "MMR diversity")->check(CLI::Range(0.0, 1.0));
    c->add_option("--embeddings", o.embeddings, "Word-vector file");
    c->add_option("--doc-embeddings", o.doc_embeddings, "Document-vector JSONL");
    c->add_option("--annotations", o.annotations, "Gold POS/NER annotation JSONL");
    c->add_option("--gazetteer", o.gazetteer, "Extra gazetteer entries, one per line");
    c->add_flag("--no-stopwords", o.no_stopwords, "Keep stop-words as keyword candidates");
  };
  auto train_flags = [&](CLI::App* c) {
    c->add_option("--featurizer", o.featurizer, "Featurizer")
        ->check(CLI::IsMember({"mean-embedding", "hashed-bow", "concat-both"}));
    c->add_option("--hash-dim", o.hash_dim, "Hashed bag-of-words dimension");
    c->add_option("--learning-rate", o.train.learning_rate, "Learning rate");
    c->add_option("--epochs", o.train.epochs, "Training epochs");
    c->add_option("--batch-size", o.train.batch_size, "Minibatch size");
    c->add_option("--l2", o.train.l2, "L2 penalty");
  };

  auto* ingest = app.add_subcommand("ingest", "Load, normalize and split a corpus");
  common(ingest);
  ingest->add_option("--ratios", o.ratios, "train val test ratios")->expected(3);
  ingest->add_flag("--no-stratify", o.no_stratify, "Split without label stratification");

  auto* extract = app.add_subcommand("extract", "Write limited views as JSONL");
  common(extract);
  view_flags(extract);

  auto* density = app.add_subcommand("density", "Information-density report");
  common(density);
  view_flags(density);
  density->add_option("--tokenizer-vocab", o.tokenizer_vocab, "Subword vocabulary, one token per line");
  density->add_option("--entropy", o.entropy, "Entropy reading")
      ->check(CLI::IsMember({"occurrences", "distinct", "view-local"}));

  auto* trainc = app.add_subcommand("train", "Train a classifier on one view");
  common(trainc);
  view_flags(trainc);
  train_flags(trainc);

  auto* evaluate = app.add_subcommand("evaluate", "Repeated-trial evaluation");
  common(evaluate);
  view_flags(evaluate);
  train_flags(evaluate);
  evaluate->add_option("--trials", o.trials, "Trials per experiment");
  evaluate->add_option("--spec", o.spec, "Experiment plan file");
  evaluate->add_option("--model", o.model, "Evaluate this trained model instead of running trials");
  evaluate->add_option("--baseline", o.baseline, "Baseline view");
  evaluate->add_option("--ratios", o.ratios, "train val test ratios")->expected(3);

  auto* compare = app.add_subcommand("compare", "Compare evaluation summaries");
  compare->add_option("--summary", o.summaries, "summary.json from evaluate (repeatable)");
  compare->add_option("--baseline", o.baseline, "Baseline view");
  compare->add_option("--out", o.out, "Output directory")->required();

  auto* report = app.add_subcommand("report", "Full Markdown report from an experiment plan");
  report->add_option("--spec", o.spec, "Experiment plan file");
  report->add_option("--corpus", o.corpus, "Override the plan's corpus");
  report->add_option("--format", o.format, "Corpus format")->check(CLI::IsMember({"jsonl", "csv"}));
  report->add_option("--out", o.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  std::vector<std::string> args(argv, argv + argc);
  std::unique_ptr<OutputDir> dir;
  try {
    dir = std::make_unique<OutputDir>(o.out);
    std::vector<std::string> inputs;
    if (ingest->parsed()) detail::cmd_ingest(o, *dir, inputs);
    else if (extract->parsed()) detail::cmd_extract(o, *dir, inputs, err);
    else if (density->parsed()) detail::cmd_density(o, *dir, inputs);
    else if (trainc->parsed()) detail::cmd_train(o, *dir, inputs);
    else if (evaluate->parsed()) detail::cmd_evaluate(o, *dir, inputs, err);
    else if (compare->parsed()) detail::cmd_compare(o, *dir, inputs);
    else if (report->parsed()) detail::cmd_report(o, *dir, inputs, err);
    detail::write_manifest(*dir, args, inputs);
  } catch (const std::exception& e) {
    if (dir) dir->rollback();
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace slim::cli

#endif  // SLIM_CLI_HPP
