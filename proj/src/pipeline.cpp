#include "veritas/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "veritas/error.hpp"

namespace veritas {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::ConfigInvalid, msg); }

void check_keys(const json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) invalid(std::string(where) + " must be an object");
  for (const auto& [key, _] : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      invalid("unknown key '" + key + "' in " + std::string(where));
    }
  }
}

template <typename T>
void read(const json& j, std::string_view key, T& out, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    invalid(std::string(where) + "." + std::string(key) + " has the wrong type");
  }
}

template <typename T>
void read_opt(const json& j, std::string_view key, std::optional<T>& out, std::string_view where) {
  auto it = j.find(key);
  if (it == j.end()) return;
  if (it->is_null()) {
    out.reset();
    return;
  }
  T v{};
  read(j, key, v, where);
  out = v;
}

fs::path resolve(const fs::path& base, const std::string& p) {
  fs::path path(p);
  if (path.empty() || path.is_absolute() || base.empty()) return path;
  return base / path;
}

Label label_from_name(const std::string& name) {
  if (name == "deceptive") return Label::deceptive;
  if (name == "truthful") return Label::truthful;
  invalid("label map target must be 'deceptive' or 'truthful', got '" + name + "'");
}

Polarity polarity_from_name(const std::string& name) {
  if (name == "positive") return Polarity::positive;
  if (name == "negative") return Polarity::negative;
  if (name == "unknown") return Polarity::unknown;
  invalid("polarity map target must be positive, negative or unknown, got '" + name + "'");
}

void read_tree(const json& j, TreeOptions& t, std::string_view where) {
  if (auto it = j.find("criterion"); it != j.end()) {
    try {
      t.criterion = split_criterion_from_string(it->get<std::string>());
    } catch (const std::exception&) {
      invalid(std::string(where) + ".criterion must be gini or entropy");
    }
  }
  read_opt(j, "max_depth", t.max_depth, where);
  read(j, "min_samples_split", t.min_samples_split, where);
}

json tree_json(const TreeOptions& t) {
  return {{"criterion", to_string(t.criterion)},
          {"max_depth", t.max_depth ? json(*t.max_depth) : json(nullptr)},
          {"min_samples_split", t.min_samples_split}};
}

json forest_json(const ForestOptions& f) {
  json j = tree_json(f.tree);
  j["n_trees"] = f.n_trees;
  j["m_features"] = f.m_features ? json(*f.m_features) : json(nullptr);
  j["bootstrap"] = f.bootstrap;
  return j;
}

void read_classifier(const json& entry, TrainingOptions& t, std::vector<ClassifierKind>& kinds) {
  json item = entry;
  if (entry.is_string()) item = json{{"kind", entry}};
  if (!item.is_object() || !item.contains("kind") || !item["kind"].is_string()) {
    invalid("classifier entries must be a kind name or an object with a 'kind'");
  }
  ClassifierKind kind;
  try {
    kind = classifier_kind_from_string(item["kind"].get<std::string>());
  } catch (const Error&) {
    invalid("unknown classifier '" + item["kind"].get<std::string>() + "'");
  }
  if (std::find(kinds.begin(), kinds.end(), kind) != kinds.end()) {
    invalid("classifier '" + std::string(to_string(kind)) + "' selected twice");
  }
  kinds.push_back(kind);
  const std::string where = "classifiers." + std::string(to_string(kind));
  switch (kind) {
    case ClassifierKind::svm:
      check_keys(item, where, {"kind", "C", "tol", "max_passes"});
      read(item, "C", t.svm.C, where);
      read(item, "tol", t.svm.tol, where);
      read(item, "max_passes", t.svm.max_passes, where);
      break;
    case ClassifierKind::gnb:
      check_keys(item, where, {"kind", "var_smoothing"});
      read(item, "var_smoothing", t.gnb.var_smoothing, where);
      break;
    case ClassifierKind::knn:
      check_keys(item, where, {"kind", "k"});
      read(item, "k", t.knn.k, where);
      break;
    case ClassifierKind::dtree:
      check_keys(item, where, {"kind", "criterion", "max_depth", "min_samples_split"});
      read_tree(item, t.dtree, where);
      break;
    case ClassifierKind::rforest:
    case ClassifierKind::bagging: {
      auto& f = kind == ClassifierKind::rforest ? t.rforest : t.bagging;
      check_keys(item, where,
                 {"kind", "n_trees", "m_features", "bootstrap", "criterion", "max_depth", "min_samples_split"});
      read(item, "n_trees", f.n_trees, where);
      read_opt(item, "m_features", f.m_features, where);
      read(item, "bootstrap", f.bootstrap, where);
      read_tree(item, f.tree, where);
      break;
    }
    case ClassifierKind::adaboost:
      check_keys(item, where, {"kind", "n_rounds"});
      read(item, "n_rounds", t.adaboost.n_rounds, where);
      break;
    case ClassifierKind::logreg:
      check_keys(item, where, {"kind", "learning_rate", "n_iters", "l2"});
      read(item, "learning_rate", t.logreg.learning_rate, where);
      read(item, "n_iters", t.logreg.n_iters, where);
      read(item, "l2", t.logreg.l2, where);
      break;
  }
}

json classifier_json(ClassifierKind kind, const TrainingOptions& t) {
  json j;
  switch (kind) {
    case ClassifierKind::svm:
      j = {{"C", t.svm.C}, {"tol", t.svm.tol}, {"max_passes", t.svm.max_passes}};
      break;
    case ClassifierKind::gnb:
      j = {{"var_smoothing", t.gnb.var_smoothing}};
      break;
    case ClassifierKind::knn:
      j = {{"k", t.knn.k}};
      break;
    case ClassifierKind::dtree:
      j = tree_json(t.dtree);
      break;
    case ClassifierKind::rforest:
      j = forest_json(t.rforest);
      break;
    case ClassifierKind::bagging:
      j = forest_json(t.bagging);
      break;
    case ClassifierKind::adaboost:
      j = {{"n_rounds", t.adaboost.n_rounds}};
      break;
    case ClassifierKind::logreg:
      j = {{"learning_rate", t.logreg.learning_rate}, {"n_iters", t.logreg.n_iters}, {"l2", t.logreg.l2}};
      break;
  }
  j["kind"] = to_string(kind);
  return j;
}

class StageClock {
 public:
  explicit StageClock(std::vector<StageTiming>& out) : out_(out) {}

  template <typename F>
  auto run(const std::string& stage, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      StageClock& self;
      const std::string& stage;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        const std::chrono::duration<double, std::milli> d = std::chrono::steady_clock::now() - start;
        self.out_.push_back({stage, d.count()});
      }
    } record{*this, stage, start};
    try {
      return f();
    } catch (const Error& e) {
      rethrow_with_context(e, "stage '" + stage + "'");
    }
  }

 private:
  std::vector<StageTiming>& out_;
};

LabeledMatrix gather(const EmbeddingMatrix& rows, const ReviewSet& corpus, std::span<const std::string> ids) {
  const EmbeddingMatrix picked = align(rows, ids);
  LabeledMatrix m;
  m.X = Matrix::from_embedding(picked);
  m.ids.assign(ids.begin(), ids.end());
  m.y.reserve(ids.size());
  for (const auto& id : ids) m.y.push_back(corpus.find(id)->label);
  return m;
}

std::vector<std::string> corpus_ids(const ReviewSet& corpus) {
  std::vector<std::string> ids;
  ids.reserve(corpus.size());
  for (const auto& r : corpus.reviews()) ids.push_back(r.id);
  return ids;
}

std::vector<std::string> corpus_texts(const ReviewSet& corpus, std::span<const std::string> ids) {
  std::vector<std::string> texts;
  texts.reserve(ids.size());
  for (const auto& id : ids) texts.push_back(corpus.find(id)->text);
  return texts;
}

}  // namespace

// -- config ------------------------------------------------------------------

ExperimentConfig ExperimentConfig::from_json(const json& j, const fs::path& base_dir) {
  ExperimentConfig c;
  check_keys(j, "config", {"corpus", "features", "split", "classifiers", "output"});

  if (auto it = j.find("corpus"); it != j.end()) {
    const json& cj = *it;
    check_keys(cj, "corpus", {"kind", "path", "csv"});
    std::string kind = "ott";
    read(cj, "kind", kind, "corpus");
    if (kind == "ott") {
      c.corpus.kind = CorpusKind::ott;
    } else if (kind == "csv") {
      c.corpus.kind = CorpusKind::csv;
    } else {
      invalid("corpus.kind must be ott or csv");
    }
    std::string path;
    read(cj, "path", path, "corpus");
    c.corpus.path = resolve(base_dir, path);
    if (auto csv = cj.find("csv"); csv != cj.end()) {
      check_keys(*csv, "corpus.csv", {"text_col", "label_col", "delimiter", "label_map", "polarity_col", "polarity_map"});
      read(*csv, "text_col", c.corpus.csv.text_col, "corpus.csv");
      read(*csv, "label_col", c.corpus.csv.label_col, "corpus.csv");
      std::string delim = ",";
      read(*csv, "delimiter", delim, "corpus.csv");
      if (delim.size() != 1) invalid("corpus.csv.delimiter must be a single character");
      c.corpus.csv.delimiter = delim[0];
      std::map<std::string, std::string> labels;
      read(*csv, "label_map", labels, "corpus.csv");
      for (const auto& [cell, name] : labels) c.corpus.csv.label_map[cell] = label_from_name(name);
      read_opt(*csv, "polarity_col", c.corpus.csv.polarity_col, "corpus.csv");
      if (csv->contains("polarity_map")) {
        std::map<std::string, std::string> pols;
        read(*csv, "polarity_map", pols, "corpus.csv");
        c.corpus.csv.polarity_map.clear();
        for (const auto& [cell, name] : pols) c.corpus.csv.polarity_map[cell] = polarity_from_name(name);
      }
    }
  }
  if (c.corpus.csv.label_map.empty()) {
    c.corpus.csv.label_map = {{"deceptive", Label::deceptive}, {"truthful", Label::truthful}};
  }

  if (auto it = j.find("features"); it != j.end()) {
    const json& fj = *it;
    check_keys(fj, "features", {"kind", "path", "lexical", "pooling"});
    std::string kind = "lexical";
    read(fj, "kind", kind, "features");
    if (kind == "lexical") {
      c.features.kind = FeatureKind::lexical;
    } else if (kind == "embedding_file") {
      c.features.kind = FeatureKind::embedding_file;
    } else {
      invalid("features.kind must be lexical or embedding_file");
    }
    if (fj.contains("path") && !fj["path"].is_null()) {
      std::string path;
      read(fj, "path", path, "features");
      c.features.path = resolve(base_dir, path);
    }
    if (auto lx = fj.find("lexical"); lx != fj.end()) {
      check_keys(*lx, "features.lexical", {"min_df", "max_features", "lowercase"});
      read(*lx, "min_df", c.features.lexical.min_df, "features.lexical");
      read_opt(*lx, "max_features", c.features.lexical.max_features, "features.lexical");
      read(*lx, "lowercase", c.features.lexical.lowercase, "features.lexical");
    }
    if (auto pj = fj.find("pooling"); pj != fj.end()) {
      check_keys(*pj, "features.pooling", {"kind", "max_tokens"});
      std::string pk = std::string(to_string(c.features.pooling.kind));
      read(*pj, "kind", pk, "features.pooling");
      try {
        c.features.pooling.kind = pooling_kind_from_string(pk);
      } catch (const Error&) {
        invalid("features.pooling.kind must be mean, sum or concat_truncate");
      }
      read(*pj, "max_tokens", c.features.pooling.max_tokens, "features.pooling");
    }
  }

  if (auto it = j.find("split"); it != j.end()) {
    check_keys(*it, "split", {"ratio", "seed", "stratify"});
    read(*it, "ratio", c.split.ratio, "split");
    read(*it, "seed", c.split.seed, "split");
    read(*it, "stratify", c.split.stratify, "split");
  }
  c.training.seed = c.split.seed;

  if (auto it = j.find("classifiers"); it != j.end()) {
    if (!it->is_array()) invalid("classifiers must be a list");
    c.classifiers.clear();
    for (const auto& entry : *it) read_classifier(entry, c.training, c.classifiers);
  }

  if (auto it = j.find("output"); it != j.end()) {
    check_keys(*it, "output", {"model", "results"});
    std::optional<std::string> model, results;
    read_opt(*it, "model", model, "output");
    read_opt(*it, "results", results, "output");
    if (model) c.output.model = resolve(base_dir, *model);
    if (results) c.output.results = resolve(base_dir, *results);
  }

  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) invalid("cannot read config file '" + file.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    invalid("config file '" + file.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j, file.parent_path());
}

json ExperimentConfig::to_json() const {
  json labels = json::object();
  for (const auto& [cell, l] : corpus.csv.label_map) labels[cell] = to_string(l);
  json pols = json::object();
  for (const auto& [cell, p] : corpus.csv.polarity_map) pols[cell] = to_string(p);
  json classifiers_json = json::array();
  for (auto k : classifiers) classifiers_json.push_back(classifier_json(k, training));
  const auto& lx = features.lexical;
  return {
      {"corpus",
       {{"kind", corpus.kind == CorpusKind::ott ? "ott" : "csv"},
        {"path", corpus.path.generic_string()},
        {"csv",
         {{"text_col", corpus.csv.text_col},
          {"label_col", corpus.csv.label_col},
          {"delimiter", std::string(1, corpus.csv.delimiter)},
          {"label_map", labels},
          {"polarity_col", corpus.csv.polarity_col ? json(*corpus.csv.polarity_col) : json(nullptr)},
          {"polarity_map", pols}}}}},
      {"features",
       {{"kind", to_string(features.kind)},
        {"path", features.path.empty() ? json(nullptr) : json(features.path.generic_string())},
        {"lexical",
         {{"min_df", lx.min_df},
          {"max_features", lx.max_features ? json(*lx.max_features) : json(nullptr)},
          {"lowercase", lx.lowercase}}},
        {"pooling", {{"kind", to_string(features.pooling.kind)}, {"max_tokens", features.pooling.max_tokens}}}}},
      {"split", {{"ratio", split.ratio}, {"seed", split.seed}, {"stratify", split.stratify}}},
      {"classifiers", classifiers_json},
      {"output",
       {{"model", output.model ? json(output.model->generic_string()) : json(nullptr)},
        {"results", output.results ? json(output.results->generic_string()) : json(nullptr)}}}};
}

void ExperimentConfig::validate() const {
  if (!(split.ratio > 0.0 && split.ratio < 1.0)) invalid("split.ratio must lie strictly between 0 and 1");
  if (classifiers.empty()) invalid("at least one classifier must be selected");
  if (corpus.path.empty()) invalid("corpus.path is required");
  if (features.kind == FeatureKind::embedding_file && features.path.empty()) {
    invalid("features.path is required for embedding_file features");
  }
  if (features.lexical.min_df < 1) invalid("features.lexical.min_df must be at least 1");
  if (features.lexical.max_features && *features.lexical.max_features == 0) {
    invalid("features.lexical.max_features must be positive");
  }
  if (features.pooling.max_tokens == 0) invalid("features.pooling.max_tokens must be positive");
  const auto& t = training;
  if (!(t.svm.C > 0.0) || !(t.svm.tol > 0.0) || t.svm.max_passes == 0) invalid("svm needs C > 0, tol > 0, max_passes > 0");
  if (!(t.gnb.var_smoothing >= 0.0)) invalid("gnb.var_smoothing must be non-negative");
  if (t.knn.k == 0) invalid("knn.k must be positive");
  for (const auto* f : {&t.rforest, &t.bagging}) {
    if (f->n_trees == 0) invalid("forests need at least one tree");
    if (f->m_features && *f->m_features == 0) invalid("m_features must be positive");
  }
  for (const auto* tree : {&t.dtree, &t.rforest.tree, &t.bagging.tree}) {
    if (tree->min_samples_split < 2) invalid("min_samples_split must be at least 2");
  }
  if (t.adaboost.n_rounds == 0) invalid("adaboost.n_rounds must be positive");
  if (!(t.logreg.learning_rate > 0.0) || t.logreg.n_iters == 0 || !(t.logreg.l2 >= 0.0)) {
    invalid("logreg needs learning_rate > 0, n_iters > 0, l2 >= 0");
  }
}

void ExperimentConfig::validate_paths() const {
  validate();
  std::error_code ec;
  if (!fs::exists(corpus.path, ec)) invalid("corpus path '" + corpus.path.string() + "' does not exist");
  if (features.kind == FeatureKind::embedding_file && !fs::exists(features.path, ec)) {
    invalid("embedding file '" + features.path.string() + "' does not exist");
  }
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("VERITAS_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  std::uint64_t seed = 0;
  const std::string_view s(raw);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
  if (ec != std::errc() || ptr != s.data() + s.size()) invalid("VERITAS_SEED must be an unsigned integer");
  return seed;
}

// -- result ------------------------------------------------------------------

json ExperimentResult::to_json(bool include_timings) const {
  json reps = json::array();
  for (const auto& r : reports) reps.push_back(report_to_json(r));
  json j = {{"format", "veritas-results"},
            {"format_version", 1},
            {"config", config},
            {"split", {{"fingerprint", split_fingerprint}, {"train_size", train_size}, {"test_size", test_size}}},
            {"reports", reps},
            {"ranking", ranking},
            {"best_kind", best_kind}};
  if (include_timings) {
    json t = json::array();
    for (const auto& s : timings) t.push_back({{"stage", s.stage}, {"ms", s.ms}});
    j["timings_ms"] = t;
  }
  return j;
}

ExperimentResult ExperimentResult::from_json(const json& j) {
  try {
    if (j.at("format").get<std::string>() != "veritas-results") {
      throw Error(Errc::InvalidArgument, "not a results document");
    }
    ExperimentResult r;
    r.config = j.at("config");
    r.split_fingerprint = j.at("split").at("fingerprint").get<std::string>();
    r.train_size = j.at("split").at("train_size").get<std::size_t>();
    r.test_size = j.at("split").at("test_size").get<std::size_t>();
    for (const auto& rep : j.at("reports")) r.reports.push_back(report_from_json(rep));
    r.ranking = j.at("ranking").get<std::vector<std::string>>();
    r.best_kind = j.at("best_kind").get<std::string>();
    if (auto it = j.find("timings_ms"); it != j.end()) {
      for (const auto& t : *it) r.timings.push_back({t.at("stage").get<std::string>(), t.at("ms").get<double>()});
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("malformed results document: ") + e.what());
  }
}

ExperimentResult ExperimentResult::load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::Io, "cannot open '" + file.string() + "'");
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(Errc::InvalidArgument, "'" + file.string() + "' is not valid JSON: " + e.what());
  }
}

const MetricsReport* ExperimentResult::find(std::string_view kind) const {
  for (const auto& r : reports) {
    if (r.classifier_kind == kind) return &r;
  }
  return nullptr;
}

std::vector<std::string> rank_reports(std::span<const MetricsReport> reports) {
  std::vector<const MetricsReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const MetricsReport* a, const MetricsReport* b) {
    if (a->accuracy != b->accuracy) return a->accuracy > b->accuracy;
    if (a->macro_avg.f1 != b->macro_avg.f1) return a->macro_avg.f1 > b->macro_avg.f1;
    return a->classifier_kind < b->classifier_kind;
  });
  std::vector<std::string> names;
  for (const auto* r : order) names.push_back(r->classifier_kind);
  return names;
}

// -- run -----------------------------------------------------------------------

ReviewSet load_corpus(const CorpusConfig& config) {
  if (config.kind == CorpusKind::ott) return load_ott_corpus(config.path);
  return load_csv_corpus(config.path, config.csv);
}

ExperimentRun run_experiment_full(const ExperimentConfig& config) {
  config.validate_paths();
  ExperimentRun run;
  StageClock clock(run.result.timings);

  run.corpus = clock.run("load", [&] { return load_corpus(config.corpus); });

  run.split = clock.run("split", [&] {
    return config.split.stratify ? stratified_split(run.corpus, config.split.ratio, config.split.seed)
                                 : shuffled_split(run.corpus, config.split.ratio, config.split.seed);
  });

  clock.run("features", [&] {
    EmbeddingMatrix rows;
    if (config.features.kind == FeatureKind::lexical) {
      // fitted on the training texts only
      const auto train_texts = corpus_texts(run.corpus, run.split.train_ids);
      LexicalVectorizer vectorizer = fit_lexical_vectorizer(train_texts, config.features.lexical);
      const auto ids = corpus_ids(run.corpus);
      rows = vectorize_lexical(vectorizer, corpus_texts(run.corpus, ids), ids);
      run.features.kind = FeatureKind::lexical;
      run.features.fingerprint = vectorizer.fingerprint();
      run.features.dim = vectorizer.size();
      run.features.vectorizer = std::move(vectorizer);
    } else {
      rows = read_embedding_file(config.features.path);
      run.features.kind = FeatureKind::embedding_file;
      run.features.fingerprint = rows.provider_fingerprint();
      run.features.dim = rows.dim();
    }
    run.features.pooling = config.features.pooling;
    run.train = gather(rows, run.corpus, run.split.train_ids);
    run.test = gather(rows, run.corpus, run.split.test_ids);
  });

  std::vector<std::vector<Label>> predictions;
  for (auto kind : config.classifiers) {
    const std::string name(to_string(kind));
    run.models.push_back(clock.run("fit:" + name, [&] { return fit(kind, run.train, config.training); }));
    clock.run("evaluate:" + name, [&] {
      predictions.push_back(predict(run.models.back(), run.test.X));
      run.result.reports.push_back(compute_metrics(confusion_matrix(run.test.y, predictions.back()), name));
    });
  }

  run.result.ranking = rank_reports(run.result.reports);
  run.result.best_kind = run.result.ranking.front();
  run.result.split_fingerprint = run.split.fingerprint();
  run.result.train_size = run.split.train_ids.size();
  run.result.test_size = run.split.test_ids.size();
  run.result.config = config.to_json();

  const auto best = static_cast<std::size_t>(
      std::find(config.classifiers.begin(), config.classifiers.end(),
                classifier_kind_from_string(run.result.best_kind)) -
      config.classifiers.begin());
  ModelBundle& bundle = run.best_bundle;
  bundle.model = run.models[best];
  bundle.features = run.features;
  bundle.test_ids = run.split.test_ids;
  bundle.test_predictions = predictions[best];
  bundle.metadata = {{"created_by", "veritas"},
                     {"classifier", run.result.best_kind},
                     {"corpus", run.corpus.name()},
                     {"split",
                      {{"ratio", run.split.ratio},
                       {"seed", run.split.seed},
                       {"stratified", run.split.stratified},
                       {"fingerprint", run.result.split_fingerprint}}},
                     {"config", run.result.config}};

  clock.run("persist", [&] {
    if (config.output.model) save_bundle(bundle, *config.output.model);
    if (config.output.results) {
      std::ofstream out(*config.output.results, std::ios::trunc);
      if (!out) throw Error(Errc::Io, "cannot open '" + config.output.results->string() + "' for writing");
      out << run.result.to_json(true).dump(2) << "\n";
    }
  });
  return run;
}

ExperimentResult run_experiment(const ExperimentConfig& config) { return run_experiment_full(config).result; }

EmbeddingMatrix bundle_features(const ModelBundle& bundle, const ReviewSet& corpus,
                                const std::optional<EmbeddingMatrix>& embeddings) {
  const auto ids = corpus_ids(corpus);
  if (bundle.features.kind == FeatureKind::lexical) {
    if (!bundle.features.vectorizer) throw Error(Errc::CorruptBundle, "lexical bundle without a vectorizer");
    return vectorize_lexical(*bundle.features.vectorizer, corpus_texts(corpus, ids), ids);
  }
  if (!embeddings) {
    throw Error(Errc::FingerprintMismatch, "bundle was trained on embedding-file features; an embedding file is required");
  }
  check_compatible(bundle, *embeddings);
  return align(*embeddings, ids);
}

MetricsReport evaluate_bundle(const ModelBundle& bundle, const ReviewSet& corpus,
                              const std::optional<EmbeddingMatrix>& embeddings, bool only_test_ids) {
  const EmbeddingMatrix rows = bundle_features(bundle, corpus, embeddings);
  std::vector<std::string> ids;
  if (only_test_ids) {
    for (const auto& id : bundle.test_ids) {
      if (corpus.find(id) == nullptr) throw Error(Errc::UnknownReviewId, "test id '" + id + "' is not in the corpus");
    }
    ids = bundle.test_ids;
  } else {
    ids = corpus_ids(corpus);
  }
  const LabeledMatrix data = gather(rows, corpus, ids);
  const auto predicted = predict(bundle.model, data.X);
  return compute_metrics(confusion_matrix(data.y, predicted), std::string(to_string(bundle.model.kind)));
}

}  // namespace veritas
