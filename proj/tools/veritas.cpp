// veritas: train, evaluate and apply fake-review classifiers.

#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "veritas/bundle.hpp"
#include "veritas/error.hpp"
#include "veritas/pipeline.hpp"

namespace {

using namespace veritas;

int exit_code(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::usage:
      return 1;
    case ErrorCategory::data:
      return 2;
    case ErrorCategory::internal:
      return 3;
  }
  return 3;
}

ReportFormat parse_format(const std::string& s) { return s == "json" ? ReportFormat::json : ReportFormat::text; }

CorpusConfig corpus_from_flags(const std::string& path, const std::string& kind) {
  CorpusConfig c;
  c.path = path;
  const bool csv = kind == "csv" || (kind.empty() && std::filesystem::path(path).extension() == ".csv");
  c.kind = csv ? CorpusKind::csv : CorpusKind::ott;
  c.csv.label_map = {{"deceptive", Label::deceptive}, {"truthful", Label::truthful}};
  return c;
}

struct TrainFlags {
  std::string config;
  std::string corpus;
  std::string corpus_kind;
  std::string features;
  std::string classifiers;
  std::optional<double> ratio;
  std::optional<std::uint64_t> seed;
  bool no_stratify = false;
  std::string out;
  std::string results;
  std::string report = "text";
};

int run_train(const TrainFlags& f) {
  ExperimentConfig config;
  if (!f.config.empty()) {
    config = ExperimentConfig::load(f.config);
  } else if (f.corpus.empty()) {
    throw Error(Errc::ConfigInvalid, "train needs --config or --corpus");
  }
  if (!f.corpus.empty()) {
    const auto csv = config.corpus.csv;
    config.corpus = corpus_from_flags(f.corpus, f.corpus_kind);
    if (!f.config.empty()) config.corpus.csv = csv;
  } else if (!f.corpus_kind.empty()) {
    config.corpus.kind = f.corpus_kind == "csv" ? CorpusKind::csv : CorpusKind::ott;
  }
  if (!f.features.empty()) {
    if (f.features == "lexical") {
      config.features.kind = FeatureKind::lexical;
      config.features.path.clear();
    } else {
      config.features.kind = FeatureKind::embedding_file;
      config.features.path = f.features;
    }
  }
  if (!f.classifiers.empty()) {
    config.classifiers.clear();
    std::stringstream ss(f.classifiers);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (name.empty()) continue;
      const auto kind = classifier_kind_from_string(name);
      if (std::find(config.classifiers.begin(), config.classifiers.end(), kind) != config.classifiers.end()) {
        throw Error(Errc::ConfigInvalid, "classifier '" + name + "' selected twice");
      }
      config.classifiers.push_back(kind);
    }
  }
  if (f.ratio) config.split.ratio = *f.ratio;
  // precedence: --seed, then VERITAS_SEED, then the config file
  if (f.seed) {
    config.split.seed = *f.seed;
  } else if (auto env = seed_from_environment()) {
    config.split.seed = *env;
  }
  config.training.seed = config.split.seed;
  if (f.no_stratify) config.split.stratify = false;
  if (!f.out.empty()) config.output.model = f.out;
  if (!f.results.empty()) config.output.results = f.results;
  config.validate();

  const ExperimentResult result = run_experiment(config);
  if (parse_format(f.report) == ReportFormat::json) {
    std::cout << result.to_json(false).dump(2) << "\n";
  } else {
    for (const auto& r : result.reports) {
      std::cout << "== " << r.classifier_kind << " ==\n" << render_report(r, ReportFormat::text) << "\n";
    }
    std::cout << "ranking: ";
    for (std::size_t i = 0; i < result.ranking.size(); ++i) std::cout << (i ? " > " : "") << result.ranking[i];
    std::cout << "\nbest: " << result.best_kind << "\n";
  }
  for (const auto& t : result.timings) std::cerr << "[timing] " << t.stage << " " << t.ms << " ms\n";
  if (config.output.model) std::cerr << "saved " << result.best_kind << " bundle to " << config.output.model->string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"veritas - deceptive review detection"};
  app.require_subcommand(1);

  TrainFlags tf;
  auto* train = app.add_subcommand("train", "Split, train the selected classifiers, evaluate and keep the best");
  train->add_option("--config", tf.config, "Experiment config (JSON)");
  train->add_option("--corpus", tf.corpus, "Corpus directory (Ott layout) or CSV file");
  train->add_option("--corpus-kind", tf.corpus_kind, "ott or csv")->check(CLI::IsMember({"ott", "csv"}));
  train->add_option("--features", tf.features, "'lexical' or an embedding file");
  train->add_option("--classifiers", tf.classifiers, "Comma-separated kinds (svm,rf,bagging,adaboost,nb,knn,dtree,lr)");
  train->add_option("--ratio", tf.ratio, "Training fraction");
  train->add_option("--seed", tf.seed, "Split and training seed");
  train->add_flag("--no-stratify", tf.no_stratify, "Shuffle without per-label apportionment");
  train->add_option("--out", tf.out, "Where to write the best model bundle");
  train->add_option("--results", tf.results, "Where to write the results JSON");
  train->add_option("--report", tf.report, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string model_path, corpus_path, corpus_kind, features_path, split = "all", report = "text";
  auto* evaluate = app.add_subcommand("evaluate", "Score a saved bundle on a labeled corpus");
  evaluate->add_option("--model", model_path, "Model bundle")->required();
  evaluate->add_option("--corpus", corpus_path, "Corpus directory or CSV file")->required();
  evaluate->add_option("--corpus-kind", corpus_kind, "ott or csv")->check(CLI::IsMember({"ott", "csv"}));
  evaluate->add_option("--features", features_path, "Embedding file (embedding bundles only)");
  evaluate->add_option("--split", split, "all, or test for the bundle's held-out ids")
      ->check(CLI::IsMember({"all", "test"}));
  evaluate->add_option("--report", report, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string text;
  bool from_stdin = false;
  auto* predict_cmd = app.add_subcommand("predict", "Label review text with a saved bundle");
  predict_cmd->add_option("--model", model_path, "Model bundle")->required();
  auto* text_opt = predict_cmd->add_option("--text", text, "Review text");
  auto* stdin_opt = predict_cmd->add_flag("--stdin", from_stdin, "Read one review per line from standard input");
  text_opt->excludes(stdin_opt);

  std::string results_path, baseline_path;
  auto* report_cmd = app.add_subcommand("report", "Compare a results file against a baseline table");
  report_cmd->add_option("--results", results_path, "Results JSON written by train")->required();
  report_cmd->add_option("--baseline", baseline_path, "Baseline table JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*train) return run_train(tf);

    if (*evaluate) {
      const ModelBundle bundle = load_bundle(model_path);
      const ReviewSet corpus = load_corpus(corpus_from_flags(corpus_path, corpus_kind));
      std::optional<EmbeddingMatrix> embeddings;
      if (!features_path.empty()) embeddings = read_embedding_file(features_path);
      const MetricsReport r = evaluate_bundle(bundle, corpus, embeddings, split == "test");
      std::cout << render_report(r, parse_format(report));
      return 0;
    }

    if (*predict_cmd) {
      if (text_opt->count() == 0 && !from_stdin) throw Error(Errc::InvalidArgument, "predict needs --text or --stdin");
      const ModelBundle bundle = load_bundle(model_path);
      auto emit = [&](std::string_view review) {
        const Prediction p = predict_text(bundle, review);
        std::cout << to_string(p.label) << "\t" << p.score << "\n";
      };
      if (from_stdin) {
        std::string line;
        while (std::getline(std::cin, line)) emit(line);
      } else {
        emit(text);
      }
      return 0;
    }

    if (*report_cmd) {
      const ExperimentResult result = ExperimentResult::load(results_path);
      const BaselineTable baseline = BaselineTable::load(baseline_path);
      std::cout << compare_with_baseline(result.reports, baseline);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "veritas: " << e.what() << "\n";
    return exit_code(category(e.code()));
  } catch (const std::exception& e) {
    std::cerr << "veritas: internal error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
