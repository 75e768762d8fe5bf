#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "veritas/bundle.hpp"
#include "veritas/classifiers.hpp"
#include "veritas/corpus.hpp"
#include "veritas/evaluation.hpp"
#include "veritas/lexical.hpp"

namespace veritas {

enum class CorpusKind { ott, csv };

struct CorpusConfig {
  CorpusKind kind = CorpusKind::ott;
  std::filesystem::path path;
  CsvOptions csv;  // label_map empty: "deceptive"/"truthful"
};

struct FeatureConfig {
  FeatureKind kind = FeatureKind::lexical;
  std::filesystem::path path;  // embedding_file only
  LexicalConfig lexical;
  PoolingStrategy pooling;  // recorded for embedding files
};

struct SplitConfig {
  double ratio = 0.8;
  std::uint64_t seed = 42;
  bool stratify = true;
};

struct OutputConfig {
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> results;
};

struct ExperimentConfig {
  CorpusConfig corpus;
  FeatureConfig features;
  SplitConfig split;
  std::vector<ClassifierKind> classifiers = reference_classifiers();
  TrainingOptions training;  // training.seed follows split.seed
  OutputConfig output;

  /// Unknown keys, bad values and duplicate classifiers are ConfigInvalid.
  /// Relative paths are resolved against `base_dir`.
  static ExperimentConfig from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
  static ExperimentConfig load(const std::filesystem::path& file);
  nlohmann::json to_json() const;

  /// ratio in (0,1), at least one classifier, hyperparameters in range.
  void validate() const;
  /// validate() plus existence of the referenced input paths.
  void validate_paths() const;
};

/// Reads VERITAS_SEED; ConfigInvalid if set but not an unsigned integer.
std::optional<std::uint64_t> seed_from_environment();

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct ExperimentResult {
  std::vector<MetricsReport> reports;  // in selection order
  std::vector<std::string> ranking;
  std::string best_kind;
  std::string split_fingerprint;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  nlohmann::json config;
  std::vector<StageTiming> timings;

  nlohmann::json to_json(bool include_timings = true) const;
  static ExperimentResult from_json(const nlohmann::json& j);
  static ExperimentResult load(const std::filesystem::path& file);

  const MetricsReport* find(std::string_view kind) const;
};

/// Sorted kind names: accuracy desc, macro f1 desc, kind name asc.
std::vector<std::string> rank_reports(std::span<const MetricsReport> reports);

/// Everything a run produced, for callers that need more than the result.
struct ExperimentRun {
  ExperimentResult result;
  ReviewSet corpus;
  SplitIndex split;
  FeaturePipeline features;
  LabeledMatrix train;
  LabeledMatrix test;
  std::vector<ClassifierModel> models;  // parallel to config.classifiers
  ModelBundle best_bundle;
};

ReviewSet load_corpus(const CorpusConfig& config);

/// load -> split -> vectorize/align -> fit -> evaluate -> rank -> persist.
/// Module errors are re-thrown with the stage name prepended.
ExperimentRun run_experiment_full(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Bundle feature rows for every review in `corpus`. Embedding bundles need
/// the matching embedding file.
EmbeddingMatrix bundle_features(const ModelBundle& bundle, const ReviewSet& corpus,
                                const std::optional<EmbeddingMatrix>& embeddings);

/// Scores the bundle on `corpus`; with only_test_ids, restricted to the
/// bundle's recorded test ids.
MetricsReport evaluate_bundle(const ModelBundle& bundle, const ReviewSet& corpus,
                              const std::optional<EmbeddingMatrix>& embeddings, bool only_test_ids);

}  // namespace veritas
