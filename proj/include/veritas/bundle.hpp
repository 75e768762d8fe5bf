#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "veritas/classifiers.hpp"
#include "veritas/embedding.hpp"
#include "veritas/lexical.hpp"

namespace veritas {

enum class FeatureKind { lexical, embedding_file };

std::string_view to_string(FeatureKind kind) noexcept;

/// How review text becomes a model input row.
struct FeaturePipeline {
  FeatureKind kind = FeatureKind::lexical;
  std::optional<LexicalVectorizer> vectorizer;  // lexical only
  std::string fingerprint;                      // provider fingerprint of the rows the model saw
  PoolingStrategy pooling;                      // embedding_file: pooling the exporter applied
  std::size_t dim = 0;

  friend bool operator==(const FeaturePipeline&, const FeaturePipeline&) = default;
};

inline constexpr int kBundleVersion = 1;

struct ModelBundle {
  int format_version = kBundleVersion;
  ClassifierModel model;
  FeaturePipeline features;
  nlohmann::json metadata = nlohmann::json::object();
  std::vector<std::string> test_ids;
  std::vector<Label> test_predictions;

  friend bool operator==(const ModelBundle&, const ModelBundle&) = default;
};

/// JSON document followed by a footer line "crc32 <8 hex digits>" covering
/// every byte before the footer.
std::string serialize_bundle(const ModelBundle& bundle);

/// Checks the footer first (CorruptBundle), then the version
/// (UnsupportedBundleVersion), then the content.
ModelBundle parse_bundle(std::string_view bytes);

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path);
ModelBundle load_bundle(const std::filesystem::path& path);

struct Prediction {
  Label label = Label::deceptive;
  double score = 0.0;
};

/// tokenize -> vectorize -> predict. Needs a lexical bundle; throws EmptyText
/// when the text has no tokens.
Prediction predict_text(const ModelBundle& bundle, std::string_view text);

/// Prediction for an already pooled review vector.
Prediction predict_vector(const ModelBundle& bundle, std::span<const float> row);

/// FingerprintMismatch/DimensionMismatch unless `rows` came from the same
/// feature provider the bundle was trained on.
void check_compatible(const ModelBundle& bundle, const EmbeddingMatrix& rows);

}  // namespace veritas
