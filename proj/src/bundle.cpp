#include "veritas/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "veritas/error.hpp"
#include "veritas/hash.hpp"
#include "veritas/model_io.hpp"

namespace veritas {

using nlohmann::json;

std::string_view to_string(FeatureKind kind) noexcept {
  return kind == FeatureKind::lexical ? "lexical" : "embedding_file";
}

namespace {

constexpr std::string_view kFooterTag = "crc32 ";

json features_to_json(const FeaturePipeline& f) {
  json j = {{"kind", to_string(f.kind)},
            {"fingerprint", f.fingerprint},
            {"dim", f.dim},
            {"pooling", {{"kind", to_string(f.pooling.kind)}, {"max_tokens", f.pooling.max_tokens}}}};
  if (f.vectorizer) {
    const auto& v = *f.vectorizer;
    j["vectorizer"] = {{"terms", v.terms()},
                       {"idf", v.idf()},
                       {"min_df", v.config().min_df},
                       {"max_features", v.config().max_features ? json(*v.config().max_features) : json(nullptr)},
                       {"lowercase", v.config().lowercase}};
  }
  return j;
}

FeaturePipeline features_from_json(const json& j) {
  FeaturePipeline f;
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "lexical") {
    f.kind = FeatureKind::lexical;
  } else if (kind == "embedding_file") {
    f.kind = FeatureKind::embedding_file;
  } else {
    throw Error(Errc::CorruptBundle, "unknown feature kind '" + kind + "'");
  }
  f.fingerprint = j.at("fingerprint").get<std::string>();
  f.dim = j.at("dim").get<std::size_t>();
  f.pooling.kind = pooling_kind_from_string(j.at("pooling").at("kind").get<std::string>());
  f.pooling.max_tokens = j.at("pooling").at("max_tokens").get<std::size_t>();
  if (f.kind == FeatureKind::lexical) {
    const auto& v = j.at("vectorizer");
    LexicalConfig cfg;
    cfg.min_df = v.at("min_df").get<std::size_t>();
    if (!v.at("max_features").is_null()) cfg.max_features = v.at("max_features").get<std::size_t>();
    cfg.lowercase = v.at("lowercase").get<bool>();
    f.vectorizer.emplace(v.at("terms").get<std::vector<std::string>>(), v.at("idf").get<std::vector<double>>(), cfg);
    if (f.vectorizer->fingerprint() != f.fingerprint) {
      throw Error(Errc::FingerprintMismatch, "stored vectorizer does not match its recorded fingerprint");
    }
    if (f.vectorizer->size() != f.dim) throw Error(Errc::CorruptBundle, "vectorizer width differs from dim");
  }
  return f;
}

}  // namespace

std::string serialize_bundle(const ModelBundle& b) {
  json labels = json::array();
  for (Label l : b.test_predictions) labels.push_back(index_of(l));
  json j = {{"format", "veritas-bundle"},
            {"format_version", b.format_version},
            {"label_encoding", {{"deceptive", 0}, {"truthful", 1}, {"positive_class", "deceptive"}}},
            {"features", features_to_json(b.features)},
            {"model", model_to_json(b.model)},
            {"metadata", b.metadata},
            {"test_ids", b.test_ids},
            {"test_predictions", labels}};
  std::string body = j.dump(1) + "\n";
  body += kFooterTag;
  body += to_hex(crc32(std::string_view(body).substr(0, body.size() - kFooterTag.size())), 8);
  body += "\n";
  return body;
}

ModelBundle parse_bundle(std::string_view bytes) {
  // footer: "crc32 xxxxxxxx\n" at the very end
  constexpr std::size_t kFooterSize = 6 + 8 + 1;
  if (bytes.size() < kFooterSize + 2 || bytes.back() != '\n') {
    throw Error(Errc::CorruptBundle, "missing checksum footer");
  }
  const std::string_view footer = bytes.substr(bytes.size() - kFooterSize);
  if (footer.substr(0, kFooterTag.size()) != kFooterTag || bytes[bytes.size() - kFooterSize - 1] != '\n') {
    throw Error(Errc::CorruptBundle, "missing checksum footer");
  }
  const std::string_view body = bytes.substr(0, bytes.size() - kFooterSize);
  const std::string expected = to_hex(crc32(body), 8);
  if (footer.substr(kFooterTag.size(), 8) != expected) {
    throw Error(Errc::CorruptBundle, "checksum mismatch (expected " + expected + ")");
  }

  json j;
  try {
    j = json::parse(body);
  } catch (const json::parse_error& e) {
    throw Error(Errc::CorruptBundle, e.what());
  }
  try {
    if (j.at("format").get<std::string>() != "veritas-bundle") throw Error(Errc::CorruptBundle, "not a model bundle");
    const int version = j.at("format_version").get<int>();
    if (version != kBundleVersion) {
      throw Error(Errc::UnsupportedBundleVersion, "bundle version " + std::to_string(version) + ", this build reads " +
                                                      std::to_string(kBundleVersion));
    }
    ModelBundle b;
    b.format_version = version;
    b.features = features_from_json(j.at("features"));
    b.model = model_from_json(j.at("model"));
    if (b.model.feature_dim != b.features.dim) throw Error(Errc::CorruptBundle, "model and feature widths differ");
    b.metadata = j.at("metadata");
    b.test_ids = j.at("test_ids").get<std::vector<std::string>>();
    for (const auto& v : j.at("test_predictions")) {
      const int i = v.get<int>();
      if (i != 0 && i != 1) throw Error(Errc::CorruptBundle, "prediction label out of range");
      b.test_predictions.push_back(static_cast<Label>(i));
    }
    if (b.test_predictions.size() != b.test_ids.size()) {
      throw Error(Errc::CorruptBundle, "test ids and predictions differ in length");
    }
    return b;
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptBundle, e.what());
  }
}

void save_bundle(const ModelBundle& bundle, const std::filesystem::path& path) {
  const std::string bytes = serialize_bundle(bundle);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write to '" + path.string() + "' failed");
}

ModelBundle load_bundle(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_bundle(buf.str());
}

Prediction predict_vector(const ModelBundle& bundle, std::span<const float> row) {
  if (row.size() != bundle.model.feature_dim) {
    throw Error(Errc::DimensionMismatch, "vector has " + std::to_string(row.size()) + " values, model expects " +
                                             std::to_string(bundle.model.feature_dim));
  }
  const Matrix X(1, row.size(), std::vector<double>(row.begin(), row.end()));
  return {predict(bundle.model, X).front(), decision_scores(bundle.model, X).front()};
}

Prediction predict_text(const ModelBundle& bundle, std::string_view text) {
  if (bundle.features.kind != FeatureKind::lexical || !bundle.features.vectorizer) {
    throw Error(Errc::FingerprintMismatch,
                "bundle was trained on embedding-file features; supply a pooled vector instead of text");
  }
  const auto& vectorizer = *bundle.features.vectorizer;
  (void)tokenize(text, vectorizer.config().lowercase);  // EmptyText check
  return predict_vector(bundle, vectorizer.transform(text));
}

void check_compatible(const ModelBundle& bundle, const EmbeddingMatrix& rows) {
  if (rows.provider_fingerprint() != bundle.features.fingerprint) {
    throw Error(Errc::FingerprintMismatch, "features from provider '" + rows.provider_fingerprint() +
                                               "' but the model was trained on '" + bundle.features.fingerprint + "'");
  }
  if (rows.dim() != bundle.model.feature_dim) {
    throw Error(Errc::DimensionMismatch, "features have dimension " + std::to_string(rows.dim()) + ", model expects " +
                                             std::to_string(bundle.model.feature_dim));
  }
}

}  // namespace veritas
