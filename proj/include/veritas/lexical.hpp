#pragma once

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "veritas/embedding.hpp"

namespace veritas {

struct LexicalConfig {
  std::size_t min_df = 2;
  std::optional<std::size_t> max_features = 2000;
  bool lowercase = true;

  friend bool operator==(const LexicalConfig&, const LexicalConfig&) = default;
};

/// TF-IDF vectorizer with smoothed idf: idf(t) = ln((1 + N) / (1 + df(t))) + 1.
/// Columns are the retained terms in lexicographic order.
class LexicalVectorizer {
 public:
  LexicalVectorizer() = default;
  /// Rebuilds a fitted vectorizer from stored terms and idf values.
  LexicalVectorizer(std::vector<std::string> terms, std::vector<double> idf, LexicalConfig config);

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<double>& idf() const noexcept { return idf_; }
  const LexicalConfig& config() const noexcept { return config_; }
  std::size_t size() const noexcept { return terms_.size(); }

  /// -1 for out-of-vocabulary terms.
  std::ptrdiff_t column(const std::string& term) const;

  /// L2-normalised tf*idf row; all-OOV text gives the zero vector.
  std::vector<float> transform(std::string_view text) const;

  /// Hash of config, terms and idf values.
  std::string fingerprint() const;

  friend bool operator==(const LexicalVectorizer& a, const LexicalVectorizer& b) {
    return a.terms_ == b.terms_ && a.idf_ == b.idf_ && a.config_ == b.config_;
  }

 private:
  std::vector<std::string> terms_;
  std::vector<double> idf_;
  LexicalConfig config_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Keeps terms with document frequency >= min_df, then the max_features most
/// frequent (ties lexicographic). Throws EmptyVocabulary if nothing is left.
LexicalVectorizer fit_lexical_vectorizer(std::span<const std::string> train_texts, const LexicalConfig& config);

EmbeddingMatrix vectorize_lexical(const LexicalVectorizer& vectorizer, std::span<const std::string> texts,
                                  std::span<const std::string> ids);

}  // namespace veritas
