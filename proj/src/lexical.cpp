#include "veritas/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "veritas/error.hpp"
#include "veritas/hash.hpp"

namespace veritas {

LexicalVectorizer::LexicalVectorizer(std::vector<std::string> terms, std::vector<double> idf, LexicalConfig config)
    : terms_(std::move(terms)), idf_(std::move(idf)), config_(config) {
  if (terms_.size() != idf_.size()) {
    throw Error(Errc::InvalidArgument, "vocabulary has " + std::to_string(terms_.size()) + " terms but " +
                                           std::to_string(idf_.size()) + " idf values");
  }
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!(idf_[i] > 0.0) || !std::isfinite(idf_[i])) {
      throw Error(Errc::InvalidArgument, "idf for '" + terms_[i] + "' must be positive and finite");
    }
    if (!index_.emplace(terms_[i], i).second) throw Error(Errc::InvalidArgument, "duplicate term '" + terms_[i] + "'");
  }
}

std::ptrdiff_t LexicalVectorizer::column(const std::string& term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::vector<float> LexicalVectorizer::transform(std::string_view text) const {
  std::map<std::size_t, double> tf;
  for (const auto& token : split_tokens(text, config_.lowercase)) {
    const auto col = column(token);
    if (col >= 0) tf[static_cast<std::size_t>(col)] += 1.0;
  }
  std::vector<float> row(terms_.size(), 0.0f);
  double norm2 = 0.0;
  for (auto& [col, weight] : tf) {
    weight *= idf_[col];
    norm2 += weight * weight;
  }
  if (norm2 > 0.0) {
    const double inv = 1.0 / std::sqrt(norm2);
    for (const auto& [col, weight] : tf) row[col] = static_cast<float>(weight * inv);
  }
  return row;
}

std::string LexicalVectorizer::fingerprint() const {
  Fnv1a64 h;
  h.update("lexical-tfidf/1");
  h.update_u64(config_.min_df).update_u64(config_.max_features.value_or(0)).update_u64(config_.lowercase ? 1 : 0);
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    h.update(terms_[i]).update_u64(terms_[i].size()).update_f64(idf_[i]);
  }
  return "lexical:" + h.hex();
}

LexicalVectorizer fit_lexical_vectorizer(std::span<const std::string> train_texts, const LexicalConfig& config) {
  if (train_texts.empty()) throw Error(Errc::InvalidArgument, "cannot fit a vectorizer on zero documents");
  if (config.min_df < 1) throw Error(Errc::InvalidArgument, "min_df must be >= 1");
  if (config.max_features && *config.max_features == 0) throw Error(Errc::InvalidArgument, "max_features must be >= 1");

  std::map<std::string, std::size_t> df;
  for (const auto& doc : train_texts) {
    auto tokens = split_tokens(doc, config.lowercase);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (auto& t : tokens) ++df[std::move(t)];
  }

  std::vector<std::pair<std::string, std::size_t>> kept;
  for (auto& [term, count] : df) {
    if (count >= config.min_df) kept.emplace_back(term, count);
  }
  if (kept.empty()) {
    throw Error(Errc::EmptyVocabulary, "no term appears in at least " + std::to_string(config.min_df) + " documents");
  }
  if (config.max_features && kept.size() > *config.max_features) {
    std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    kept.resize(*config.max_features);
    std::sort(kept.begin(), kept.end());
  }

  const double n = static_cast<double>(train_texts.size());
  std::vector<std::string> terms;
  std::vector<double> idf;
  terms.reserve(kept.size());
  idf.reserve(kept.size());
  for (auto& [term, count] : kept) {
    idf.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(count))) + 1.0);
    terms.push_back(std::move(term));
  }
  return LexicalVectorizer(std::move(terms), std::move(idf), config);
}

EmbeddingMatrix vectorize_lexical(const LexicalVectorizer& vectorizer, std::span<const std::string> texts,
                                  std::span<const std::string> ids) {
  if (texts.size() != ids.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(texts.size()) + " texts for " + std::to_string(ids.size()) + " ids");
  }
  if (vectorizer.size() == 0) throw Error(Errc::InvalidArgument, "vectorizer is not fitted");
  std::vector<float> values;
  values.reserve(texts.size() * vectorizer.size());
  for (const auto& t : texts) {
    const auto row = vectorizer.transform(t);
    values.insert(values.end(), row.begin(), row.end());
  }
  return EmbeddingMatrix({ids.begin(), ids.end()}, std::move(values), vectorizer.size(), vectorizer.fingerprint());
}

}  // namespace veritas
