#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace veritas {

struct TokenSequence {
  std::vector<std::string> tokens;
};

/// Splits on Unicode whitespace and strips leading/trailing punctuation from
/// every piece; interior punctuation ("wi-fi", "don't") is kept.
/// Throws EmptyText when nothing survives.
TokenSequence tokenize(std::string_view text, bool lowercase);

/// Same rule as tokenize() but returns an empty list instead of throwing.
std::vector<std::string> split_tokens(std::string_view text, bool lowercase);

enum class PoolingKind { mean, sum, concat_truncate };

struct PoolingStrategy {
  PoolingKind kind = PoolingKind::mean;
  std::size_t max_tokens = 256;  // concat_truncate only

  /// Output width for token vectors of width `dim`.
  std::size_t output_dim(std::size_t dim) const noexcept;

  friend bool operator==(const PoolingStrategy&, const PoolingStrategy&) = default;
};

std::string_view to_string(PoolingKind kind) noexcept;
PoolingKind pooling_kind_from_string(std::string_view name);

/// Combines per-token vectors into one review vector. Accumulation is in
/// double precision.
std::vector<float> pool(std::span<const std::vector<float>> token_vectors, const PoolingStrategy& strategy);

/// n x d row-major binary32 matrix with one review id per row.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix() = default;
  /// Validates shape, finiteness and (non-)emptiness of ids.
  EmbeddingMatrix(std::vector<std::string> ids, std::vector<float> values, std::size_t dim,
                  std::string provider_fingerprint);

  std::size_t rows() const noexcept { return ids_.size(); }
  std::size_t dim() const noexcept { return dim_; }
  const std::vector<std::string>& ids() const noexcept { return ids_; }
  const std::vector<float>& values() const noexcept { return values_; }
  const std::string& provider_fingerprint() const noexcept { return fingerprint_; }
  std::span<const float> row(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::vector<std::string> ids_;
  std::vector<float> values_;
  std::size_t dim_ = 0;
  std::string fingerprint_;
};

/// Selects/reorders rows to match `ids`. Throws UnknownReviewId naming the
/// first id that is not present.
EmbeddingMatrix align(const EmbeddingMatrix& matrix, std::span<const std::string> ids);

// FRVE container, all integers little-endian:
//   "FRVE" | u32 version=1 | u64 n | u64 d | n*d f32 row-major
//   | n x (u16 len, id bytes) | u16 len, fingerprint bytes
inline constexpr std::uint32_t kFrveVersion = 1;

std::string encode_embedding_file(const EmbeddingMatrix& matrix);
EmbeddingMatrix decode_embedding_file(std::string_view bytes);

void write_embedding_file(const EmbeddingMatrix& matrix, const std::filesystem::path& path);
EmbeddingMatrix read_embedding_file(const std::filesystem::path& path);

}  // namespace veritas
