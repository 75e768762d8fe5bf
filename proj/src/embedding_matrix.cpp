#include <cmath>
#include <unordered_map>

#include "veritas/embedding.hpp"
#include "veritas/error.hpp"

namespace veritas {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, std::vector<float> values, std::size_t dim,
                                 std::string provider_fingerprint)
    : ids_(std::move(ids)), values_(std::move(values)), dim_(dim), fingerprint_(std::move(provider_fingerprint)) {
  if (dim_ == 0) throw Error(Errc::DimensionMismatch, "embedding dimension must be >= 1");
  if (values_.size() != ids_.size() * dim_) {
    throw Error(Errc::IdCountMismatch, std::to_string(ids_.size()) + " ids for " + std::to_string(values_.size()) +
                                           " values at dimension " + std::to_string(dim_));
  }
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (!std::isfinite(values_[k])) {
      throw Error(Errc::NonFiniteValue, "row '" + ids_[k / dim_] + "' column " + std::to_string(k % dim_));
    }
  }
}

EmbeddingMatrix align(const EmbeddingMatrix& matrix, std::span<const std::string> ids) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(matrix.rows());
  for (std::size_t i = 0; i < matrix.rows(); ++i) index.emplace(matrix.ids()[i], i);

  std::vector<float> values;
  values.reserve(ids.size() * matrix.dim());
  for (const auto& id : ids) {
    const auto it = index.find(id);
    if (it == index.end()) throw Error(Errc::UnknownReviewId, id);
    const auto row = matrix.row(it->second);
    values.insert(values.end(), row.begin(), row.end());
  }
  return EmbeddingMatrix({ids.begin(), ids.end()}, std::move(values), matrix.dim(), matrix.provider_fingerprint());
}

}  // namespace veritas
