#include "veritas/embedding.hpp"
#include "veritas/error.hpp"

namespace veritas {

std::size_t PoolingStrategy::output_dim(std::size_t dim) const noexcept {
  return kind == PoolingKind::concat_truncate ? max_tokens * dim : dim;
}

std::string_view to_string(PoolingKind kind) noexcept {
  switch (kind) {
    case PoolingKind::mean: return "mean";
    case PoolingKind::sum: return "sum";
    case PoolingKind::concat_truncate: return "concat_truncate";
  }
  return "mean";
}

PoolingKind pooling_kind_from_string(std::string_view name) {
  if (name == "mean") return PoolingKind::mean;
  if (name == "sum") return PoolingKind::sum;
  if (name == "concat_truncate" || name == "concat") return PoolingKind::concat_truncate;
  throw Error(Errc::InvalidArgument, "unknown pooling '" + std::string(name) + "'");
}

std::vector<float> pool(std::span<const std::vector<float>> token_vectors, const PoolingStrategy& strategy) {
  if (token_vectors.empty()) throw Error(Errc::EmptyTokenList, "cannot pool an empty token list");
  const std::size_t d = token_vectors.front().size();
  if (d == 0) throw Error(Errc::DimensionMismatch, "token vectors have dimension 0");
  for (std::size_t i = 1; i < token_vectors.size(); ++i) {
    if (token_vectors[i].size() != d) {
      throw Error(Errc::DimensionMismatch, "token vector " + std::to_string(i) + " has dimension " +
                                               std::to_string(token_vectors[i].size()) + ", expected " +
                                               std::to_string(d));
    }
  }

  if (strategy.kind == PoolingKind::concat_truncate) {
    if (strategy.max_tokens == 0) throw Error(Errc::InvalidArgument, "max_tokens must be >= 1");
    std::vector<float> out(strategy.max_tokens * d, 0.0f);
    const std::size_t kept = std::min(strategy.max_tokens, token_vectors.size());
    for (std::size_t t = 0; t < kept; ++t) {
      std::copy(token_vectors[t].begin(), token_vectors[t].end(), out.begin() + static_cast<std::ptrdiff_t>(t * d));
    }
    return out;
  }

  std::vector<double> acc(d, 0.0);
  for (const auto& v : token_vectors) {
    for (std::size_t j = 0; j < d; ++j) acc[j] += v[j];
  }
  const double scale = strategy.kind == PoolingKind::mean ? 1.0 / static_cast<double>(token_vectors.size()) : 1.0;
  std::vector<float> out(d);
  for (std::size_t j = 0; j < d; ++j) out[j] = static_cast<float>(acc[j] * scale);
  return out;
}

}  // namespace veritas
