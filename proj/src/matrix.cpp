#include "veritas/matrix.hpp"

#include <cmath>

#include "veritas/embedding.hpp"
#include "veritas/error.hpp"

namespace veritas {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) throw Error(Errc::DimensionMismatch, "matrix data does not match its shape");
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  std::vector<double> data;
  data.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(Errc::DimensionMismatch, "ragged rows");
    data.insert(data.end(), r.begin(), r.end());
  }
  return Matrix(rows.size(), cols, std::move(data));
}

Matrix Matrix::from_embedding(const EmbeddingMatrix& m) {
  return Matrix(m.rows(), m.dim(), std::vector<double>(m.values().begin(), m.values().end()));
}

double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void LabeledMatrix::validate() const {
  if (X.rows() != y.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(X.rows()) + " rows for " + std::to_string(y.size()) + " labels");
  }
  if (!ids.empty() && ids.size() != y.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(ids.size()) + " ids for " + std::to_string(y.size()) + " labels");
  }
  if (X.rows() < 2) throw Error(Errc::InvalidArgument, "need at least 2 rows, got " + std::to_string(X.rows()));
  if (X.cols() == 0) throw Error(Errc::DimensionMismatch, "feature dimension is 0");
  for (std::size_t k = 0; k < X.data().size(); ++k) {
    if (!std::isfinite(X.data()[k])) {
      throw Error(Errc::NonFiniteFeature, "row " + std::to_string(k / X.cols()) + " column " +
                                              std::to_string(k % X.cols()));
    }
  }
}

void LabeledMatrix::validate_for_training() const {
  validate();
  bool seen[2] = {false, false};
  for (Label l : y) seen[index_of(l)] = true;
  if (!seen[0] || !seen[1]) throw Error(Errc::DegenerateLabels, "training data contains a single class");
}

Scaler Scaler::fit(const Matrix& X) {
  Scaler s;
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  s.mean.assign(d, 0.0);
  s.stddev.assign(d, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = X.row(i);
    for (std::size_t j = 0; j < d; ++j) s.mean[j] += r[j];
  }
  for (auto& m : s.mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = X.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = r[j] - s.mean[j];
      s.stddev[j] += dv * dv;
    }
  }
  for (auto& v : s.stddev) {
    v = std::sqrt(v / static_cast<double>(n));
    if (!(v > 1e-12)) v = 1.0;
  }
  return s;
}

void Scaler::apply_inplace(std::span<double> row) const noexcept {
  for (std::size_t j = 0; j < row.size(); ++j) row[j] = (row[j] - mean[j]) / stddev[j];
}

Matrix Scaler::apply(const Matrix& X) const {
  if (X.cols() != mean.size()) {
    throw Error(Errc::DimensionMismatch, "scaler fitted on " + std::to_string(mean.size()) + " features, got " +
                                             std::to_string(X.cols()));
  }
  Matrix out = X;
  for (std::size_t i = 0; i < out.rows(); ++i) apply_inplace(out.row(i));
  return out;
}

}  // namespace veritas
