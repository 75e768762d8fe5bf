#pragma once

#include <span>
#include <string>
#include <vector>

#include "veritas/label.hpp"

namespace veritas {

class EmbeddingMatrix;

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);
  static Matrix from_embedding(const EmbeddingMatrix& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

  const std::vector<double>& data() const noexcept { return data_; }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b) noexcept;

/// Training data for the classifiers: rows of X aligned with labels and ids.
struct LabeledMatrix {
  Matrix X;
  std::vector<Label> y;
  std::vector<std::string> ids;

  /// Checks row counts, n >= 2 and finiteness (NonFiniteFeature).
  void validate() const;
  /// validate() plus DegenerateLabels when only one class is present.
  void validate_for_training() const;
};

/// Per-feature standardisation fitted on training rows. Standard deviations
/// at or below 1e-12 are replaced by 1.
struct Scaler {
  std::vector<double> mean;
  std::vector<double> stddev;

  static Scaler fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
  void apply_inplace(std::span<double> row) const noexcept;

  friend bool operator==(const Scaler&, const Scaler&) = default;
};

}  // namespace veritas
