#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "veritas/label.hpp"

namespace veritas {

/// 2x2 counts; rows are the true class, columns the predicted class,
/// deceptive first on both axes.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, 2>, 2> counts{};

  std::uint64_t total() const noexcept;
  std::uint64_t at(Label truth, Label predicted) const noexcept {
    return counts[index_of(truth)][index_of(predicted)];
  }
  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted);

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t support = 0;
  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct AverageMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  friend bool operator==(const AverageMetrics&, const AverageMetrics&) = default;
};

struct MetricsReport {
  std::array<ClassMetrics, 2> per_class;  // indexed by Label
  double accuracy = 0.0;
  AverageMetrics macro_avg;
  AverageMetrics weighted_avg;
  std::string classifier_kind;
  ConfusionMatrix matrix;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Every 0/0 ratio is taken as 0. Throws EmptyInput for an all-zero matrix.
MetricsReport compute_metrics(const ConfusionMatrix& cm, std::string classifier_kind = {});

enum class ReportFormat { text, json };

/// Text form: "Accuracy =%.6f%%", then the precision/recall/f1/support table
/// with 2-decimal half-up cells, then the confusion matrix.
std::string render_report(const MetricsReport& report, ReportFormat format);

nlohmann::json report_to_json(const MetricsReport& report);
MetricsReport report_from_json(const nlohmann::json& j);

/// Half-up rounding of `value` to two decimals, as text ("0.88").
/// A tolerance of 1e-9 absorbs binary representation error on exact halves.
std::string format_2dp(double value);
double round_half_up(double value, int decimals);

struct BaselineRow {
  std::string classifier;
  double prior_accuracy = 0.0;  // percent
  double this_accuracy = 0.0;   // percent
  double prior_f1 = 0.0;
  double this_f1 = 0.0;
};

class BaselineTable {
 public:
  BaselineTable() = default;
  explicit BaselineTable(std::vector<BaselineRow> rows) : rows_(std::move(rows)) {}

  static BaselineTable from_json(const nlohmann::json& j);
  static BaselineTable load(const std::filesystem::path& path);

  const std::vector<BaselineRow>& rows() const noexcept { return rows_; }
  /// Row for a classifier kind name ("svm", "rforest", ...), or nullptr.
  const BaselineRow* find_kind(std::string_view kind) const;

 private:
  std::vector<BaselineRow> rows_;
};

/// Display name used by the baseline table for a classifier kind, or "".
std::string_view baseline_name(std::string_view kind) noexcept;

/// Table of signed deltas (this run minus the baseline "this study" column):
/// accuracy in percentage points and weighted-average f1, both to 2 decimals.
/// Throws UnknownClassifier when a result's kind has no baseline row.
std::string compare_with_baseline(std::span<const MetricsReport> results, const BaselineTable& baseline);

}  // namespace veritas
