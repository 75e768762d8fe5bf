#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "veritas/label.hpp"
#include "veritas/matrix.hpp"
#include "veritas/tree.hpp"

namespace veritas {

enum class ClassifierKind { svm, gnb, knn, dtree, rforest, bagging, adaboost, logreg };

std::string_view to_string(ClassifierKind kind) noexcept;
/// Accepts canonical names plus the short aliases rf, nb, lr, tree, ada.
ClassifierKind classifier_kind_from_string(std::string_view name);
/// The six classifiers of the reference experiment, in report order.
std::vector<ClassifierKind> reference_classifiers();

// -- hyperparameters ---------------------------------------------------------

struct SvmOptions {
  double C = 1.0;
  double tol = 1e-3;
  /// Iteration budget in sweeps: at most max_passes * n working-set updates.
  std::size_t max_passes = 100;
  friend bool operator==(const SvmOptions&, const SvmOptions&) = default;
};

struct GnbOptions {
  double var_smoothing = 1e-9;
  friend bool operator==(const GnbOptions&, const GnbOptions&) = default;
};

struct KnnOptions {
  std::size_t k = 5;
  friend bool operator==(const KnnOptions&, const KnnOptions&) = default;
};

struct ForestOptions {
  std::size_t n_trees = 100;
  std::optional<std::size_t> m_features;  // nullopt: ceil(sqrt(d)) for rforest, d for bagging
  TreeOptions tree;
  bool bootstrap = true;
  std::size_t threads = 0;  // 0: one per hardware thread; results do not depend on it
  friend bool operator==(const ForestOptions&, const ForestOptions&) = default;
};

struct AdaBoostOptions {
  std::size_t n_rounds = 50;
  friend bool operator==(const AdaBoostOptions&, const AdaBoostOptions&) = default;
};

struct LogRegOptions {
  double learning_rate = 0.1;
  std::size_t n_iters = 1000;
  double l2 = 1e-4;
  friend bool operator==(const LogRegOptions&, const LogRegOptions&) = default;
};

struct TrainingOptions {
  SvmOptions svm;
  GnbOptions gnb;
  KnnOptions knn;
  TreeOptions dtree;
  ForestOptions rforest;
  ForestOptions bagging;
  AdaBoostOptions adaboost;
  LogRegOptions logreg;
  std::uint64_t seed = 42;
  friend bool operator==(const TrainingOptions&, const TrainingOptions&) = default;
};

// -- fitted parameters -------------------------------------------------------

/// Separating hyperplane f(x) = w.x + b in standardised feature space.
struct SvmParams {
  std::vector<double> weights;
  double bias = 0.0;
  SvmOptions options;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t support_vectors = 0;
  friend bool operator==(const SvmParams&, const SvmParams&) = default;
};

struct GnbParams {
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> mean;
  std::array<std::vector<double>, 2> variance;  // already clamped to >= epsilon
  double var_smoothing = 1e-9;
  double epsilon = 0.0;
  friend bool operator==(const GnbParams&, const GnbParams&) = default;
};

struct KnnParams {
  Matrix train;  // standardised
  std::vector<Label> labels;
  std::size_t k = 5;
  friend bool operator==(const KnnParams&, const KnnParams&) = default;
};

struct ForestParams {
  std::vector<DecisionTree> trees;
  std::vector<std::uint64_t> seeds;
  std::size_t m_features = 0;
  bool bootstrap = true;
  friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

/// Depth-one tree: x[feature] <= threshold predicts `left`, else `right`.
/// A constant stump (feature < 0) always predicts `left`.
struct Stump {
  std::int32_t feature = -1;
  double threshold = 0.0;
  Label left = Label::deceptive;
  Label right = Label::truthful;

  Label predict(std::span<const double> x) const noexcept {
    if (feature < 0) return left;
    return x[static_cast<std::size_t>(feature)] <= threshold ? left : right;
  }
  friend bool operator==(const Stump&, const Stump&) = default;
};

struct AdaBoostParams {
  std::vector<Stump> stumps;
  std::vector<double> alphas;
  std::vector<double> errors;  // weighted error of each accepted round
  std::size_t n_rounds = 50;
  std::string stop_reason;     // "rounds", "perfect" or "weak"
  friend bool operator==(const AdaBoostParams&, const AdaBoostParams&) = default;
};

struct LogRegParams {
  std::vector<double> weights;
  double bias = 0.0;
  LogRegOptions options;
  double final_loss = 0.0;
  friend bool operator==(const LogRegParams&, const LogRegParams&) = default;
};

using ModelParams =
    std::variant<SvmParams, GnbParams, KnnParams, DecisionTree, ForestParams, AdaBoostParams, LogRegParams>;

struct ClassifierModel {
  ClassifierKind kind = ClassifierKind::svm;
  ModelParams params;
  std::optional<Scaler> scaler;  // svm, knn and logreg
  std::size_t feature_dim = 0;

  friend bool operator==(const ClassifierModel&, const ClassifierModel&) = default;
};

// -- training ------------------------------------------------------------------

ClassifierModel fit_svm(const LabeledMatrix& data, const SvmOptions& options = {});
ClassifierModel fit_gnb(const LabeledMatrix& data, const GnbOptions& options = {});
ClassifierModel fit_knn(const LabeledMatrix& data, const KnnOptions& options = {});
ClassifierModel fit_dtree(const LabeledMatrix& data, const TreeOptions& options, std::uint64_t seed);
ClassifierModel fit_rforest(const LabeledMatrix& data, const ForestOptions& options, std::uint64_t seed);
ClassifierModel fit_bagging(const LabeledMatrix& data, const ForestOptions& options, std::uint64_t seed);
ClassifierModel fit_adaboost(const LabeledMatrix& data, const AdaBoostOptions& options = {});
ClassifierModel fit_logreg(const LabeledMatrix& data, const LogRegOptions& options = {});

ClassifierModel fit(ClassifierKind kind, const LabeledMatrix& data, const TrainingOptions& options);

// -- inference -----------------------------------------------------------------

/// Applies the stored scaler, then the kind's decision rule.
/// Throws DimensionMismatch when X has the wrong width.
std::vector<Label> predict(const ClassifierModel& model, const Matrix& X);

/// Native score for the deceptive class: SVM margin, GNB posterior, k-NN and
/// forest vote fraction, tree leaf fraction, AdaBoost normalised vote,
/// logistic probability.
std::vector<double> decision_scores(const ClassifierModel& model, const Matrix& X);

// -- pieces exposed for verification ---------------------------------------

/// Output of the SMO dual solver on an already-scaled matrix.
struct SvmSolution {
  std::vector<double> alpha;
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  double gap = 0.0;  // final maximal-violating-pair gap
};

/// Soft-margin dual with a linear kernel, solved by SMO with second-order
/// working-set selection. `y` holds +1/-1.
SvmSolution solve_svm_dual(const Matrix& X, std::span<const int> y, double C, double tol,
                           std::size_t max_iterations);

/// Normalised log posteriors [deceptive, truthful] for one (unscaled) row.
std::array<double, 2> gnb_log_posteriors(const GnbParams& params, std::span<const double> x);

/// Training-row indices of the k nearest neighbours of `query`, nearest first;
/// equal distances resolve to the lower row index.
std::vector<std::size_t> knn_neighbours(const KnnParams& params, std::span<const double> query);

/// Mean negative log-likelihood plus (l2/2)|w|^2, with deceptive as target 1.
double logreg_loss(const Matrix& X, std::span<const Label> y, std::span<const double> w, double b, double l2);

/// Gradient of logreg_loss; the last element is d/db.
std::vector<double> logreg_gradient(const Matrix& X, std::span<const Label> y, std::span<const double> w, double b,
                                    double l2);

/// Fits the stump with the lowest weighted error; ties keep the lower feature,
/// then the lower threshold, then deceptive-on-the-left.
Stump fit_stump(const ColumnMatrix& X, std::span<const Label> y, std::span<const double> weights);

}  // namespace veritas
