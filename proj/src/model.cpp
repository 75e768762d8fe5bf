#include <cmath>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"

namespace veritas {

std::string_view to_string(ClassifierKind kind) noexcept {
  switch (kind) {
    case ClassifierKind::svm: return "svm";
    case ClassifierKind::gnb: return "gnb";
    case ClassifierKind::knn: return "knn";
    case ClassifierKind::dtree: return "dtree";
    case ClassifierKind::rforest: return "rforest";
    case ClassifierKind::bagging: return "bagging";
    case ClassifierKind::adaboost: return "adaboost";
    case ClassifierKind::logreg: return "logreg";
  }
  return "svm";
}

ClassifierKind classifier_kind_from_string(std::string_view name) {
  static constexpr std::pair<std::string_view, ClassifierKind> kNames[] = {
      {"svm", ClassifierKind::svm},          {"gnb", ClassifierKind::gnb},
      {"nb", ClassifierKind::gnb},           {"knn", ClassifierKind::knn},
      {"dtree", ClassifierKind::dtree},      {"tree", ClassifierKind::dtree},
      {"rforest", ClassifierKind::rforest},  {"rf", ClassifierKind::rforest},
      {"bagging", ClassifierKind::bagging},  {"adaboost", ClassifierKind::adaboost},
      {"ada", ClassifierKind::adaboost},     {"logreg", ClassifierKind::logreg},
      {"lr", ClassifierKind::logreg},
  };
  for (const auto& [n, k] : kNames) {
    if (n == name) return k;
  }
  throw Error(Errc::UnknownClassifier, "unknown classifier '" + std::string(name) + "'");
}

std::vector<ClassifierKind> reference_classifiers() {
  return {ClassifierKind::svm,      ClassifierKind::rforest, ClassifierKind::bagging,
          ClassifierKind::adaboost, ClassifierKind::gnb,     ClassifierKind::knn};
}

ClassifierModel fit(ClassifierKind kind, const LabeledMatrix& data, const TrainingOptions& o) {
  switch (kind) {
    case ClassifierKind::svm: return fit_svm(data, o.svm);
    case ClassifierKind::gnb: return fit_gnb(data, o.gnb);
    case ClassifierKind::knn: return fit_knn(data, o.knn);
    case ClassifierKind::dtree: return fit_dtree(data, o.dtree, o.seed);
    case ClassifierKind::rforest: return fit_rforest(data, o.rforest, o.seed);
    case ClassifierKind::bagging: return fit_bagging(data, o.bagging, o.seed);
    case ClassifierKind::adaboost: return fit_adaboost(data, o.adaboost);
    case ClassifierKind::logreg: return fit_logreg(data, o.logreg);
  }
  throw Error(Errc::Internal, "unhandled classifier kind");
}

namespace {

struct Decision {
  Label label;
  double score;
};

double vote_fraction(const std::vector<DecisionTree>& trees, std::span<const double> x) {
  std::size_t deceptive = 0;
  for (const auto& t : trees) deceptive += t.predict(x) == Label::deceptive ? 1 : 0;
  return static_cast<double>(deceptive) / static_cast<double>(trees.size());
}

Decision decide(const ClassifierModel& m, std::span<const double> x) {
  return std::visit(
      [&](const auto& p) -> Decision {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SvmParams>) {
          const double f = dot(p.weights, x) + p.bias;
          return {label_from_sign(f), f};
        } else if constexpr (std::is_same_v<P, GnbParams>) {
          const auto lp = gnb_log_posteriors(p, x);
          return {lp[0] >= lp[1] ? Label::deceptive : Label::truthful, std::exp(lp[0])};
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          const auto nn = knn_neighbours(p, x);
          std::size_t deceptive = 0;
          for (auto i : nn) deceptive += p.labels[i] == Label::deceptive ? 1 : 0;
          const std::size_t truthful = nn.size() - deceptive;
          Label l = deceptive > truthful ? Label::deceptive : Label::truthful;
          if (deceptive == truthful) l = p.labels[nn.front()];
          return {l, static_cast<double>(deceptive) / static_cast<double>(nn.size())};
        } else if constexpr (std::is_same_v<P, DecisionTree>) {
          const auto& leaf = p.leaf_for(x);
          return {leaf.label, leaf.deceptive_fraction};
        } else if constexpr (std::is_same_v<P, ForestParams>) {
          const double frac = vote_fraction(p.trees, x);
          // a 50/50 vote goes to deceptive
          return {frac * 2.0 >= 1.0 ? Label::deceptive : Label::truthful, frac};
        } else if constexpr (std::is_same_v<P, AdaBoostParams>) {
          double s = 0.0;
          double total = 0.0;
          for (std::size_t t = 0; t < p.stumps.size(); ++t) {
            s += p.alphas[t] * sign_of(p.stumps[t].predict(x));
            total += p.alphas[t];
          }
          return {label_from_sign(s), total > 0.0 ? s / total : 0.0};
        } else {
          const double z = dot(p.weights, x) + p.bias;
          const double prob = z >= 0.0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
          return {z >= 0.0 ? Label::deceptive : Label::truthful, prob};
        }
      },
      m.params);
}

template <class Fn>
void for_each_row(const ClassifierModel& model, const Matrix& X, Fn&& fn) {
  if (X.cols() != model.feature_dim) {
    throw Error(Errc::DimensionMismatch, "model expects " + std::to_string(model.feature_dim) + " features, got " +
                                             std::to_string(X.cols()));
  }
  std::vector<double> buf(X.cols());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto r = X.row(i);
    std::copy(r.begin(), r.end(), buf.begin());
    if (model.scaler) model.scaler->apply_inplace(buf);
    fn(i, decide(model, buf));
  }
}

}  // namespace

std::vector<Label> predict(const ClassifierModel& model, const Matrix& X) {
  std::vector<Label> out(X.rows());
  for_each_row(model, X, [&](std::size_t i, const Decision& d) { out[i] = d.label; });
  return out;
}

std::vector<double> decision_scores(const ClassifierModel& model, const Matrix& X) {
  std::vector<double> out(X.rows());
  for_each_row(model, X, [&](std::size_t i, const Decision& d) { out[i] = d.score; });
  return out;
}

}  // namespace veritas
