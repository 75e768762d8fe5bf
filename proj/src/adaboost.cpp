#include <algorithm>
#include <cmath>
#include <numeric>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"

namespace veritas {

namespace {

// Sorts every column once; each boosting round only re-weights.
class StumpSearch {
 public:
  explicit StumpSearch(const ColumnMatrix& X) : X_(X), order_(X.cols()) {
    for (std::size_t f = 0; f < X.cols(); ++f) {
      auto& o = order_[f];
      o.resize(X.rows());
      std::iota(o.begin(), o.end(), 0u);
      const auto col = X.column(f);
      std::stable_sort(o.begin(), o.end(), [&](std::uint32_t a, std::uint32_t b) { return col[a] < col[b]; });
    }
  }

  Stump fit(std::span<const Label> y, std::span<const double> w) const {
    double wd = 0.0;
    double wt = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) (y[i] == Label::deceptive ? wd : wt) += w[i];

    Stump best;
    double best_err = std::numeric_limits<double>::infinity();
    bool have_split = false;
    for (std::size_t f = 0; f < X_.cols(); ++f) {
      const auto col = X_.column(f);
      const auto& o = order_[f];
      double ld = 0.0;
      double lt = 0.0;
      for (std::size_t k = 0; k + 1 < o.size(); ++k) {
        (y[o[k]] == Label::deceptive ? ld : lt) += w[o[k]];
        const double a = col[o[k]];
        const double b = col[o[k + 1]];
        if (!(a < b)) continue;
        double threshold = a + (b - a) / 2.0;
        if (threshold >= b) threshold = a;
        const double err_dl = lt + (wd - ld);  // deceptive on the left
        const double err_tl = ld + (wt - lt);
        if (err_dl < best_err) {
          best_err = err_dl;
          best = {static_cast<std::int32_t>(f), threshold, Label::deceptive, Label::truthful};
          have_split = true;
        }
        if (err_tl < best_err) {
          best_err = err_tl;
          best = {static_cast<std::int32_t>(f), threshold, Label::truthful, Label::deceptive};
          have_split = true;
        }
      }
    }
    // A constant prediction only wins when it is strictly better.
    const double const_err = std::min(wd, wt);
    if (!have_split || const_err < best_err) {
      const Label l = wd >= wt ? Label::deceptive : Label::truthful;
      best = {-1, 0.0, l, l};
    }
    return best;
  }

 private:
  const ColumnMatrix& X_;
  std::vector<std::vector<std::uint32_t>> order_;
};

}  // namespace

Stump fit_stump(const ColumnMatrix& X, std::span<const Label> y, std::span<const double> weights) {
  if (y.size() != X.rows() || weights.size() != X.rows()) {
    throw Error(Errc::LengthMismatch, "stump inputs disagree on the number of rows");
  }
  return StumpSearch(X).fit(y, weights);
}

ClassifierModel fit_adaboost(const LabeledMatrix& data, const AdaBoostOptions& options) {
  data.validate_for_training();
  if (options.n_rounds < 1) throw Error(Errc::InvalidArgument, "n_rounds must be >= 1");

  const std::size_t n = data.X.rows();
  const ColumnMatrix cols(data.X);
  const StumpSearch search(cols);
  std::vector<double> w(n, 1.0 / static_cast<double>(n));

  AdaBoostParams p;
  p.n_rounds = options.n_rounds;
  p.stop_reason = "rounds";
  for (std::size_t round = 0; round < options.n_rounds; ++round) {
    const Stump stump = search.fit(data.y, w);
    std::vector<int> agree(n);
    double err = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool ok = stump.predict(data.X.row(i)) == data.y[i];
      agree[i] = ok ? 1 : -1;
      if (!ok) err += w[i];
      total += w[i];
    }
    err /= total;
    if (err >= 0.5) {
      p.stop_reason = "weak";
      break;
    }
    const double clamped = std::clamp(err, 1e-10, 1.0 - 1e-10);
    const double alpha = 0.5 * std::log((1.0 - clamped) / clamped);
    p.stumps.push_back(stump);
    p.alphas.push_back(alpha);
    p.errors.push_back(err);
    if (err == 0.0) {
      p.stop_reason = "perfect";
      break;
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] *= std::exp(-alpha * agree[i]);
      norm += w[i];
    }
    for (auto& wi : w) wi /= norm;
  }

  ClassifierModel m;
  m.kind = ClassifierKind::adaboost;
  m.feature_dim = data.X.cols();
  m.params = std::move(p);
  return m;
}

}  // namespace veritas
