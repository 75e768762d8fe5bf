#include <algorithm>
#include <cmath>
#include <numbers>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"

namespace veritas {

ClassifierModel fit_gnb(const LabeledMatrix& data, const GnbOptions& options) {
  data.validate_for_training();
  if (!(options.var_smoothing > 0.0)) throw Error(Errc::InvalidArgument, "var_smoothing must be > 0");

  const std::size_t n = data.X.rows();
  const std::size_t d = data.X.cols();
  GnbParams p;
  p.var_smoothing = options.var_smoothing;
  std::array<double, 2> count{};
  for (std::size_t c = 0; c < 2; ++c) {
    p.mean[c].assign(d, 0.0);
    p.variance[c].assign(d, 0.0);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = index_of(data.y[i]);
    count[c] += 1.0;
    const auto r = data.X.row(i);
    for (std::size_t j = 0; j < d; ++j) p.mean[c][j] += r[j];
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (auto& m : p.mean[c]) m /= count[c];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = index_of(data.y[i]);
    const auto r = data.X.row(i);
    for (std::size_t j = 0; j < d; ++j) {
      const double dv = r[j] - p.mean[c][j];
      p.variance[c][j] += dv * dv;
    }
  }
  for (std::size_t c = 0; c < 2; ++c) {
    for (auto& v : p.variance[c]) v /= count[c];
  }

  // Floor relative to the largest overall feature variance.
  double max_var = 0.0;
  for (std::size_t j = 0; j < d; ++j) {
    double mu = 0.0;
    for (std::size_t i = 0; i < n; ++i) mu += data.X(i, j);
    mu /= static_cast<double>(n);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dv = data.X(i, j) - mu;
      s += dv * dv;
    }
    max_var = std::max(max_var, s / static_cast<double>(n));
  }
  p.epsilon = options.var_smoothing * (max_var > 0.0 ? max_var : 1.0);
  for (std::size_t c = 0; c < 2; ++c) {
    for (auto& v : p.variance[c]) v = std::max(v, p.epsilon);
    p.log_prior[c] = std::log(count[c] / static_cast<double>(n));
  }

  ClassifierModel m;
  m.kind = ClassifierKind::gnb;
  m.feature_dim = d;
  m.params = std::move(p);
  return m;
}

std::array<double, 2> gnb_log_posteriors(const GnbParams& p, std::span<const double> x) {
  std::array<double, 2> joint{};
  for (std::size_t c = 0; c < 2; ++c) {
    double s = p.log_prior[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double var = p.variance[c][j];
      const double dv = x[j] - p.mean[c][j];
      s += -0.5 * std::log(2.0 * std::numbers::pi * var) - dv * dv / (2.0 * var);
    }
    joint[c] = s;
  }
  const double hi = std::max(joint[0], joint[1]);
  const double lse = hi + std::log(std::exp(joint[0] - hi) + std::exp(joint[1] - hi));
  return {joint[0] - lse, joint[1] - lse};
}

}  // namespace veritas
