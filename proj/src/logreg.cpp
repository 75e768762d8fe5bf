#include <algorithm>
#include <cmath>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"

namespace veritas {

namespace {

double softplus(double x) noexcept { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double target(Label l) noexcept { return l == Label::deceptive ? 1.0 : 0.0; }

}  // namespace

double logreg_loss(const Matrix& X, std::span<const Label> y, std::span<const double> w, double b, double l2) {
  double s = 0.0;
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const double z = dot(X.row(i), w) + b;
    s += y[i] == Label::deceptive ? softplus(-z) : softplus(z);
  }
  return s / static_cast<double>(X.rows()) + 0.5 * l2 * dot(w, w);
}

std::vector<double> logreg_gradient(const Matrix& X, std::span<const Label> y, std::span<const double> w, double b,
                                    double l2) {
  const std::size_t d = X.cols();
  std::vector<double> g(d + 1, 0.0);
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto r = X.row(i);
    const double resid = sigmoid(dot(r, w) + b) - target(y[i]);
    for (std::size_t j = 0; j < d; ++j) g[j] += resid * r[j];
    g[d] += resid;
  }
  const double inv_n = 1.0 / static_cast<double>(X.rows());
  for (std::size_t j = 0; j < d; ++j) g[j] = g[j] * inv_n + l2 * w[j];
  g[d] *= inv_n;
  return g;
}

ClassifierModel fit_logreg(const LabeledMatrix& data, const LogRegOptions& options) {
  data.validate_for_training();
  if (!(options.learning_rate > 0.0)) throw Error(Errc::InvalidArgument, "learning_rate must be > 0");
  if (options.n_iters < 1) throw Error(Errc::InvalidArgument, "n_iters must be >= 1");
  if (options.l2 < 0.0) throw Error(Errc::InvalidArgument, "l2 must be >= 0");

  Scaler scaler = Scaler::fit(data.X);
  const Matrix Xs = scaler.apply(data.X);
  const std::size_t d = Xs.cols();

  std::vector<double> w(d, 0.0);
  double b = 0.0;
  for (std::size_t iter = 0; iter < options.n_iters; ++iter) {
    const auto g = logreg_gradient(Xs, data.y, w, b, options.l2);
    for (std::size_t j = 0; j < d; ++j) w[j] -= options.learning_rate * g[j];
    b -= options.learning_rate * g[d];
    if (!std::isfinite(b) || !std::isfinite(dot(w, w))) {
      throw Error(Errc::NonFiniteLoss, "parameters diverged at iteration " + std::to_string(iter + 1));
    }
  }
  const double loss = logreg_loss(Xs, data.y, w, b, options.l2);
  if (!std::isfinite(loss)) throw Error(Errc::NonFiniteLoss, "loss is not finite after " + std::to_string(options.n_iters) + " iterations");

  LogRegParams p;
  p.weights = std::move(w);
  p.bias = b;
  p.options = options;
  p.final_loss = loss;

  ClassifierModel m;
  m.kind = ClassifierKind::logreg;
  m.feature_dim = d;
  m.scaler = std::move(scaler);
  m.params = std::move(p);
  return m;
}

}  // namespace veritas
