#include <algorithm>
#include <cmath>
#include <limits>
#include <list>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"

namespace veritas {

namespace {

constexpr double kTau = 1e-12;
constexpr std::size_t kCacheBytes = std::size_t{256} << 20;

// LRU cache of linear-kernel rows K(i, .). Holds at least two rows so the
// row fetched for i stays valid while j is fetched.
class KernelRows {
 public:
  explicit KernelRows(const Matrix& X) : X_(X), slot_of_(X.rows(), kNone) {
    const std::size_t row_bytes = std::max<std::size_t>(1, X.rows() * sizeof(double));
    capacity_ = std::clamp<std::size_t>(kCacheBytes / row_bytes, 2, std::max<std::size_t>(2, X.rows()));
    diag_.resize(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) diag_[i] = dot(X.row(i), X.row(i));
  }

  double diag(std::size_t i) const noexcept { return diag_[i]; }

  std::span<const double> row(std::size_t i) {
    if (slot_of_[i] != kNone) {
      lru_.splice(lru_.begin(), lru_, where_[slot_of_[i]]);
      return storage_[slot_of_[i]];
    }
    std::size_t slot;
    if (storage_.size() < capacity_) {
      slot = storage_.size();
      storage_.emplace_back(X_.rows());
      where_.push_back(lru_.end());
      owner_.push_back(kNone);
    } else {
      slot = lru_.back();
      lru_.pop_back();
      slot_of_[owner_[slot]] = kNone;
    }
    auto& r = storage_[slot];
    const auto xi = X_.row(i);
    for (std::size_t t = 0; t < X_.rows(); ++t) r[t] = t == i ? diag_[i] : dot(xi, X_.row(t));
    lru_.push_front(slot);
    where_[slot] = lru_.begin();
    owner_[slot] = i;
    slot_of_[i] = slot;
    return r;
  }

 private:
  static constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  const Matrix& X_;
  std::size_t capacity_;
  std::vector<double> diag_;
  std::vector<std::vector<double>> storage_;
  std::list<std::size_t> lru_;
  std::vector<std::list<std::size_t>::iterator> where_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> slot_of_;
};

}  // namespace

SvmSolution solve_svm_dual(const Matrix& X, std::span<const int> y, double C, double tol,
                           std::size_t max_iterations) {
  const std::size_t n = X.rows();
  if (y.size() != n) throw Error(Errc::LengthMismatch, "label count differs from row count");
  if (!(C > 0.0)) throw Error(Errc::InvalidArgument, "C must be > 0");
  if (!(tol > 0.0)) throw Error(Errc::InvalidArgument, "tol must be > 0");

  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);  // gradient of 1/2 a'Qa - e'a
  KernelRows K(X);

  auto in_up = [&](std::size_t t) { return y[t] > 0 ? alpha[t] < C : alpha[t] > 0.0; };
  auto in_low = [&](std::size_t t) { return y[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C; };

  SvmSolution sol;
  double gap = std::numeric_limits<double>::infinity();
  std::size_t iter = 0;
  for (; iter < max_iterations; ++iter) {
    // i: maximal violator in I_up
    double gmax = -std::numeric_limits<double>::infinity();
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_up(t)) continue;
      const double v = -y[t] * G[t];
      if (v > gmax) {
        gmax = v;
        i = t;
      }
    }
    if (i == n) {
      gap = 0.0;
      break;
    }
    const auto Ki = K.row(i);

    // j: second-order choice in I_low
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::size_t j = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (!in_low(t)) continue;
      const double v = y[t] * G[t];
      gmax2 = std::max(gmax2, v);
      const double grad_diff = gmax + v;
      if (grad_diff > 0.0) {
        double quad = K.diag(i) + K.diag(t) - 2.0 * Ki[t];
        if (quad <= 0.0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj < best_obj) {
          best_obj = obj;
          j = t;
        }
      }
    }
    gap = gmax + gmax2;
    if (gap < tol || j == n) break;

    const auto Kj = K.row(j);
    const auto Ki2 = K.row(i);  // may have been re-fetched by the cache
    const double Kij = Ki2[j];
    double quad = K.diag(i) + K.diag(j) - 2.0 * Kij;
    if (quad <= 0.0) quad = kTau;
    const double old_i = alpha[i];
    const double old_j = alpha[j];

    if (y[i] != y[j]) {
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0.0) {
        if (alpha[j] < 0.0) {
          alpha[j] = 0.0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0.0) {
        alpha[j] = 0.0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0.0) {
        alpha[i] = 0.0;
        alpha[j] = sum;
      }
    }

    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) {
      G[t] += y[t] * (y[i] * Ki2[t] * di + y[j] * Kj[t] * dj);
    }
  }

  // Offset: average over free vectors, else the midpoint of the feasible range.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (alpha[t] >= C) {
      if (y[t] < 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (alpha[t] <= 0.0) {
      if (y[t] > 0) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  double rho;
  if (n_free > 0) {
    rho = sum_free / static_cast<double>(n_free);
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    rho = (ub + lb) / 2.0;
  } else {
    rho = std::isfinite(ub) ? ub : lb;
  }

  sol.weights.assign(X.cols(), 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (alpha[t] == 0.0) continue;
    const double c = alpha[t] * y[t];
    const auto xt = X.row(t);
    for (std::size_t k = 0; k < X.cols(); ++k) sol.weights[k] += c * xt[k];
  }
  sol.bias = -rho;
  sol.alpha = std::move(alpha);
  sol.iterations = iter;
  sol.gap = gap;
  sol.converged = gap < tol;
  return sol;
}

ClassifierModel fit_svm(const LabeledMatrix& data, const SvmOptions& options) {
  data.validate_for_training();
  if (options.max_passes < 1) throw Error(Errc::InvalidArgument, "max_passes must be >= 1");

  Scaler scaler = Scaler::fit(data.X);
  const Matrix Xs = scaler.apply(data.X);
  std::vector<int> y(data.y.size());
  std::transform(data.y.begin(), data.y.end(), y.begin(), sign_of);

  auto sol = solve_svm_dual(Xs, y, options.C, options.tol, options.max_passes * Xs.rows());

  SvmParams p;
  p.weights = std::move(sol.weights);
  p.bias = sol.bias;
  p.options = options;
  p.iterations = sol.iterations;
  p.converged = sol.converged;
  p.support_vectors = static_cast<std::size_t>(
      std::count_if(sol.alpha.begin(), sol.alpha.end(), [](double a) { return a > 0.0; }));

  ClassifierModel m;
  m.kind = ClassifierKind::svm;
  m.feature_dim = data.X.cols();
  m.scaler = std::move(scaler);
  m.params = std::move(p);
  return m;
}

}  // namespace veritas
