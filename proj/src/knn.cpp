#include <algorithm>
#include <numeric>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"

namespace veritas {

ClassifierModel fit_knn(const LabeledMatrix& data, const KnnOptions& options) {
  data.validate_for_training();
  if (options.k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");
  if (options.k > data.X.rows()) {
    throw Error(Errc::KTooLarge, "k=" + std::to_string(options.k) + " exceeds " + std::to_string(data.X.rows()) +
                                     " training rows");
  }
  Scaler scaler = Scaler::fit(data.X);
  KnnParams p;
  p.train = scaler.apply(data.X);
  p.labels = data.y;
  p.k = options.k;

  ClassifierModel m;
  m.kind = ClassifierKind::knn;
  m.feature_dim = data.X.cols();
  m.scaler = std::move(scaler);
  m.params = std::move(p);
  return m;
}

std::vector<std::size_t> knn_neighbours(const KnnParams& p, std::span<const double> query) {
  const std::size_t n = p.train.rows();
  if (p.k < 1 || p.k > n) throw Error(Errc::KTooLarge, "k=" + std::to_string(p.k) + " with " + std::to_string(n) + " rows");
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = p.train.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) {
      const double dv = r[j] - query[j];
      s += dv * dv;
    }
    dist[i] = {s, i};
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(p.k), dist.end());
  std::vector<std::size_t> out(p.k);
  for (std::size_t i = 0; i < p.k; ++i) out[i] = dist[i].second;
  return out;
}

}  // namespace veritas
