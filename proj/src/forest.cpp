#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "veritas/classifiers.hpp"
#include "veritas/error.hpp"
#include "veritas/rng.hpp"

namespace veritas {

ClassifierModel fit_dtree(const LabeledMatrix& data, const TreeOptions& options, std::uint64_t seed) {
  data.validate_for_training();
  const ColumnMatrix cols(data.X);
  const std::vector<double> weights(data.X.rows(), 1.0);
  Xoshiro256ss rng(seed);

  ClassifierModel m;
  m.kind = ClassifierKind::dtree;
  m.feature_dim = data.X.cols();
  m.params = grow_tree(cols, data.y, weights, options, data.X.cols(), rng);
  return m;
}

namespace {

// Trees are independent given their derived seeds, so they can be grown on
// any number of threads without changing the result.
ForestParams grow_forest(const LabeledMatrix& data, const ForestOptions& options, std::size_t m_features,
                         std::uint64_t seed) {
  const std::size_t n = data.X.rows();
  const ColumnMatrix cols(data.X);

  ForestParams p;
  p.m_features = m_features;
  p.bootstrap = options.bootstrap;
  p.trees.resize(options.n_trees);
  p.seeds.resize(options.n_trees);
  for (std::size_t t = 0; t < options.n_trees; ++t) p.seeds[t] = derive_seed(seed, t);

  auto grow_one = [&](std::size_t t) {
    Xoshiro256ss rng(p.seeds[t]);
    std::vector<double> weights(n, options.bootstrap ? 0.0 : 1.0);
    if (options.bootstrap) {
      for (std::size_t k = 0; k < n; ++k) weights[static_cast<std::size_t>(rng.bounded(n))] += 1.0;
    }
    p.trees[t] = grow_tree(cols, data.y, weights, options.tree, m_features, rng);
  };

  const std::size_t wanted = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  const std::size_t workers = std::min<std::size_t>(options.n_trees, wanted);
  if (workers <= 1) {
    for (std::size_t t = 0; t < options.n_trees; ++t) grow_one(t);
    return p;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < options.n_trees;) {
          try {
            grow_one(t);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return p;
}

void check_forest_options(const ForestOptions& options) {
  if (options.n_trees < 1) throw Error(Errc::InvalidArgument, "n_trees must be >= 1");
}

}  // namespace

ClassifierModel fit_rforest(const LabeledMatrix& data, const ForestOptions& options, std::uint64_t seed) {
  data.validate_for_training();
  check_forest_options(options);
  const std::size_t d = data.X.cols();
  const std::size_t m_features =
      options.m_features.value_or(static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(d)))));
  if (m_features < 1 || m_features > d) {
    throw Error(Errc::InvalidArgument, "m_features must lie in [1, " + std::to_string(d) + "]");
  }
  ClassifierModel m;
  m.kind = ClassifierKind::rforest;
  m.feature_dim = d;
  m.params = grow_forest(data, options, m_features, seed);
  return m;
}

ClassifierModel fit_bagging(const LabeledMatrix& data, const ForestOptions& options, std::uint64_t seed) {
  data.validate_for_training();
  check_forest_options(options);
  ClassifierModel m;
  m.kind = ClassifierKind::bagging;
  m.feature_dim = data.X.cols();
  m.params = grow_forest(data, options, data.X.cols(), seed);
  return m;
}

}  // namespace veritas
