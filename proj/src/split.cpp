#include <algorithm>
#include <cmath>
#include <numeric>

#include "veritas/corpus.hpp"
#include "veritas/error.hpp"
#include "veritas/hash.hpp"
#include "veritas/rng.hpp"

namespace veritas {

namespace {

std::size_t test_size(std::size_t n, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw Error(Errc::InvalidArgument, "split ratio must lie in (0, 1), got " + std::to_string(ratio));
  }
  const auto t = static_cast<std::size_t>(std::floor((1.0 - ratio) * static_cast<double>(n) + 0.5));
  if (t == 0 || t >= n) {
    throw Error(Errc::DegenerateSplit, "ratio " + std::to_string(ratio) + " over " + std::to_string(n) +
                                           " reviews leaves one side empty");
  }
  return t;
}

SplitIndex collect(const ReviewSet& set, const std::vector<bool>& in_test, double ratio, std::uint64_t seed,
                   bool stratified) {
  SplitIndex split;
  split.seed = seed;
  split.ratio = ratio;
  split.stratified = stratified;
  for (std::size_t i = 0; i < set.size(); ++i) {
    (in_test[i] ? split.test_ids : split.train_ids).push_back(set[i].id);
  }
  return split;
}

}  // namespace

std::string SplitIndex::fingerprint() const {
  Fnv1a64 h;
  h.update_u64(seed).update_f64(ratio).update_u64(stratified ? 1 : 0);
  h.update_u64(train_ids.size());
  for (const auto& id : train_ids) h.update(id).update_u64(id.size());
  h.update_u64(test_ids.size());
  for (const auto& id : test_ids) h.update(id).update_u64(id.size());
  return h.hex();
}

SplitIndex stratified_split(const ReviewSet& set, double ratio, std::uint64_t seed) {
  const std::size_t total_test = test_size(set.size(), ratio);

  std::array<std::vector<std::size_t>, 2> members;
  for (std::size_t i = 0; i < set.size(); ++i) members[index_of(set[i].label)].push_back(i);
  for (Label l : kLabels) {
    if (members[index_of(l)].empty()) {
      throw Error(Errc::DegenerateSplit, "no " + std::string(to_string(l)) + " reviews to stratify");
    }
  }

  // Largest-remainder apportionment of the test size across labels.
  std::array<std::size_t, 2> take{};
  std::array<double, 2> frac{};
  std::size_t assigned = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    const double exact = (1.0 - ratio) * static_cast<double>(members[c].size());
    take[c] = static_cast<std::size_t>(std::floor(exact));
    frac[c] = exact - std::floor(exact);
    assigned += take[c];
  }
  std::array<std::size_t, 2> order{0, 1};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (std::size_t k = 0; assigned < total_test; k = (k + 1) % 2) {
    const std::size_t c = order[k];
    if (take[c] < members[c].size()) {
      ++take[c];
      ++assigned;
    }
  }

  Xoshiro256ss rng(seed);
  std::vector<bool> in_test(set.size(), false);
  for (std::size_t c = 0; c < 2; ++c) {
    rng.shuffle(std::span<std::size_t>(members[c]));
    for (std::size_t k = 0; k < take[c]; ++k) in_test[members[c][k]] = true;
  }
  return collect(set, in_test, ratio, seed, true);
}

SplitIndex shuffled_split(const ReviewSet& set, double ratio, std::uint64_t seed) {
  const std::size_t total_test = test_size(set.size(), ratio);
  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256ss rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  std::vector<bool> in_test(set.size(), false);
  for (std::size_t k = 0; k < total_test; ++k) in_test[order[k]] = true;
  return collect(set, in_test, ratio, seed, false);
}

}  // namespace veritas
