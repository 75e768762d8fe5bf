#include "veritas/tree.hpp"

#include <algorithm>
#include <cmath>

#include "veritas/error.hpp"

namespace veritas {

std::string_view to_string(SplitCriterion c) noexcept { return c == SplitCriterion::gini ? "gini" : "entropy"; }

SplitCriterion split_criterion_from_string(std::string_view name) {
  if (name == "gini") return SplitCriterion::gini;
  if (name == "entropy") return SplitCriterion::entropy;
  throw Error(Errc::InvalidArgument, "unknown split criterion '" + std::string(name) + "'");
}

double impurity(SplitCriterion criterion, double deceptive_weight, double truthful_weight) noexcept {
  const double total = deceptive_weight + truthful_weight;
  if (total <= 0.0) return 0.0;
  const double p = deceptive_weight / total;
  const double q = truthful_weight / total;
  if (criterion == SplitCriterion::gini) return 1.0 - p * p - q * q;
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (q > 0.0) h -= q * std::log2(q);
  return h;
}

const TreeNode& DecisionTree::leaf_for(std::span<const double> x) const {
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const auto& n = nodes[at];
    at = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
  }
  return nodes[at];
}

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::size_t> level(nodes.size(), 0);
  std::size_t deepest = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    deepest = std::max(deepest, level[i]);
    if (!nodes[i].is_leaf()) {
      level[static_cast<std::size_t>(nodes[i].left)] = level[i] + 1;
      level[static_cast<std::size_t>(nodes[i].right)] = level[i] + 1;
    }
  }
  return deepest;
}

ColumnMatrix::ColumnMatrix(const Matrix& X) : rows_(X.rows()), cols_(X.cols()), data_(X.rows() * X.cols()) {
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto r = X.row(i);
    for (std::size_t j = 0; j < cols_; ++j) data_[j * rows_ + i] = r[j];
  }
}

namespace {

struct Candidate {
  double decrease = -1.0;
  std::size_t feature = 0;
  double threshold = 0.0;
  bool valid = false;
};

class TreeBuilder {
 public:
  TreeBuilder(const ColumnMatrix& X, std::span<const Label> y, std::span<const double> w, const TreeOptions& opt,
              std::size_t m_features, Xoshiro256ss& rng)
      : X_(X), y_(y), w_(w), opt_(opt), m_features_(m_features), rng_(rng) {
    order_.resize(X.cols());
    for (std::size_t j = 0; j < order_.size(); ++j) order_[j] = j;
  }

  DecisionTree build() {
    std::vector<std::uint32_t> idx;
    idx.reserve(X_.rows());
    for (std::size_t i = 0; i < X_.rows(); ++i) {
      if (w_[i] > 0.0) idx.push_back(static_cast<std::uint32_t>(i));
    }
    tree_.options = opt_;
    grow(idx, 0);
    return std::move(tree_);
  }

 private:
  std::int32_t grow(std::vector<std::uint32_t>& idx, std::size_t depth) {
    double wd = 0.0;
    double wt = 0.0;
    for (auto i : idx) (y_[i] == Label::deceptive ? wd : wt) += w_[i];

    const auto at = static_cast<std::int32_t>(tree_.nodes.size());
    TreeNode node;
    node.label = wd >= wt ? Label::deceptive : Label::truthful;
    node.deceptive_fraction = wd + wt > 0.0 ? wd / (wd + wt) : 0.0;
    tree_.nodes.push_back(node);

    const bool pure = wd == 0.0 || wt == 0.0;
    const bool capped = opt_.max_depth && depth >= *opt_.max_depth;
    if (pure || capped || idx.size() < opt_.min_samples_split) return at;

    const Candidate best = best_split(idx, wd, wt);
    if (!best.valid) return at;

    std::vector<std::uint32_t> left;
    std::vector<std::uint32_t> right;
    const auto col = X_.column(best.feature);
    for (auto i : idx) (col[i] <= best.threshold ? left : right).push_back(i);
    idx.clear();
    idx.shrink_to_fit();

    tree_.nodes[static_cast<std::size_t>(at)].feature = static_cast<std::int32_t>(best.feature);
    tree_.nodes[static_cast<std::size_t>(at)].threshold = best.threshold;
    const auto l = grow(left, depth + 1);
    tree_.nodes[static_cast<std::size_t>(at)].left = l;
    const auto r = grow(right, depth + 1);
    tree_.nodes[static_cast<std::size_t>(at)].right = r;
    return at;
  }

  Candidate best_split(const std::vector<std::uint32_t>& idx, double wd, double wt) {
    const double total = wd + wt;
    const double parent = impurity(opt_.criterion, wd, wt);
    Candidate best;

    auto consider = [&](std::size_t f) -> bool {
      // TF-IDF columns are mostly zero: sort only the non-zero values and
      // sweep the zeros as one block.
      const auto col = X_.column(f);
      entries_.clear();
      double zd = 0.0;
      double zt = 0.0;
      bool zeros = false;
      for (auto i : idx) {
        const double wi = w_[i];
        const bool dec_label = y_[i] == Label::deceptive;
        if (col[i] == 0.0) {
          zeros = true;
          (dec_label ? zd : zt) += wi;
        } else {
          entries_.push_back({col[i], dec_label ? wi : 0.0, dec_label ? 0.0 : wi});
        }
      }
      if (zeros) entries_.push_back({0.0, zd, zt});
      std::sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
      if (entries_.front().value == entries_.back().value) return false;

      double ld = 0.0;
      double lt = 0.0;
      for (std::size_t k = 0; k + 1 < entries_.size(); ++k) {
        ld += entries_[k].deceptive;
        lt += entries_[k].truthful;
        const double a = entries_[k].value;
        const double b = entries_[k + 1].value;
        if (!(a < b)) continue;
        double threshold = a + (b - a) / 2.0;
        if (threshold >= b) threshold = a;
        const double lw = ld + lt;
        const double rw = total - lw;
        const double dec = parent - (lw / total) * impurity(opt_.criterion, ld, lt) -
                           (rw / total) * impurity(opt_.criterion, wd - ld, wt - lt);
        if (!best.valid || dec > best.decrease || (dec == best.decrease && f < best.feature)) {
          best = {dec, f, threshold, true};
        }
      }
      return true;
    };

    const std::size_t d = X_.cols();
    if (m_features_ >= d) {
      for (std::size_t f = 0; f < d; ++f) consider(f);
      return best;
    }
    // Lazy Fisher-Yates over the feature order; constant features are free.
    std::size_t scored = 0;
    for (std::size_t k = 0; k < d && scored < m_features_; ++k) {
      const std::size_t pick = k + static_cast<std::size_t>(rng_.bounded(d - k));
      std::swap(order_[k], order_[pick]);
      if (consider(order_[k])) ++scored;
    }
    return best;
  }

  const ColumnMatrix& X_;
  std::span<const Label> y_;
  std::span<const double> w_;
  const TreeOptions& opt_;
  std::size_t m_features_;
  Xoshiro256ss& rng_;
  DecisionTree tree_;
  std::vector<std::size_t> order_;
  struct Entry {
    double value;
    double deceptive;
    double truthful;
  };
  std::vector<Entry> entries_;
};

}  // namespace

DecisionTree grow_tree(const ColumnMatrix& X, std::span<const Label> y, std::span<const double> weights,
                       const TreeOptions& options, std::size_t m_features, Xoshiro256ss& rng) {
  if (y.size() != X.rows() || weights.size() != X.rows()) {
    throw Error(Errc::LengthMismatch, "tree inputs disagree on the number of rows");
  }
  if (options.max_depth && *options.max_depth < 1) throw Error(Errc::InvalidArgument, "max_depth must be >= 1");
  if (m_features < 1) throw Error(Errc::InvalidArgument, "m_features must be >= 1");
  if (std::none_of(weights.begin(), weights.end(), [](double w) { return w > 0.0; })) {
    throw Error(Errc::InvalidArgument, "all sample weights are zero");
  }
  return TreeBuilder(X, y, weights, options, m_features, rng).build();
}

}  // namespace veritas
