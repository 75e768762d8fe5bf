#include "veritas/model_io.hpp"

#include "veritas/error.hpp"

namespace veritas {

using nlohmann::json;

namespace {

json labels_to_json(const std::vector<Label>& labels) {
  json a = json::array();
  for (Label l : labels) a.push_back(index_of(l));
  return a;
}

std::vector<Label> labels_from_json(const json& a) {
  std::vector<Label> out;
  out.reserve(a.size());
  for (const auto& v : a) {
    const auto i = v.get<int>();
    if (i != 0 && i != 1) throw Error(Errc::CorruptBundle, "label index out of range");
    out.push_back(static_cast<Label>(i));
  }
  return out;
}

Label label_from_json(const json& v) { return labels_from_json(json::array({v})).front(); }

json tree_options_to_json(const TreeOptions& o) {
  return {{"criterion", to_string(o.criterion)},
          {"max_depth", o.max_depth ? json(*o.max_depth) : json(nullptr)},
          {"min_samples_split", o.min_samples_split}};
}

TreeOptions tree_options_from_json(const json& j) {
  TreeOptions o;
  o.criterion = split_criterion_from_string(j.at("criterion").get<std::string>());
  if (!j.at("max_depth").is_null()) o.max_depth = j.at("max_depth").get<std::size_t>();
  o.min_samples_split = j.at("min_samples_split").get<std::size_t>();
  return o;
}

json tree_to_json(const DecisionTree& t) {
  json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
       label = json::array(), fraction = json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    label.push_back(index_of(n.label));
    fraction.push_back(n.deceptive_fraction);
  }
  return {{"options", tree_options_to_json(t.options)},
          {"feature", feature},
          {"threshold", threshold},
          {"left", left},
          {"right", right},
          {"label", label},
          {"deceptive_fraction", fraction}};
}

DecisionTree tree_from_json(const json& j) {
  DecisionTree t;
  t.options = tree_options_from_json(j.at("options"));
  const auto& feature = j.at("feature");
  const std::size_t n = feature.size();
  const auto labels = labels_from_json(j.at("label"));
  if (j.at("threshold").size() != n || j.at("left").size() != n || j.at("right").size() != n ||
      labels.size() != n || j.at("deceptive_fraction").size() != n || n == 0) {
    throw Error(Errc::CorruptBundle, "tree arrays have inconsistent lengths");
  }
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = t.nodes[i];
    node.feature = feature[i].get<std::int32_t>();
    node.threshold = j.at("threshold")[i].get<double>();
    node.left = j.at("left")[i].get<std::int32_t>();
    node.right = j.at("right")[i].get<std::int32_t>();
    node.label = labels[i];
    node.deceptive_fraction = j.at("deceptive_fraction")[i].get<double>();
    if (!node.is_leaf()) {
      const auto in_range = [&](std::int32_t c) { return c > static_cast<std::int32_t>(i) && c < static_cast<std::int32_t>(n); };
      if (!in_range(node.left) || !in_range(node.right)) throw Error(Errc::CorruptBundle, "tree child index out of range");
    }
  }
  return t;
}

json matrix_to_json(const Matrix& m) { return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}}; }

Matrix matrix_from_json(const json& j) {
  return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                j.at("data").get<std::vector<double>>());
}

json params_to_json(const ModelParams& params) {
  return std::visit(
      [](const auto& p) -> json {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SvmParams>) {
          return {{"weights", p.weights},
                  {"bias", p.bias},
                  {"C", p.options.C},
                  {"tol", p.options.tol},
                  {"max_passes", p.options.max_passes},
                  {"iterations", p.iterations},
                  {"converged", p.converged},
                  {"support_vectors", p.support_vectors}};
        } else if constexpr (std::is_same_v<P, GnbParams>) {
          return {{"log_prior", p.log_prior},
                  {"mean", p.mean},
                  {"variance", p.variance},
                  {"var_smoothing", p.var_smoothing},
                  {"epsilon", p.epsilon}};
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          return {{"train", matrix_to_json(p.train)}, {"labels", labels_to_json(p.labels)}, {"k", p.k}};
        } else if constexpr (std::is_same_v<P, DecisionTree>) {
          return tree_to_json(p);
        } else if constexpr (std::is_same_v<P, ForestParams>) {
          json trees = json::array();
          for (const auto& t : p.trees) trees.push_back(tree_to_json(t));
          return {{"trees", trees}, {"seeds", p.seeds}, {"m_features", p.m_features}, {"bootstrap", p.bootstrap}};
        } else if constexpr (std::is_same_v<P, AdaBoostParams>) {
          json stumps = json::array();
          for (const auto& s : p.stumps) {
            stumps.push_back({{"feature", s.feature},
                              {"threshold", s.threshold},
                              {"left", index_of(s.left)},
                              {"right", index_of(s.right)}});
          }
          return {{"stumps", stumps},
                  {"alphas", p.alphas},
                  {"errors", p.errors},
                  {"n_rounds", p.n_rounds},
                  {"stop_reason", p.stop_reason}};
        } else {
          return {{"weights", p.weights},
                  {"bias", p.bias},
                  {"learning_rate", p.options.learning_rate},
                  {"n_iters", p.options.n_iters},
                  {"l2", p.options.l2},
                  {"final_loss", p.final_loss}};
        }
      },
      params);
}

ModelParams params_from_json(ClassifierKind kind, const json& j) {
  switch (kind) {
    case ClassifierKind::svm: {
      SvmParams p;
      p.weights = j.at("weights").get<std::vector<double>>();
      p.bias = j.at("bias").get<double>();
      p.options.C = j.at("C").get<double>();
      p.options.tol = j.at("tol").get<double>();
      p.options.max_passes = j.at("max_passes").get<std::size_t>();
      p.iterations = j.at("iterations").get<std::size_t>();
      p.converged = j.at("converged").get<bool>();
      p.support_vectors = j.at("support_vectors").get<std::size_t>();
      return p;
    }
    case ClassifierKind::gnb: {
      GnbParams p;
      p.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      p.mean = j.at("mean").get<std::array<std::vector<double>, 2>>();
      p.variance = j.at("variance").get<std::array<std::vector<double>, 2>>();
      p.var_smoothing = j.at("var_smoothing").get<double>();
      p.epsilon = j.at("epsilon").get<double>();
      return p;
    }
    case ClassifierKind::knn: {
      KnnParams p;
      p.train = matrix_from_json(j.at("train"));
      p.labels = labels_from_json(j.at("labels"));
      p.k = j.at("k").get<std::size_t>();
      if (p.labels.size() != p.train.rows()) throw Error(Errc::CorruptBundle, "k-NN labels do not match rows");
      return p;
    }
    case ClassifierKind::dtree:
      return tree_from_json(j);
    case ClassifierKind::rforest:
    case ClassifierKind::bagging: {
      ForestParams p;
      for (const auto& t : j.at("trees")) p.trees.push_back(tree_from_json(t));
      p.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
      p.m_features = j.at("m_features").get<std::size_t>();
      p.bootstrap = j.at("bootstrap").get<bool>();
      if (p.trees.empty()) throw Error(Errc::CorruptBundle, "forest has no trees");
      return p;
    }
    case ClassifierKind::adaboost: {
      AdaBoostParams p;
      for (const auto& s : j.at("stumps")) {
        p.stumps.push_back({s.at("feature").get<std::int32_t>(), s.at("threshold").get<double>(),
                            label_from_json(s.at("left")), label_from_json(s.at("right"))});
      }
      p.alphas = j.at("alphas").get<std::vector<double>>();
      p.errors = j.at("errors").get<std::vector<double>>();
      p.n_rounds = j.at("n_rounds").get<std::size_t>();
      p.stop_reason = j.at("stop_reason").get<std::string>();
      if (p.alphas.size() != p.stumps.size()) throw Error(Errc::CorruptBundle, "stump and alpha counts differ");
      return p;
    }
    case ClassifierKind::logreg: {
      LogRegParams p;
      p.weights = j.at("weights").get<std::vector<double>>();
      p.bias = j.at("bias").get<double>();
      p.options.learning_rate = j.at("learning_rate").get<double>();
      p.options.n_iters = j.at("n_iters").get<std::size_t>();
      p.options.l2 = j.at("l2").get<double>();
      p.final_loss = j.at("final_loss").get<double>();
      return p;
    }
  }
  throw Error(Errc::CorruptBundle, "unhandled classifier kind");
}

void check_tree_dims(const DecisionTree& t, std::size_t dim) {
  for (const auto& n : t.nodes) {
    if (n.feature >= static_cast<std::int32_t>(dim)) throw Error(Errc::CorruptBundle, "tree feature index out of range");
  }
}

void check_dims(const ClassifierModel& m) {
  const std::size_t d = m.feature_dim;
  auto fail = [] { throw Error(Errc::CorruptBundle, "parameter width differs from feature_dim"); };
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SvmParams> || std::is_same_v<P, LogRegParams>) {
          if (p.weights.size() != d) fail();
        } else if constexpr (std::is_same_v<P, GnbParams>) {
          for (std::size_t c = 0; c < 2; ++c) {
            if (p.mean[c].size() != d || p.variance[c].size() != d) fail();
          }
        } else if constexpr (std::is_same_v<P, KnnParams>) {
          if (p.train.cols() != d || p.k < 1 || p.k > p.train.rows()) fail();
        } else if constexpr (std::is_same_v<P, DecisionTree>) {
          check_tree_dims(p, d);
        } else if constexpr (std::is_same_v<P, ForestParams>) {
          for (const auto& t : p.trees) check_tree_dims(t, d);
        } else {
          for (const auto& s : p.stumps) {
            if (s.feature >= static_cast<std::int32_t>(d)) fail();
          }
        }
      },
      m.params);
}

}  // namespace

json model_to_json(const ClassifierModel& model) {
  json j;
  j["kind"] = to_string(model.kind);
  j["feature_dim"] = model.feature_dim;
  j["scaler"] = model.scaler ? json{{"mean", model.scaler->mean}, {"stddev", model.scaler->stddev}} : json(nullptr);
  j["params"] = params_to_json(model.params);
  return j;
}

ClassifierModel model_from_json(const json& j) {
  try {
    ClassifierModel m;
    m.kind = classifier_kind_from_string(j.at("kind").get<std::string>());
    m.feature_dim = j.at("feature_dim").get<std::size_t>();
    if (m.feature_dim == 0) throw Error(Errc::CorruptBundle, "feature_dim is 0");
    if (!j.at("scaler").is_null()) {
      Scaler s;
      s.mean = j.at("scaler").at("mean").get<std::vector<double>>();
      s.stddev = j.at("scaler").at("stddev").get<std::vector<double>>();
      if (s.mean.size() != m.feature_dim || s.stddev.size() != m.feature_dim) {
        throw Error(Errc::CorruptBundle, "scaler width differs from feature_dim");
      }
      for (double v : s.stddev) {
        if (!(v > 0.0)) throw Error(Errc::CorruptBundle, "scaler stddev must be > 0");
      }
      m.scaler = std::move(s);
    }
    m.params = params_from_json(m.kind, j.at("params"));
    check_dims(m);
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::CorruptBundle, std::string("model JSON: ") + e.what());
  } catch (const Error& e) {
    if (e.code() == Errc::CorruptBundle) throw;
    throw Error(Errc::CorruptBundle, e.what());
  }
}

}  // namespace veritas
