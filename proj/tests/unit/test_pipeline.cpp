#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "synthetic_corpus.hpp"
#include "test_util.hpp"
#include "veritas/bundle.hpp"
#include "veritas/error.hpp"
#include "veritas/hash.hpp"
#include "veritas/pipeline.hpp"

using namespace veritas;
using namespace veritas::testing;
using nlohmann::json;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Internal;
}

/// 160-review corpus shared by the tests in this file.
const std::filesystem::path& small_corpus() {
  static TempDir dir;
  static const bool written = [] {
    SyntheticCorpusOptions opt;
    opt.per_cell = 40;
    opt.filler_vocabulary = 300;
    opt.signal = 0.25;
    write_synthetic_ott_corpus(dir.path(), opt);
    return true;
  }();
  (void)written;
  return dir.path();
}

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.corpus.path = small_corpus();
  c.training.rforest.n_trees = 15;
  c.training.bagging.n_trees = 8;
  c.training.adaboost.n_rounds = 15;
  return c;
}

std::vector<std::string> texts_of(const ReviewSet& corpus, const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  for (const auto& id : ids) out.push_back(corpus.find(id)->text);
  return out;
}

std::string cli() { return VERITAS_CLI; }

int run_cli(const std::string& args, const std::filesystem::path& out, const std::string& env = "") {
  const std::string cmd = env + " '" + cli() + "' " + args + " > '" + out.string() + "' 2> '" + out.string() + ".err'";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

// -- config ----------------------------------------------------------------------

TEST_CASE("config: defaults and overrides") {
  const auto c = ExperimentConfig::from_json(json::parse(R"({
    "corpus": {"kind": "ott", "path": "hotels"},
    "split": {"seed": 7, "ratio": 0.75, "stratify": false},
    "classifiers": ["svm", {"kind": "knn", "k": 3}, {"kind": "rf", "n_trees": 9, "criterion": "entropy"}],
    "output": {"model": "out/model.vbundle"}
  })"),
                                             "/base");
  CHECK(c.corpus.path == std::filesystem::path("/base/hotels"));
  CHECK(c.split.seed == 7);
  CHECK(c.training.seed == 7);
  CHECK_FALSE(c.split.stratify);
  CHECK(c.classifiers ==
        std::vector<ClassifierKind>{ClassifierKind::svm, ClassifierKind::knn, ClassifierKind::rforest});
  CHECK(c.training.knn.k == 3);
  CHECK(c.training.rforest.n_trees == 9);
  CHECK(c.training.rforest.tree.criterion == SplitCriterion::entropy);
  CHECK(c.output.model == std::filesystem::path("/base/out/model.vbundle"));
  CHECK(c.features.kind == FeatureKind::lexical);
  CHECK(c.features.lexical.min_df == 2);

  const auto echo = c.to_json();
  CHECK(ExperimentConfig::from_json(echo).to_json() == echo);

  const auto d = ExperimentConfig::from_json(json::parse(R"({"corpus": {"path": "/x"}})"));
  CHECK(d.classifiers == reference_classifiers());
  CHECK(d.split.ratio == 0.8);
  CHECK(d.split.seed == 42);
  CHECK(d.corpus.csv.label_map.at("deceptive") == D);
}

TEST_CASE("config: invalid documents") {
  auto bad = [](const char* text) {
    return code_of([&] { ExperimentConfig::from_json(json::parse(text)); });
  };
  CHECK(bad(R"({"corpus": {"path": "/x"}, "bogus": 1})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "split": {"ratio": 1.0}})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "split": {"ratio": "big"}})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "classifiers": []})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "classifiers": ["svm", "svm"]})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "classifiers": ["perceptron"]})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "classifiers": [{"kind": "knn", "C": 1}]})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "classifiers": [{"kind": "knn", "k": 0}]})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"kind": "xml", "path": "/x"}})") == Errc::ConfigInvalid);
  CHECK(bad(R"({"corpus": {"path": "/x"}, "features": {"kind": "embedding_file"}})") == Errc::ConfigInvalid);
  CHECK(bad(R"({})") == Errc::ConfigInvalid);

  ExperimentConfig c = small_config();
  c.corpus.path = "/definitely/not/here";
  CHECK(code_of([&] { run_experiment(c); }) == Errc::ConfigInvalid);
}

TEST_CASE("config: VERITAS_SEED") {
  ::unsetenv("VERITAS_SEED");
  CHECK_FALSE(seed_from_environment().has_value());
  ::setenv("VERITAS_SEED", "1234", 1);
  CHECK(seed_from_environment() == 1234u);
  ::setenv("VERITAS_SEED", "12x", 1);
  CHECK(code_of([] { seed_from_environment(); }) == Errc::ConfigInvalid);
  ::unsetenv("VERITAS_SEED");
}

// -- ranking ---------------------------------------------------------------------

TEST_CASE("ranking: accuracy, then macro f1, then name") {
  ConfusionMatrix a;
  a.counts = {{{8, 2}, {2, 8}}};
  ConfusionMatrix b;
  b.counts = {{{10, 0}, {4, 6}}};  // same accuracy, lower macro f1
  ConfusionMatrix c;
  c.counts = {{{9, 1}, {0, 10}}};
  const std::vector<MetricsReport> reports{compute_metrics(b, "svm"), compute_metrics(a, "knn"),
                                           compute_metrics(a, "gnb"), compute_metrics(c, "rforest")};
  CHECK(rank_reports(reports) == std::vector<std::string>{"rforest", "gnb", "knn", "svm"});
}

// -- end to end ------------------------------------------------------------------

TEST_CASE("pipeline: lexical run, determinism and persisted bundle") {
  TempDir out;
  ExperimentConfig c = small_config();
  c.output.model = out / "model.vbundle";
  c.output.results = out / "results.json";
  const ExperimentRun run = run_experiment_full(c);
  const auto& r = run.result;

  REQUIRE(r.reports.size() == 6);
  auto sorted_ranking = r.ranking;
  std::sort(sorted_ranking.begin(), sorted_ranking.end());
  std::vector<std::string> kinds;
  for (auto k : c.classifiers) kinds.emplace_back(to_string(k));
  std::sort(kinds.begin(), kinds.end());
  CHECK(sorted_ranking == kinds);
  CHECK(r.best_kind == r.ranking.front());
  CHECK(r.train_size == 128);
  CHECK(r.test_size == 32);
  for (const auto& rep : r.reports) CHECK(rep.matrix.total() == 32);
  CHECK(r.split_fingerprint == run.split.fingerprint());
  CHECK(r.find("svm") != nullptr);

  const auto second = run_experiment_full(c);
  CHECK(second.result.to_json(false).dump() == r.to_json(false).dump());
  CHECK(serialize_bundle(second.best_bundle) == serialize_bundle(run.best_bundle));
  CHECK(read_file(*c.output.model) == serialize_bundle(run.best_bundle));

  const auto loaded_results = ExperimentResult::load(*c.output.results);
  CHECK(loaded_results.to_json(false) == r.to_json(false));
  CHECK_FALSE(loaded_results.timings.empty());

  // no test leakage: vectorizer and scaler come from the training rows alone
  const auto train_texts = texts_of(run.corpus, run.split.train_ids);
  CHECK(fit_lexical_vectorizer(train_texts, c.features.lexical) == *run.features.vectorizer);
  for (const auto& m : run.models) {
    if (m.scaler) CHECK(*m.scaler == Scaler::fit(run.train.X));
  }
  CHECK(run.train.ids == run.split.train_ids);
  CHECK(run.test.ids == run.split.test_ids);

  // bundle contents
  const ModelBundle loaded = load_bundle(*c.output.model);
  CHECK(loaded == run.best_bundle);
  CHECK(to_string(loaded.model.kind) == r.best_kind);
  const auto again = predict(loaded.model, run.test.X);
  CHECK(again == loaded.test_predictions);
  CHECK(evaluate_bundle(loaded, run.corpus, std::nullopt, true) == *r.find(r.best_kind));
}

TEST_CASE("pipeline: a different seed changes the split") {
  ExperimentConfig c = small_config();
  c.classifiers = {ClassifierKind::gnb};
  const auto a = run_experiment(c);
  c.split.seed = 43;
  c.training.seed = 43;
  const auto b = run_experiment(c);
  CHECK(a.split_fingerprint != b.split_fingerprint);
}

TEST_CASE("pipeline: errors carry the stage") {
  TempDir empty;
  ExperimentConfig c = small_config();
  c.corpus.path = empty.path();
  try {
    run_experiment(c);
    FAIL("expected CorpusEmpty");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::CorpusEmpty);
    CHECK(std::string(e.what()).find("stage 'load'") != std::string::npos);
  }
}

TEST_CASE("pipeline: embedding-file features") {
  TempDir dir;
  const ReviewSet corpus = load_ott_corpus(small_corpus());
  // two informative coordinates plus noise
  Xoshiro256ss rng(3);
  std::vector<std::string> ids;
  std::vector<float> values;
  for (const auto& r : corpus.reviews()) {
    ids.push_back(r.id);
    const float s = r.label == D ? 1.0f : -1.0f;
    values.push_back(s + static_cast<float>(rng.uniform() - 0.5) * 2.5f);
    values.push_back(s * 0.5f + static_cast<float>(rng.uniform() - 0.5) * 2.5f);
    values.push_back(static_cast<float>(rng.uniform()));
  }
  const EmbeddingMatrix emb(ids, values, 3, "encoder:test-model:last:mean:256");
  write_embedding_file(emb, dir / "emb.frve");

  ExperimentConfig c = small_config();
  c.features.kind = FeatureKind::embedding_file;
  c.features.path = dir / "emb.frve";
  c.classifiers = {ClassifierKind::svm, ClassifierKind::knn};
  const auto run = run_experiment_full(c);
  CHECK(run.features.fingerprint == emb.provider_fingerprint());
  CHECK(run.best_bundle.features.dim == 3);
  CHECK(run.result.find("svm")->accuracy > 0.6);

  const auto& bundle = run.best_bundle;
  CHECK(code_of([&] { predict_text(bundle, "nice room"); }) == Errc::FingerprintMismatch);
  CHECK(predict_vector(bundle, emb.row(0)).label == predict(bundle.model, Matrix::from_embedding(align(emb, std::vector<std::string>{ids[0]})))[0]);
  CHECK(code_of([&] { predict_vector(bundle, std::vector<float>{1, 2}); }) == Errc::DimensionMismatch);
  CHECK(evaluate_bundle(bundle, corpus, emb, true) == *run.result.find(run.result.best_kind));
  CHECK(code_of([&] { evaluate_bundle(bundle, corpus, std::nullopt, false); }) == Errc::FingerprintMismatch);
  const EmbeddingMatrix other(ids, values, 3, "encoder:other");
  CHECK(code_of([&] { evaluate_bundle(bundle, corpus, other, false); }) == Errc::FingerprintMismatch);

  // a corpus id missing from the file
  const std::vector<std::string> fewer(ids.begin() + 1, ids.end());
  write_embedding_file(align(emb, fewer), dir / "short.frve");
  c.features.path = dir / "short.frve";
  try {
    run_experiment(c);
    FAIL("expected UnknownReviewId");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownReviewId);
    CHECK(std::string(e.what()).find(ids[0]) != std::string::npos);
  }
}

// -- bundle ----------------------------------------------------------------------

TEST_CASE("bundle: text prediction") {
  ExperimentConfig c = small_config();
  c.classifiers = {ClassifierKind::svm};
  const auto run = run_experiment_full(c);
  const auto& bundle = run.best_bundle;

  const Prediction p = predict_text(bundle, "My husband and I loved this luxury hotel!");
  CHECK(std::isfinite(p.score));
  CHECK(code_of([&] { predict_text(bundle, ""); }) == Errc::EmptyText);
  CHECK(code_of([&] { predict_text(bundle, " ?! "); }) == Errc::EmptyText);
  // all out-of-vocabulary text still predicts
  CHECK(std::isfinite(predict_text(bundle, "zzzqqq").score));

  // training texts reproduce fit-time training predictions
  const auto fit_time = predict(run.models[0], run.train.X);
  const auto texts = texts_of(run.corpus, run.split.train_ids);
  for (std::size_t i = 0; i < texts.size(); ++i) REQUIRE(predict_text(bundle, texts[i]).label == fit_time[i]);
}

TEST_CASE("bundle: round-trip for every kind and corruption handling") {
  ExperimentConfig c = small_config();
  c.classifiers = {ClassifierKind::svm,     ClassifierKind::gnb,      ClassifierKind::knn,
                   ClassifierKind::dtree,   ClassifierKind::rforest,  ClassifierKind::bagging,
                   ClassifierKind::adaboost, ClassifierKind::logreg};
  c.training.logreg.n_iters = 100;
  const auto run = run_experiment_full(c);
  TempDir dir;
  for (const auto& model : run.models) {
    INFO(to_string(model.kind));
    ModelBundle b = run.best_bundle;
    b.model = model;
    const auto path = dir / "b.vbundle";
    save_bundle(b, path);
    const ModelBundle back = load_bundle(path);
    CHECK(back == b);
    CHECK(serialize_bundle(back) == serialize_bundle(b));
    CHECK(predict(back.model, run.test.X) == predict(model, run.test.X));
    CHECK(decision_scores(back.model, run.test.X) == decision_scores(model, run.test.X));
  }

  const std::string good = serialize_bundle(run.best_bundle);
  CHECK(good.substr(good.size() - 16, 7) == "\ncrc32 ");
  CHECK(code_of([&] { parse_bundle(good.substr(0, good.size() / 2)); }) == Errc::CorruptBundle);
  CHECK(code_of([&] { parse_bundle(good.substr(0, good.size() - 1)); }) == Errc::CorruptBundle);
  CHECK(code_of([&] { parse_bundle(""); }) == Errc::CorruptBundle);
  std::string flipped = good;
  flipped[good.size() / 3] ^= 0x01;
  CHECK(code_of([&] { parse_bundle(flipped); }) == Errc::CorruptBundle);

  // version 99 with a valid checksum
  std::string body = good.substr(0, good.size() - 15);
  const auto at = body.find("\"format_version\": 1");
  REQUIRE(at != std::string::npos);
  body.replace(at, 19, "\"format_version\": 99");
  const std::string v99 = body + "crc32 " + to_hex(crc32(body), 8) + "\n";
  CHECK(code_of([&] { parse_bundle(v99); }) == Errc::UnsupportedBundleVersion);

  CHECK(code_of([] { load_bundle("/no/such/bundle"); }) == Errc::Io);
}

// -- command line ------------------------------------------------------------------

TEST_CASE("cli: train, predict, evaluate, report and exit codes") {
  TempDir dir;
  const auto out = dir / "stdout";
  const std::string corpus = small_corpus().string();
  const std::string small = " --classifiers svm,gnb,knn";

  CHECK(run_cli("", out) == 1);
  CHECK(run_cli("train --corpus '" + corpus + "' --ratio 1.5" + small, out) == 1);
  CHECK(run_cli("train --corpus '" + dir.path().string() + "'" + small, out) == 2);
  CHECK(run_cli("train --corpus '" + corpus + "' --classifiers svm,perceptron", out) == 1);

  const auto model = (dir / "m.vbundle").string();
  const auto results = (dir / "r.json").string();
  REQUIRE(run_cli("train --corpus '" + corpus + "'" + small + " --out '" + model + "' --results '" + results + "'",
                  out) == 0);
  const std::string report = read_file(out);
  CHECK(report.find("== svm ==\nAccuracy =") != std::string::npos);
  CHECK(report.find("best: ") != std::string::npos);
  CHECK(read_file(out.string() + ".err").find("[timing]") != std::string::npos);

  // same run again: identical report and bundle
  const std::string bundle_bytes = read_file(model);
  REQUIRE(run_cli("train --corpus '" + corpus + "'" + small + " --out '" + model + "' --results '" + results + "'",
                  out) == 0);
  CHECK(read_file(out) == report);
  CHECK(read_file(model) == bundle_bytes);

  CHECK(run_cli("predict --model '" + model + "' --text 'The staff were wonderful'", out) == 0);
  const std::string line = read_file(out);
  CHECK((line.rfind("deceptive\t", 0) == 0 || line.rfind("truthful\t", 0) == 0));

  write_file(dir / "in.txt", "great stay\nnoisy street, small room\n");
  CHECK(run_cli("predict --model '" + model + "' --stdin < '" + (dir / "in.txt").string() + "'", out) == 0);
  const std::string lines = read_file(out);
  CHECK(std::count(lines.begin(), lines.end(), '\n') == 2);
  CHECK(run_cli("predict --model '" + model + "' --text ''", out) == 2);

  CHECK(run_cli("evaluate --model '" + model + "' --corpus '" + corpus + "' --split test", out) == 0);
  CHECK(read_file(out).rfind("Accuracy =", 0) == 0);
  CHECK(run_cli("evaluate --model '" + model + "' --corpus '" + corpus + "' --report json", out) == 0);
  CHECK(json::parse(read_file(out)).at("per_class").at("deceptive").at("support") == 80);

  CHECK(run_cli("report --results '" + results + "' --baseline '" VERITAS_DATA_DIR "/table2.json'", out) == 0);
  CHECK(read_file(out).find("Gaussian Na") != std::string::npos);

  write_file(dir / "bad.vbundle", bundle_bytes.substr(0, 100));
  CHECK(run_cli("predict --model '" + (dir / "bad.vbundle").string() + "' --text hi", out) == 2);
  CHECK(read_file(out.string() + ".err").find("CorruptBundle") != std::string::npos);
}

TEST_CASE("cli: seed precedence is flag, then environment, then config") {
  TempDir dir;
  const auto out = dir / "stdout";
  const std::string base = "train --corpus '" + small_corpus().string() + "' --classifiers gnb --report json";
  REQUIRE(run_cli(base, out, "VERITAS_SEED=5") == 0);
  CHECK(json::parse(read_file(out))["config"]["split"]["seed"] == 5);
  REQUIRE(run_cli(base + " --seed 7", out, "VERITAS_SEED=5") == 0);
  CHECK(json::parse(read_file(out))["config"]["split"]["seed"] == 7);
  write_file(dir / "cfg.json", R"({"corpus": {"path": ")" + small_corpus().string() +
                                   R"("}, "split": {"seed": 11}, "classifiers": ["gnb"]})");
  REQUIRE(run_cli("train --config '" + (dir / "cfg.json").string() + "' --report json", out, "env -u VERITAS_SEED") ==
          0);
  CHECK(json::parse(read_file(out))["config"]["split"]["seed"] == 11);
  REQUIRE(run_cli("train --config '" + (dir / "cfg.json").string() + "' --report json", out, "VERITAS_SEED=3") == 0);
  CHECK(json::parse(read_file(out))["config"]["split"]["seed"] == 3);
}
