// Acceptance checks, one per invocation: `veritas_acceptance N` for N in 1..6.
// Prints a single "criterion N: PASS|FAIL|SKIP ..." line (diagnostics go to
// stderr) and exits 0 on pass, 1 on fail, 77 when the input data is missing.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "classifier_oracles.hpp"
#include "synthetic_corpus.hpp"
#include "test_util.hpp"
#include "veritas/bundle.hpp"
#include "veritas/embedding.hpp"
#include "veritas/error.hpp"
#include "veritas/evaluation.hpp"
#include "veritas/pipeline.hpp"

using namespace veritas;
using namespace veritas::testing;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// tolerances
constexpr double kAccuracyTol = 1.0 / 320.0;   // one test review out of 320
constexpr double kCellTol = 0.005;             // half a unit in the second decimal
constexpr double kFloatSlack = 1e-12;          // binary representation of the printed cells
constexpr double kIdentityTol = 1e-12;
constexpr double kWeightedPrecision = 0.8783;  // 4-decimal targets for the SVM table
constexpr double kMacroF1 = 0.8774;
constexpr double kTargetTol = 5e-5;
constexpr double kSvmFloor = 0.80;
constexpr double kOracleBudgetS = 30.0;
constexpr double kEndToEndBudgetS = 120.0;
constexpr double kMetricBudgetS = 1.0;
constexpr int kSkip = 77;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

int finish(int n, bool ok, const std::string& detail) {
  std::cout << "criterion " << n << ": " << (ok ? "PASS" : "FAIL") << " " << detail << "\n";
  return ok ? 0 : 1;
}

int skip(int n, const std::string& detail) {
  std::cout << "criterion " << n << ": SKIP " << detail << "\n";
  return kSkip;
}

ConfusionMatrix matrix_of(std::uint64_t tp_d, std::uint64_t support_d, std::uint64_t tp_t, std::uint64_t support_t) {
  ConfusionMatrix cm;
  cm.counts = {{{tp_d, support_d - tp_d}, {support_t - tp_t, tp_t}}};
  return cm;
}

std::uint64_t round_count(double recall, std::uint64_t support) {
  return static_cast<std::uint64_t>(std::floor(recall * static_cast<double>(support) + 0.5));
}

struct Cell {
  std::string name;
  double printed;
  double computed;
};

std::vector<Cell> cells_of(const json& ref, const MetricsReport& r) {
  std::vector<Cell> cells;
  for (auto label : {D, T}) {
    const std::string name(to_string(label));
    const auto& c = r.per_class[index_of(label)];
    cells.push_back({name + ".precision", ref[name]["precision"], c.precision});
    cells.push_back({name + ".recall", ref[name]["recall"], c.recall});
    cells.push_back({name + ".f1", ref[name]["f1"], c.f1});
  }
  for (const auto& [name, avg] : {std::pair{"macro_avg", r.macro_avg}, std::pair{"weighted_avg", r.weighted_avg}}) {
    cells.push_back({std::string(name) + ".precision", ref[name]["precision"], avg.precision});
    cells.push_back({std::string(name) + ".recall", ref[name]["recall"], avg.recall});
    cells.push_back({std::string(name) + ".f1", ref[name]["f1"], avg.f1});
  }
  cells.push_back({"accuracy", ref["accuracy"], r.accuracy});
  return cells;
}

bool matches_table(const json& ref, const MetricsReport& r) {
  if (std::abs(r.accuracy * 100.0 - ref["accuracy_pct"].get<double>()) > kAccuracyTol * 100.0 + kFloatSlack)
    return false;
  for (const auto& c : cells_of(ref, r))
    if (std::abs(c.computed - c.printed) > kCellTol + kFloatSlack) return false;
  return true;
}

/// Every matrix with the same supports whose metrics agree with the printed table.
std::vector<ConfusionMatrix> consistent_matrices(const json& ref, std::uint64_t sd, std::uint64_t st) {
  std::vector<ConfusionMatrix> out;
  for (std::uint64_t a = 0; a <= sd; ++a)
    for (std::uint64_t b = 0; b <= st; ++b) {
      const auto cm = matrix_of(a, sd, b, st);
      if (matches_table(ref, compute_metrics(cm))) out.push_back(cm);
    }
  return out;
}

std::string show(const ConfusionMatrix& cm) {
  std::ostringstream os;
  os << "[[" << cm.counts[0][0] << "," << cm.counts[0][1] << "],[" << cm.counts[1][0] << "," << cm.counts[1][1]
     << "]]";
  return os.str();
}

int criterion_1() {
  const auto t0 = Clock::now();
  std::ifstream in(VERITAS_DATA_DIR "/reference_reports.json");
  const json refs = json::parse(in);
  bool ok = refs.size() == 6;
  std::vector<std::string> failed;
  for (const auto& ref : refs) {
    const std::uint64_t sd = ref["deceptive"]["support"], st = ref["truthful"]["support"];
    const auto cm = matrix_of(round_count(ref["deceptive"]["recall"], sd), sd, round_count(ref["truthful"]["recall"], st),
                              st);
    const auto r = compute_metrics(cm, ref["classifier"]);
    const std::string fig = "fig" + std::to_string(ref["figure"].get<int>());
    std::vector<std::string> off;
    const double acc_pct = r.accuracy * 100.0;
    if (std::abs(acc_pct - ref["accuracy_pct"].get<double>()) > kAccuracyTol * 100.0 + kFloatSlack)
      off.push_back("accuracy_pct " + std::to_string(acc_pct));
    for (const auto& c : cells_of(ref, r))
      if (std::abs(c.computed - c.printed) > kCellTol + kFloatSlack)
        off.push_back(c.name + " " + std::to_string(c.computed) + " vs " + format_2dp(c.printed));
    if (ref["figure"] == 2 && !(cm.counts[0][0] + cm.counts[1][1] == 281 && cm.total() == 320)) off.push_back("fig2 not 281/320");
    std::cerr << fig << " " << ref["classifier"].get<std::string>() << " reconstructed " << show(cm) << " accuracy "
              << acc_pct << "%\n";
    if (!off.empty()) {
      ok = false;
      failed.push_back(fig);
      for (const auto& o : off) std::cerr << "  mismatch " << o << "\n";
      std::cerr << "  matrices consistent with every printed cell:";
      const auto alts = consistent_matrices(ref, sd, st);
      if (alts.empty()) std::cerr << " none";
      for (const auto& a : alts) std::cerr << " " << show(a);
      std::cerr << "\n";
    }
  }
  const double s = seconds_since(t0);
  ok = ok && s < kMetricBudgetS;
  std::string detail = "metric oracle vs reference tables (" + std::to_string(refs.size()) + " figures";
  if (!failed.empty()) {
    detail += "; mismatched:";
    for (const auto& f : failed) detail += " " + f;
  }
  return finish(1, ok, detail + ")");
}

int criterion_2() {
  const auto cm = matrix_of(153, 170, 128, 150);
  const auto r = compute_metrics(cm, "svm");
  bool ok = std::abs(r.weighted_avg.precision - kWeightedPrecision) < kTargetTol &&
            std::abs(r.macro_avg.f1 - kMacroF1) < kTargetTol && format_2dp(r.weighted_avg.precision) == "0.88" &&
            format_2dp(r.macro_avg.f1) == "0.88";
  std::cerr << "weighted precision " << r.weighted_avg.precision << " macro f1 " << r.macro_avg.f1 << "\n";

  Xoshiro256ss rng(2024);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    ConfusionMatrix m;
    for (auto& row : m.counts)
      for (auto& v : row) v = rng.bounded(500);
    if (m.counts[0][0] + m.counts[0][1] == 0) m.counts[0][0] = 1;
    if (m.counts[1][0] + m.counts[1][1] == 0) m.counts[1][1] = 1;
    const auto rep = compute_metrics(m);
    worst = std::max(worst, std::abs(rep.weighted_avg.recall - rep.accuracy));
  }
  std::cerr << "max |weighted recall - accuracy| over 1000 matrices " << worst << "\n";
  ok = ok && worst <= kIdentityTol;
  std::ostringstream d;
  d << "weighted/macro identities (wP=" << r.weighted_avg.precision << ", macroF1=" << r.macro_avg.f1
    << ", max recall gap=" << worst << ")";
  return finish(2, ok, d.str());
}

int criterion_3() {
  const auto t0 = Clock::now();
  const std::vector<std::pair<std::string, Outcome>> checks{
      {"svm-grid", check_svm_against_grid(12, 17)},  {"svm-kkt", check_svm_kkt(30, 3)},
      {"gnb", check_gnb_hand_bayes(200, 21)},       {"knn", check_knn_exhaustive(300, 5)},
      {"tree", check_tree_splits(200, 9)},          {"adaboost", check_adaboost(200, 31)},
      {"logreg", check_logreg_gradient(200, 41)},
  };
  const double s = seconds_since(t0);
  bool ok = s < kOracleBudgetS;
  std::string detail = "classifier oracles (";
  for (const auto& [name, out] : checks) {
    detail += name + (out.ok ? " ok, " : " FAILED, ");
    if (!out.ok) {
      ok = false;
      std::cerr << name << ": " << out.detail << "\n";
    }
  }
  std::ostringstream t;
  t << s << " s)";
  return finish(3, ok, detail + t.str());
}

std::optional<fs::path> hotel_corpus() {
  if (const char* env = std::getenv("VERITAS_HOTEL_CORPUS"); env && *env) return fs::path(env);
  const fs::path bundled = fs::path(VERITAS_DATA_DIR) / "op_spam_v1.4";
  if (fs::is_directory(bundled)) return bundled;
  return std::nullopt;
}

ExperimentConfig end_to_end_config(const fs::path& corpus) {
  ExperimentConfig c;
  c.corpus.kind = CorpusKind::ott;
  c.corpus.path = corpus;
  c.features.kind = FeatureKind::lexical;
  c.split.ratio = 0.8;
  c.split.seed = 42;
  c.training.seed = 42;
  c.classifiers = reference_classifiers();
  return c;
}

struct EndToEnd {
  bool ok = true;
  std::string detail;
};

EndToEnd end_to_end(const fs::path& corpus, bool apply_floor) {
  const auto t0 = Clock::now();
  EndToEnd e;
  try {
    const auto result = run_experiment(end_to_end_config(corpus));
    const double s = seconds_since(t0);
    const auto* svm = result.find("svm");
    std::ostringstream d;
    d << "svm accuracy " << (svm ? svm->accuracy : 0.0) << ", " << result.reports.size() << "/6 classifiers, " << s
      << " s";
    e.ok = svm && (!apply_floor || svm->accuracy >= kSvmFloor) && result.reports.size() == 6 && s < kEndToEndBudgetS;
    e.detail = d.str();
  } catch (const std::exception& ex) {
    e.ok = false;
    e.detail = ex.what();
  }
  return e;
}

struct Snapshot {
  std::string reports;
  std::string results;
  std::string bundle;
};

Snapshot snapshot(const fs::path& corpus, const fs::path& out) {
  auto c = end_to_end_config(corpus);
  c.output.model = out;
  const auto run = run_experiment_full(c);
  Snapshot s;
  for (const auto& r : run.result.reports) s.reports += render_report(r, ReportFormat::text);
  s.results = run.result.to_json(false).dump(2);
  s.bundle = read_file(out);
  return s;
}

EndToEnd determinism(const fs::path& corpus, bool) {
  EndToEnd e;
  try {
    // same output path both times, it is echoed into the bundle metadata
    TempDir dir;
    const auto a = snapshot(corpus, dir / "model.vbundle");
    const auto b = snapshot(corpus, dir / "model.vbundle");
    e.ok = a.reports == b.reports && a.results == b.results && a.bundle == b.bundle;
    e.detail = "reports " + std::string(a.reports == b.reports ? "identical" : "differ") + ", bundles " +
               (a.bundle == b.bundle ? "identical" : "differ") + " (" + std::to_string(a.bundle.size()) + " bytes)";
  } catch (const std::exception& ex) {
    e.ok = false;
    e.detail = ex.what();
  }
  return e;
}

/// Without the hotel corpus, exercise the same code path on a synthetic corpus
/// with the same layout. That result is reported but cannot stand in for the
/// real one, so the criterion is skipped. The accuracy floor only means
/// something on real reviews.
int without_corpus(int n, EndToEnd (*check)(const fs::path&, bool), std::size_t per_cell) {
  TempDir dir;
  SyntheticCorpusOptions opt;
  opt.per_cell = per_cell;
  write_synthetic_ott_corpus(dir.path(), opt);
  const auto e = check(dir.path(), false);
  std::cerr << "synthetic corpus (" << 4 * per_cell << " reviews): " << (e.ok ? "ok" : "FAILED") << ", " << e.detail
            << "\n";
  if (!e.ok) return finish(n, false, "synthetic stand-in failed: " + e.detail);
  return skip(n, "hotel corpus not found (set VERITAS_HOTEL_CORPUS); synthetic stand-in ok: " + e.detail);
}

int criterion_4() {
  const auto corpus = hotel_corpus();
  if (!corpus) return without_corpus(4, end_to_end, 400);
  const auto e = end_to_end(*corpus, true);
  return finish(4, e.ok, "end-to-end lexical run: " + e.detail);
}

int criterion_5() {
  const auto corpus = hotel_corpus();
  if (!corpus) return without_corpus(5, determinism, 100);
  const auto e = determinism(*corpus, true);
  return finish(5, e.ok, "determinism: " + e.detail);
}

EmbeddingMatrix random_embedding(Xoshiro256ss& rng) {
  const std::size_t n = 1 + rng.bounded(20), d = 1 + rng.bounded(16);
  std::vector<std::string> ids;
  for (std::size_t i = 0; i < n; ++i) {
    std::string id = "r" + std::to_string(i) + "_";
    const std::size_t extra = rng.bounded(12);
    for (std::size_t k = 0; k < extra; ++k) id += static_cast<char>('a' + rng.bounded(26));
    ids.push_back(id);
  }
  std::vector<float> values(n * d);
  for (auto& v : values) {
    // finite bit patterns across the whole exponent range, signed zeros and subnormals included
    std::uint32_t bits;
    do {
      bits = static_cast<std::uint32_t>(rng.next());
    } while ((bits & 0x7f800000u) == 0x7f800000u);
    std::memcpy(&v, &bits, 4);
  }
  std::string fp = "encoder:m" + std::to_string(rng.bounded(1000)) + ":last:mean:256";
  return EmbeddingMatrix(std::move(ids), std::move(values), d, std::move(fp));
}

bool bitwise_equal(const EmbeddingMatrix& a, const EmbeddingMatrix& b) {
  return a.ids() == b.ids() && a.dim() == b.dim() && a.provider_fingerprint() == b.provider_fingerprint() &&
         a.values().size() == b.values().size() &&
         std::memcmp(a.values().data(), b.values().data(), a.values().size() * sizeof(float)) == 0;
}

template <class F>
std::optional<Errc> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

int criterion_6() {
  std::vector<std::string> problems;
  Xoshiro256ss rng(6);
  TempDir dir;
  int frve_ok = 0;
  for (int i = 0; i < 100; ++i) {
    const auto m = random_embedding(rng);
    const auto path = dir / "m.frve";
    write_embedding_file(m, path);
    const auto back = read_embedding_file(path);
    if (bitwise_equal(back, m) && encode_embedding_file(back) == read_file(path)) ++frve_ok;
  }
  if (frve_ok != 100) problems.push_back("FRVE round-trip " + std::to_string(frve_ok) + "/100");

  // bundles: every reference classifier on a small synthetic corpus
  TempDir corpus;
  SyntheticCorpusOptions opt;
  opt.per_cell = 20;
  opt.filler_vocabulary = 200;
  write_synthetic_ott_corpus(corpus.path(), opt);
  ExperimentConfig c = end_to_end_config(corpus.path());
  c.training.rforest.n_trees = 10;
  c.training.bagging.n_trees = 5;
  const auto run = run_experiment_full(c);
  int bundles_ok = 0;
  for (const auto& model : run.models) {
    ModelBundle b = run.best_bundle;
    b.model = model;
    const auto path = dir / "b.vbundle";
    save_bundle(b, path);
    const auto first = read_file(path);
    const auto loaded = load_bundle(path);
    save_bundle(loaded, path);
    if (loaded == b && read_file(path) == first) ++bundles_ok;
  }
  if (bundles_ok != static_cast<int>(run.models.size()))
    problems.push_back("bundle round-trip " + std::to_string(bundles_ok) + "/" + std::to_string(run.models.size()));

  const std::string frve = encode_embedding_file(random_embedding(rng));
  std::string bad_magic = frve;
  bad_magic[0] = 'X';
  if (error_of([&] { decode_embedding_file(bad_magic); }) != Errc::BadMagic) problems.push_back("BadMagic not raised");
  if (error_of([&] { decode_embedding_file(frve.substr(0, 30)); }) != Errc::TruncatedPayload)
    problems.push_back("TruncatedPayload not raised");
  const std::string bundle = serialize_bundle(run.best_bundle);
  std::string flipped = bundle;
  flipped[bundle.size() / 2] ^= 0x20;
  if (error_of([&] { parse_bundle(flipped); }) != Errc::CorruptBundle) problems.push_back("CorruptBundle (flip) not raised");
  if (error_of([&] { parse_bundle(bundle.substr(0, bundle.size() - 40)); }) != Errc::CorruptBundle)
    problems.push_back("CorruptBundle (truncation) not raised");

  std::string detail = "format round-trips (FRVE " + std::to_string(frve_ok) + "/100, bundles " +
                       std::to_string(bundles_ok) + "/" + std::to_string(run.models.size()) + ", error cases)";
  for (const auto& p : problems) std::cerr << p << "\n";
  return finish(6, problems.empty(), detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: veritas_acceptance <1-6>\n";
    return 2;
  }
  const int n = std::atoi(argv[1]);
  try {
    switch (n) {
      case 1: return criterion_1();
      case 2: return criterion_2();
      case 3: return criterion_3();
      case 4: return criterion_4();
      case 5: return criterion_5();
      case 6: return criterion_6();
      default: std::cerr << "unknown criterion " << argv[1] << "\n"; return 2;
    }
  } catch (const std::exception& e) {
    return finish(n, false, std::string("error: ") + e.what());
  }
}
