#include <cstdio>
#include <fstream>

#include "veritas/error.hpp"
#include "veritas/evaluation.hpp"

namespace veritas {

using nlohmann::json;

std::string_view baseline_name(std::string_view kind) noexcept {
  if (kind == "svm") return "SVM";
  if (kind == "rforest") return "Random Forest";
  if (kind == "bagging") return "Bagging";
  if (kind == "knn") return "K-NN";
  if (kind == "adaboost") return "AdaBoost";
  if (kind == "gnb") return "Gaussian Naïve Bayes";
  return {};
}

BaselineTable BaselineTable::from_json(const json& j) {
  try {
    std::vector<BaselineRow> rows;
    for (const auto& r : j) {
      rows.push_back({r.at("classifier").get<std::string>(), r.at("prior_accuracy").get<double>(),
                      r.at("this_accuracy").get<double>(), r.at("prior_f1").get<double>(),
                      r.at("this_f1").get<double>()});
    }
    return BaselineTable(std::move(rows));
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("baseline JSON: ") + e.what());
  }
}

BaselineTable BaselineTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open baseline '" + path.string() + "'");
  try {
    return from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw Error(Errc::ConfigInvalid, "baseline '" + path.string() + "': " + e.what());
  }
}

const BaselineRow* BaselineTable::find_kind(std::string_view kind) const {
  const auto name = baseline_name(kind);
  if (name.empty()) return nullptr;
  for (const auto& r : rows_) {
    if (r.classifier == name) return &r;
  }
  return nullptr;
}

namespace {

std::string signed_2dp(double v) {
  const std::string s = format_2dp(v);
  return s[0] == '-' ? s : "+" + s;
}

}  // namespace

std::string compare_with_baseline(std::span<const MetricsReport> results, const BaselineTable& baseline) {
  std::string out;
  char line[200];
  std::snprintf(line, sizeof line, "%-22s %9s %9s %8s %7s %7s %7s\n", "classifier", "acc(%)", "table2", "delta", "f1",
                "table2", "delta");
  out += line;
  for (const auto& r : results) {
    const BaselineRow* row = baseline.find_kind(r.classifier_kind);
    if (!row) throw Error(Errc::UnknownClassifier, "no baseline row for '" + r.classifier_kind + "'");
    const double acc = r.accuracy * 100.0;
    const double f1 = r.weighted_avg.f1;
    // %-22s pads by bytes; pad by code points so "Naïve" lines up.
    std::string name = row->classifier;
    std::size_t cps = 0;
    for (unsigned char c : name) cps += (c & 0xC0) != 0x80 ? 1 : 0;
    if (cps < 22) name.append(22 - cps, ' ');
    std::snprintf(line, sizeof line, "%s %9s %9s %8s %7s %7s %7s\n", name.c_str(), format_2dp(acc).c_str(),
                  format_2dp(row->this_accuracy).c_str(), signed_2dp(acc - row->this_accuracy).c_str(),
                  format_2dp(f1).c_str(), format_2dp(row->this_f1).c_str(), signed_2dp(f1 - row->this_f1).c_str());
    out += line;
  }
  return out;
}

}  // namespace veritas
