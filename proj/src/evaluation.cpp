#include "veritas/evaluation.hpp"

#include <cmath>
#include <cstdio>

#include "veritas/error.hpp"

namespace veritas {

using nlohmann::json;

std::uint64_t ConfusionMatrix::total() const noexcept {
  return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1];
}

ConfusionMatrix confusion_matrix(std::span<const Label> truth, std::span<const Label> predicted) {
  if (truth.size() != predicted.size()) {
    throw Error(Errc::LengthMismatch, std::to_string(truth.size()) + " true labels vs " +
                                          std::to_string(predicted.size()) + " predictions");
  }
  if (truth.empty()) throw Error(Errc::EmptyInput, "no labels to evaluate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm.counts[index_of(truth[i])][index_of(predicted[i])];
  return cm;
}

namespace {

double ratio(double num, double den) noexcept { return den == 0.0 ? 0.0 : num / den; }

}  // namespace

MetricsReport compute_metrics(const ConfusionMatrix& cm, std::string classifier_kind) {
  const auto total = static_cast<double>(cm.total());
  if (total == 0.0) throw Error(Errc::EmptyInput, "confusion matrix is empty");

  MetricsReport r;
  r.classifier_kind = std::move(classifier_kind);
  r.matrix = cm;
  for (std::size_t c = 0; c < 2; ++c) {
    const auto tp = static_cast<double>(cm.counts[c][c]);
    const auto predicted = static_cast<double>(cm.counts[0][c] + cm.counts[1][c]);
    const auto actual = static_cast<double>(cm.counts[c][0] + cm.counts[c][1]);
    auto& m = r.per_class[c];
    m.precision = ratio(tp, predicted);
    m.recall = ratio(tp, actual);
    m.f1 = ratio(2.0 * m.precision * m.recall, m.precision + m.recall);
    m.support = cm.counts[c][0] + cm.counts[c][1];
  }
  r.accuracy = static_cast<double>(cm.counts[0][0] + cm.counts[1][1]) / total;

  const auto& d = r.per_class[0];
  const auto& t = r.per_class[1];
  r.macro_avg = {(d.precision + t.precision) / 2.0, (d.recall + t.recall) / 2.0, (d.f1 + t.f1) / 2.0};
  const auto sd = static_cast<double>(d.support);
  const auto st = static_cast<double>(t.support);
  r.weighted_avg = {(d.precision * sd + t.precision * st) / total, (d.recall * sd + t.recall * st) / total,
                    (d.f1 * sd + t.f1 * st) / total};
  return r;
}

double round_half_up(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  const double scaled = std::abs(value) * scale;
  const double rounded = std::floor(scaled + 0.5 + 1e-9) / scale;
  return std::copysign(rounded, value);
}

std::string format_2dp(double value) {
  const bool negative = value < 0.0;
  const auto cents = static_cast<long long>(std::floor(std::abs(value) * 100.0 + 0.5 + 1e-9));
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", negative && cents != 0 ? "-" : "", cents / 100, cents % 100);
  return buf;
}

std::string render_report(const MetricsReport& r, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(r).dump(2) + "\n";

  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "Accuracy =%.6f%%\n", r.accuracy * 100.0);
  out += line;
  std::snprintf(line, sizeof line, "%12s %9s %9s %9s %9s\n\n", "", "precision", "recall", "f1-score", "support");
  out += line;
  auto row = [&](const char* name, const std::string& p, const std::string& rc, const std::string& f,
                 std::uint64_t support) {
    std::snprintf(line, sizeof line, "%12s %9s %9s %9s %9llu\n", name, p.c_str(), rc.c_str(), f.c_str(),
                  static_cast<unsigned long long>(support));
    out += line;
  };
  for (Label l : kLabels) {
    const auto& m = r.per_class[index_of(l)];
    row(std::string(to_string(l)).c_str(), format_2dp(m.precision), format_2dp(m.recall), format_2dp(m.f1), m.support);
  }
  out += "\n";
  const std::uint64_t total = r.matrix.total();
  row("accuracy", "", "", format_2dp(r.accuracy), total);
  row("macro avg", format_2dp(r.macro_avg.precision), format_2dp(r.macro_avg.recall), format_2dp(r.macro_avg.f1), total);
  row("weighted avg", format_2dp(r.weighted_avg.precision), format_2dp(r.weighted_avg.recall),
      format_2dp(r.weighted_avg.f1), total);

  out += "\nconfusion matrix (rows: true, columns: predicted)\n";
  std::snprintf(line, sizeof line, "%12s %9s %9s\n", "", "deceptive", "truthful");
  out += line;
  for (Label l : kLabels) {
    const auto& c = r.matrix.counts[index_of(l)];
    std::snprintf(line, sizeof line, "%12s %9llu %9llu\n", std::string(to_string(l)).c_str(),
                  static_cast<unsigned long long>(c[0]), static_cast<unsigned long long>(c[1]));
    out += line;
  }
  return out;
}

json report_to_json(const MetricsReport& r) {
  auto avg = [](const AverageMetrics& a) { return json{{"precision", a.precision}, {"recall", a.recall}, {"f1", a.f1}}; };
  json per_class = json::object();
  for (Label l : kLabels) {
    const auto& m = r.per_class[index_of(l)];
    per_class[std::string(to_string(l))] = {
        {"precision", m.precision}, {"recall", m.recall}, {"f1", m.f1}, {"support", m.support}};
  }
  return {{"classifier_kind", r.classifier_kind},
          {"accuracy", r.accuracy},
          {"per_class", per_class},
          {"macro_avg", avg(r.macro_avg)},
          {"weighted_avg", avg(r.weighted_avg)},
          {"confusion_matrix", r.matrix.counts}};
}

MetricsReport report_from_json(const json& j) {
  try {
    MetricsReport r;
    r.classifier_kind = j.at("classifier_kind").get<std::string>();
    r.accuracy = j.at("accuracy").get<double>();
    for (Label l : kLabels) {
      const auto& m = j.at("per_class").at(std::string(to_string(l)));
      r.per_class[index_of(l)] = {m.at("precision").get<double>(), m.at("recall").get<double>(),
                                  m.at("f1").get<double>(), m.at("support").get<std::uint64_t>()};
    }
    auto avg = [](const json& a) {
      return AverageMetrics{a.at("precision").get<double>(), a.at("recall").get<double>(), a.at("f1").get<double>()};
    };
    r.macro_avg = avg(j.at("macro_avg"));
    r.weighted_avg = avg(j.at("weighted_avg"));
    r.matrix.counts = j.at("confusion_matrix").get<std::array<std::array<std::uint64_t, 2>, 2>>();
    return r;
  } catch (const json::exception& e) {
    throw Error(Errc::ConfigInvalid, std::string("metrics report JSON: ") + e.what());
  }
}

}  // namespace veritas
