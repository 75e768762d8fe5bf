#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "veritas/label.hpp"

namespace veritas {

enum class Polarity : std::uint8_t { positive = 0, negative = 1, unknown = 2 };

std::string_view to_string(Polarity p) noexcept;

struct Review {
  std::string id;
  std::string text;
  Label label = Label::deceptive;
  Polarity polarity = Polarity::unknown;
  std::string source;

  friend bool operator==(const Review&, const Review&) = default;
};

/// Ordered, immutable labeled corpus. Construction checks that ids are
/// non-empty and unique and that every text has content after trimming.
class ReviewSet {
 public:
  ReviewSet() = default;
  ReviewSet(std::string name, std::vector<Review> reviews);

  const std::string& name() const noexcept { return name_; }
  const std::vector<Review>& reviews() const noexcept { return reviews_; }
  std::size_t size() const noexcept { return reviews_.size(); }
  bool empty() const noexcept { return reviews_.empty(); }
  const Review& operator[](std::size_t i) const { return reviews_[i]; }

  /// nullptr when absent.
  const Review* find(const std::string& id) const;
  std::size_t count(Label label) const noexcept;

  friend bool operator==(const ReviewSet& a, const ReviewSet& b) {
    return a.name_ == b.name_ && a.reviews_ == b.reviews_;
  }

 private:
  std::string name_;
  std::vector<Review> reviews_;
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Counts by label and polarity, plus the total.
struct CorpusSummary {
  std::array<std::array<std::size_t, 3>, 2> counts{};  // [label][polarity]
  std::size_t total = 0;

  std::size_t label_total(Label l) const noexcept;
  std::size_t polarity_total(Polarity p) const noexcept;
};

CorpusSummary summarize(const ReviewSet& set);

/// Loads the published deceptive-opinion directory layout
/// (polarity dir / label dir / fold dir / *.txt). Only files below at least
/// one subdirectory of `root` are considered, and hidden entries are skipped,
/// so a top-level README does not count as a review. Labels come from a
/// case-insensitive substring search of the relative path ("deceptive"
/// first, then "truthful"); polarity likewise from "positive"/"negative".
ReviewSet load_ott_corpus(const std::filesystem::path& root);

struct CsvOptions {
  std::string text_col = "text";
  std::string label_col = "label";
  std::map<std::string, Label> label_map;
  char delimiter = ',';
  std::optional<std::string> polarity_col;
  std::map<std::string, Polarity> polarity_map{{"positive", Polarity::positive},
                                               {"negative", Polarity::negative}};
};

/// One review per data row, id "<filename>:<row-index>" with a 0-based
/// index over data rows. Label cells are matched after trimming.
ReviewSet load_csv_corpus(const std::filesystem::path& file, const CsvOptions& options);

/// Deterministic train/test partition. Both id lists are in corpus order.
struct SplitIndex {
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::uint64_t seed = 0;
  double ratio = 0.8;
  bool stratified = true;

  /// FNV-1a over the parameters and both id lists.
  std::string fingerprint() const;

  friend bool operator==(const SplitIndex&, const SplitIndex&) = default;
};

/// Shuffles each label's reviews with one xoshiro256** stream (deceptive
/// first), then gives the test side round((1-ratio)*n) reviews apportioned
/// across labels by largest remainder, so each label's test count is within
/// one of (1-ratio)*count_label.
SplitIndex stratified_split(const ReviewSet& set, double ratio, std::uint64_t seed);

/// Plain shuffled split without per-label apportionment.
SplitIndex shuffled_split(const ReviewSet& set, double ratio, std::uint64_t seed);

}  // namespace veritas
