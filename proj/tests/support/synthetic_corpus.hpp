#pragma once

// Writes a synthetic corpus in the published hotel-review directory layout.
// Deceptive and truthful reviews draw from overlapping vocabularies, so the
// classes are separable but not trivially so.

#include <array>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "veritas/rng.hpp"

namespace veritas::testing {

struct SyntheticCorpusOptions {
  std::size_t per_cell = 400;  // reviews per (polarity, label) directory
  std::size_t folds = 5;
  std::uint64_t seed = 7;
  double signal = 0.18;  // share of tokens drawn from the label's own vocabulary
  std::size_t filler_vocabulary = 6000;  // rare words, roughly Zipf distributed
};

inline const std::vector<std::string>& synthetic_shared_words() {
  static const std::vector<std::string> words = {
      "the",    "hotel",   "room",    "was",      "and",     "we",      "stayed", "staff",   "a",       "to",
      "night",  "bed",     "of",      "in",       "with",    "very",    "for",    "it",      "at",      "desk",
      "check",  "service", "breakfast", "were",   "had",     "our",     "is",     "this",    "on",      "would",
      "again",  "clean",   "nice",    "lobby",    "view",    "pool",    "price",  "restaurant", "chicago", "trip",
      "time",   "weekend", "area",    "door",     "parking", "food",    "coffee", "shower",  "towels",  "elevator"};
  return words;
}

inline const std::array<std::vector<std::string>, 2>& synthetic_label_words() {
  static const std::array<std::vector<std::string>, 2> words = {
      std::vector<std::string>{"i",        "my",      "husband", "vacation", "luxury",   "experience", "amazing",
                               "wife",     "family",  "business", "recommend", "definitely", "perfect", "terrible",
                               "horrible", "worst",   "best",    "wonderful", "relaxing", "anniversary"},
      std::vector<std::string>{"location", "floor",   "bathroom", "street", "small",   "walk",     "block",
                               "$",        "michigan", "avenue",  "minutes", "window", "noise",    "2",
                               "3",        "ok",      "though",   "however", "bar",    "large"}};
  return words;
}

inline const std::vector<std::string>& synthetic_hotels() {
  static const std::vector<std::string> hotels = {"affinia", "allegro", "amalfi",    "ambassador", "conrad",
                                                  "fairmont", "hardrock", "hilton",  "homewood",   "hyatt",
                                                  "intercontinental", "james", "knickerbocker", "monaco", "omni",
                                                  "palmer",  "sheraton", "sofitel", "swissotel",  "talbott"};
  return hotels;
}

/// Returns the number of reviews written (4 * per_cell).
inline std::size_t write_synthetic_ott_corpus(const std::filesystem::path& root,
                                               const SyntheticCorpusOptions& opt = {}) {
  namespace fs = std::filesystem;
  Xoshiro256ss rng(opt.seed);
  const auto& shared = synthetic_shared_words();
  const auto& own = synthetic_label_words();
  const auto& hotels = synthetic_hotels();

  fs::create_directories(root);
  std::ofstream(root / "README.txt") << "synthetic corpus\n";

  const std::array<std::string, 2> polarity_dirs = {"positive_polarity", "negative_polarity"};
  std::size_t written = 0;
  for (std::size_t p = 0; p < 2; ++p) {
    const std::array<std::string, 2> label_dirs = {
        "deceptive_from_MTurk", p == 0 ? "truthful_from_TripAdvisor" : "truthful_from_Web"};
    for (std::size_t l = 0; l < 2; ++l) {
      const char prefix = l == 0 ? 'd' : 't';
      for (std::size_t i = 0; i < opt.per_cell; ++i) {
        const std::size_t fold = i * opt.folds / opt.per_cell + 1;
        const fs::path dir = root / polarity_dirs[p] / label_dirs[l] / ("fold" + std::to_string(fold));
        fs::create_directories(dir);
        const std::string& hotel = hotels[i % hotels.size()];
        const std::string name = std::string(1, prefix) + "_" + hotel + "_" + std::to_string(i / hotels.size() + 1);

        std::string text;
        std::string filler;
        const std::size_t len = 40 + rng.bounded(80);
        for (std::size_t t = 0; t < len; ++t) {
          const double u = rng.uniform();
          const std::string* w;
          if (u < opt.signal) {
            w = &own[l][rng.bounded(own[l].size())];
          } else if (u < opt.signal * 1.6) {
            w = &own[1 - l][rng.bounded(own[1 - l].size())];
          } else if (opt.filler_vocabulary > 0 && rng.bounded(2) == 0) {
            // log-uniform rank: a few filler words are common, most are rare
            const auto rank = static_cast<std::size_t>(
                std::pow(static_cast<double>(opt.filler_vocabulary), rng.uniform()));
            filler = "w" + std::to_string(rank);
            w = &filler;
          } else {
            w = &shared[rng.bounded(shared.size())];
          }
          if (!text.empty()) text += ' ';
          if (t == 0 && !w->empty()) {
            std::string cap = *w;
            cap[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(cap[0])));
            text += cap;
          } else {
            text += *w;
          }
          if (rng.bounded(12) == 0) text += rng.bounded(2) ? "." : ",";
        }
        std::ofstream(dir / (name + ".txt")) << text << ".\n";
        ++written;
      }
    }
  }
  return written;
}

}  // namespace veritas::testing
