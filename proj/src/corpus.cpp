#include "veritas/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "veritas/csv.hpp"
#include "veritas/error.hpp"
#include "veritas/text.hpp"

namespace veritas {

namespace fs = std::filesystem;

std::string_view to_string(Polarity p) noexcept {
  switch (p) {
    case Polarity::positive: return "positive";
    case Polarity::negative: return "negative";
    case Polarity::unknown: break;
  }
  return "unknown";
}

ReviewSet::ReviewSet(std::string name, std::vector<Review> reviews)
    : name_(std::move(name)), reviews_(std::move(reviews)) {
  by_id_.reserve(reviews_.size());
  for (std::size_t i = 0; i < reviews_.size(); ++i) {
    const Review& r = reviews_[i];
    if (r.id.empty()) throw Error(Errc::InvalidArgument, "review at position " + std::to_string(i) + " has an empty id");
    if (text::trim(r.text).empty()) throw Error(Errc::EmptyReview, "review '" + r.id + "' has no text");
    if (!by_id_.emplace(r.id, i).second) throw Error(Errc::DuplicateId, "duplicate review id '" + r.id + "'");
  }
}

const Review* ReviewSet::find(const std::string& id) const {
  const auto it = by_id_.find(id);
  return it == by_id_.end() ? nullptr : &reviews_[it->second];
}

std::size_t ReviewSet::count(Label label) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(reviews_.begin(), reviews_.end(), [&](const Review& r) { return r.label == label; }));
}

std::size_t CorpusSummary::label_total(Label l) const noexcept {
  const auto& row = counts[index_of(l)];
  return row[0] + row[1] + row[2];
}

std::size_t CorpusSummary::polarity_total(Polarity p) const noexcept {
  const auto k = static_cast<std::size_t>(p);
  return counts[0][k] + counts[1][k];
}

CorpusSummary summarize(const ReviewSet& set) {
  CorpusSummary s;
  for (const auto& r : set.reviews()) {
    ++s.counts[index_of(r.label)][static_cast<std::size_t>(r.polarity)];
    ++s.total;
  }
  return s;
}

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

bool is_hidden(const fs::path& relative) {
  for (const auto& part : relative) {
    const auto s = part.string();
    if (!s.empty() && s[0] == '.') return true;
  }
  return false;
}

// "d_hilton_12" -> "hilton"; anything else keeps its stem.
std::string source_from_stem(const std::string& stem) {
  const auto first = stem.find('_');
  const auto last = stem.rfind('_');
  if (first == 1 && last != std::string::npos && last > first + 1 &&
      std::all_of(stem.begin() + static_cast<std::ptrdiff_t>(last) + 1, stem.end(),
                  [](char c) { return c >= '0' && c <= '9'; }) &&
      last + 1 < stem.size()) {
    return stem.substr(first + 1, last - first - 1);
  }
  return stem;
}

}  // namespace

ReviewSet load_ott_corpus(const fs::path& root) {
  if (!fs::is_directory(root)) throw Error(Errc::Io, "corpus root '" + root.string() + "' is not a directory");

  std::vector<fs::path> files;
  for (auto it = fs::recursive_directory_iterator(root); it != fs::recursive_directory_iterator(); ++it) {
    if (!it->is_regular_file()) continue;
    const fs::path rel = fs::relative(it->path(), root);
    if (is_hidden(rel)) continue;
    if (!rel.has_parent_path()) continue;  // top-level files are not reviews
    files.push_back(rel);
  }
  if (files.empty()) throw Error(Errc::CorpusEmpty, "no review files under '" + root.string() + "'");
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.generic_string() < b.generic_string(); });

  std::vector<Review> reviews;
  reviews.reserve(files.size());
  for (const auto& rel : files) {
    const std::string rel_str = rel.generic_string();
    const std::string lowered = text::ascii_lower(rel_str);

    Review r;
    if (lowered.find("deceptive") != std::string::npos) {
      r.label = Label::deceptive;
    } else if (lowered.find("truthful") != std::string::npos) {
      r.label = Label::truthful;
    } else {
      throw Error(Errc::MissingLabelPath, "'" + rel_str + "' encodes neither 'deceptive' nor 'truthful'");
    }
    if (lowered.find("positive") != std::string::npos) {
      r.polarity = Polarity::positive;
    } else if (lowered.find("negative") != std::string::npos) {
      r.polarity = Polarity::negative;
    }

    r.id = rel_str;
    for (std::size_t pos = 0; (pos = r.id.find('/', pos)) != std::string::npos; pos += 2) {
      r.id.replace(pos, 1, "__");
    }
    r.source = source_from_stem(rel.stem().string());

    std::string content = read_file(root / rel);
    if (!text::is_valid_utf8(content)) throw Error(Errc::EncodingError, "'" + rel_str + "' is not valid UTF-8");
    const auto trimmed = text::trim(content);
    if (trimmed.empty()) throw Error(Errc::EmptyReview, "'" + rel_str + "' is empty");
    r.text = std::string(trimmed);
    reviews.push_back(std::move(r));
  }

  std::string name = root.filename().string();
  if (name.empty()) name = root.parent_path().filename().string();
  return ReviewSet(std::move(name), std::move(reviews));
}

ReviewSet load_csv_corpus(const fs::path& file, const CsvOptions& options) {
  const std::string content = read_file(file);
  if (!text::is_valid_utf8(content)) throw Error(Errc::EncodingError, "'" + file.string() + "' is not valid UTF-8");

  auto rows = parse_csv(content, options.delimiter);
  if (rows.empty()) throw Error(Errc::CorpusEmpty, "'" + file.string() + "' has no header row");

  const auto& header = rows.front();
  auto column = [&](const std::string& name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (text::trim(header[i]) == name) return i;
    }
    throw Error(Errc::MissingColumn, "column '" + name + "' not found in '" + file.string() + "'");
  };
  const std::size_t text_idx = column(options.text_col);
  const std::size_t label_idx = column(options.label_col);
  std::optional<std::size_t> polarity_idx;
  if (options.polarity_col) polarity_idx = column(*options.polarity_col);

  const std::string filename = file.filename().string();
  std::vector<Review> reviews;
  reviews.reserve(rows.size() - 1);
  for (std::size_t row = 1; row < rows.size(); ++row) {
    const auto& cells = rows[row];
    const std::size_t data_row = row - 1;
    const std::string where = filename + " row " + std::to_string(data_row);
    const std::size_t needed = std::max({text_idx, label_idx, polarity_idx.value_or(0)});
    if (cells.size() <= needed) {
      // a lone empty cell is a blank line
      if (cells.size() == 1 && cells[0].empty()) continue;
      throw Error(Errc::MissingColumn, where + " has " + std::to_string(cells.size()) + " cells");
    }

    Review r;
    r.id = filename + ":" + std::to_string(data_row);
    const std::string label_cell(text::trim(cells[label_idx]));
    const auto label_it = options.label_map.find(label_cell);
    if (label_it == options.label_map.end()) {
      throw Error(Errc::UnmappedLabel, where + ": label '" + label_cell + "' is not in the label map");
    }
    r.label = label_it->second;
    if (polarity_idx) {
      const std::string cell(text::trim(cells[*polarity_idx]));
      const auto p = options.polarity_map.find(cell);
      r.polarity = p == options.polarity_map.end() ? Polarity::unknown : p->second;
    }
    const auto body = text::trim(cells[text_idx]);
    if (body.empty()) throw Error(Errc::EmptyReview, where + " has empty text");
    r.text = std::string(body);
    r.source = filename;
    reviews.push_back(std::move(r));
  }
  if (reviews.empty()) throw Error(Errc::CorpusEmpty, "'" + file.string() + "' has no data rows");
  return ReviewSet(filename, std::move(reviews));
}

}  // namespace veritas
