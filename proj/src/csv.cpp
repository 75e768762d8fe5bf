#include "veritas/csv.hpp"

#include "veritas/error.hpp"

namespace veritas {

std::vector<std::vector<std::string>> parse_csv(std::string_view input, char delimiter) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;  // distinguishes "" at end of input from nothing

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
  };

  for (std::size_t i = 0; i < input.size(); ++i) {
    const char c = input[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < input.size() && input[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    if (c == '"' && field.empty()) {
      in_quotes = true;
      field_started = true;
    } else if (c == delimiter) {
      end_field();
      field_started = true;
    } else if (c == '\r' && i + 1 < input.size() && input[i + 1] == '\n') {
      // CRLF handled on the LF
    } else if (c == '\n') {
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
  }
  if (in_quotes) throw Error(Errc::EncodingError, "unterminated quoted field in CSV input");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

}  // namespace veritas
