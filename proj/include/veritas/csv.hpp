#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace veritas {

/// RFC-4180 reader: quoted fields may contain the delimiter, CR/LF and
/// doubled quotes. Both LF and CRLF record terminators are accepted.
/// A trailing empty line does not produce a record.
std::vector<std::vector<std::string>> parse_csv(std::string_view input, char delimiter = ',');

}  // namespace veritas
