#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dbtrail::csv {

using Field = std::optional<std::string>;
using Record = std::vector<Field>;

/// Parses RFC 4180 CSV. An empty field (quoted or not) reads as null.
/// Throws ParseError on an unterminated quote or stray quote character.
std::vector<Record> parse(std::string_view text);

/// Serializes one record with a trailing "\n". Null writes as an empty field.
std::string format_record(const Record& record);

} // namespace dbtrail::csv
