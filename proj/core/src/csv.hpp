#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace gnt::csv {

struct Row {
  std::size_t line = 0;  // 1-based line of the record start
  std::vector<std::string> fields;
};

// RFC 4180 records: comma separated, double-quote quoting with "" escapes,
// CRLF or LF line ends. Blank lines are skipped. Throws ParseError on an
// unterminated quote.
std::vector<Row> parse(std::string_view text, std::string_view source);

// Parses and checks the header row equals `header`; returns the data rows,
// each verified to have header.size() fields.
std::vector<Row> parse_with_header(std::string_view text, const std::vector<std::string>& header,
                                   std::string_view source);

std::string quote(std::string_view field);

std::string read_file(const std::filesystem::path& path);

}  // namespace gnt::csv
