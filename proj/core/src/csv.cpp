#include "csv.hpp"

#include <fstream>
#include <sstream>

#include "gnt/error.hpp"

namespace gnt::csv {

std::vector<Row> parse(std::string_view text, std::string_view source) {
  std::vector<Row> rows;
  Row row;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t line = 1;
  row.line = 1;

  auto end_field = [&] {
    row.fields.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    bool blank = row.fields.size() == 1 && row.fields[0].empty();
    if (!blank) rows.push_back(std::move(row));
    row = Row{};
  };

  if (text.size() >= 3 && text.substr(0, 3) == "\xEF\xBB\xBF") text.remove_prefix(3);

  for (std::size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (field_started || !field.empty()) {
          throw Error(ErrorCode::ParseError,
                      std::string(source) + ":" + std::to_string(line) + ": stray quote inside an unquoted field");
        }
        quoted = true;
        field_started = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        break;
      case '\n':
        end_field();
        end_row();
        ++line;
        row.line = line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (quoted) {
    throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(row.line) + ": unterminated quote");
  }
  if (field_started || !field.empty() || !row.fields.empty()) {
    end_field();
    end_row();
  }
  return rows;
}

std::vector<Row> parse_with_header(std::string_view text, const std::vector<std::string>& header,
                                   std::string_view source) {
  auto rows = parse(text, source);
  if (rows.empty()) {
    throw Error(ErrorCode::ParseError, std::string(source) + ": missing header row");
  }
  auto& head = rows.front().fields;
  for (auto& h : head) {
    while (!h.empty() && (h.back() == ' ')) h.pop_back();
    while (!h.empty() && (h.front() == ' ')) h.erase(h.begin());
  }
  if (head != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw Error(ErrorCode::ParseError, std::string(source) + ":1: expected header '" + want + "'");
  }
  rows.erase(rows.begin());
  for (const auto& r : rows) {
    if (r.fields.size() != header.size()) {
      throw Error(ErrorCode::ParseError, std::string(source) + ":" + std::to_string(r.line) + ": expected " +
                                             std::to_string(header.size()) + " fields, got " +
                                             std::to_string(r.fields.size()));
    }
  }
  return rows;
}

std::string quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace gnt::csv
