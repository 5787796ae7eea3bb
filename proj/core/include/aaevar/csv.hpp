#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace aaevar::csv {

using Row = std::vector<std::string>;

// RFC 4180 reader: quoted fields, doubled quotes, embedded newlines, LF or
// CRLF. A trailing empty line is ignored. Throws ParseError on an
// unterminated quote.
std::vector<Row> parse(std::string_view text);

// Parses and checks the first row equals `header` exactly. Returns the data
// rows; every row must have header.size() fields.
std::vector<Row> parse_with_header(std::string_view text, const std::vector<std::string>& header);

std::string escape(std::string_view field);
std::string format_row(const Row& row);  // LF-terminated

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace aaevar::csv
