#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crashtopics::csv {

using Row = std::vector<std::string>;

// RFC-4180-style reader: quoted fields may contain commas, doubled quotes and
// embedded newlines; rows end at an unquoted LF (CR before it is stripped).
// Reads the whole stream; the first row is not treated specially here.
std::vector<Row> read(std::istream& in);

// Quotes a field only when it needs quoting.
std::string escape(const std::string& field);

void write_row(std::ostream& out, const Row& row);

// 17 significant digits: enough for doubles to round-trip exactly.
std::string format_double(double value);

}  // namespace crashtopics::csv
