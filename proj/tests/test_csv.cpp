#include <cmath>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

#include "crashtopics/csv.hpp"

using namespace crashtopics::csv;

namespace {

std::vector<Row> parse(const std::string& text) {
    std::istringstream in(text);
    return read(in);
}

}  // namespace

TEST_CASE("plain rows split on commas and newlines") {
    const auto rows = parse("a,b,c\nd,e,f\n");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == Row{"a", "b", "c"});
    CHECK(rows[1] == Row{"d", "e", "f"});
}

TEST_CASE("quoted fields keep commas, quotes and newlines") {
    const auto rows = parse("\"a,b\",\"say \"\"hi\"\"\",\"two\nlines\"\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == Row{"a,b", "say \"hi\"", "two\nlines"});
}

TEST_CASE("CRLF line endings and missing final newline") {
    const auto rows = parse("a,b\r\nc,d");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == Row{"a", "b"});
    CHECK(rows[1] == Row{"c", "d"});
}

TEST_CASE("empty fields and empty trailing field") {
    const auto rows = parse(",x,\n");
    REQUIRE(rows.size() == 1);
    CHECK(rows[0] == Row{"", "x", ""});
}

TEST_CASE("escape quotes only when needed") {
    CHECK(escape("plain") == "plain");
    CHECK(escape("a,b") == "\"a,b\"");
    CHECK(escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
    CHECK(escape("two\nlines") == "\"two\nlines\"");
    CHECK(escape("") == "");
}

TEST_CASE("write then read round trips") {
    const std::vector<Row> rows = {
        {"id", "text"},
        {"R1", "Stopped, then \"struck\"."},
        {"R2", "line one\nline two"},
    };
    std::ostringstream out;
    for (const auto& r : rows) write_row(out, r);
    CHECK(parse(out.str()) == rows);
}

TEST_CASE("format_double round trips doubles exactly") {
    const double values[] = {0.0,   1.0,        -1.5,       1.0 / 3.0,
                             1e-12, 0.1 + 0.2,  123456.789, 2.2250738585072014e-308};
    for (double v : values) {
        const std::string s = format_double(v);
        CHECK(std::strtod(s.c_str(), nullptr) == v);
    }
}
