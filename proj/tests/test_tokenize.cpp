#include <string>
#include <vector>

#include "doctest.h"

#include "crashtopics/tokenize.hpp"

using crashtopics::tokenize;
using Tokens = std::vector<std::string>;

TEST_CASE("splits on punctuation and lowercases") {
    CHECK(tokenize("Rear-ended at 3rd St.") == Tokens{"rear", "ended", "at", "3rd", "st"});
}

TEST_CASE("digit runs survive as tokens") {
    CHECK(tokenize("traveling at 25 mph") == Tokens{"traveling", "at", "25", "mph"});
    CHECK(tokenize("10th and Main") == Tokens{"10th", "and", "main"});
}

TEST_CASE("narrative fragment") {
    CHECK(tokenize("The AV, operating in autonomous mode, was rear-ended.") ==
          Tokens{"the", "av", "operating", "in", "autonomous", "mode", "was", "rear", "ended"});
}

TEST_CASE("empty and all-separator input") {
    CHECK(tokenize("").empty());
    CHECK(tokenize("  \t\r\n .,;:!?-- ").empty());
}

TEST_CASE("runs of separators collapse") {
    CHECK(tokenize("a--b  ,,  c") == Tokens{"a", "b", "c"});
}

TEST_CASE("idempotent on its own output") {
    const Tokens once = tokenize("Driver of the AV disengaged; vehicle #2 continued NB on El Camino.");
    std::string rejoined;
    for (const auto& t : once) {
        if (!rejoined.empty()) rejoined += ' ';
        rejoined += t;
    }
    CHECK(tokenize(rejoined) == once);
}

TEST_CASE("bytes above 0x7f are kept inside tokens") {
    // "café" in UTF-8; the accented byte pair stays put.
    const Tokens toks = tokenize("Caf\xc3\xa9 street");
    REQUIRE(toks.size() == 2);
    CHECK(toks[0] == "caf\xc3\xa9");
    CHECK(toks[1] == "street");
}

TEST_CASE("alphanumeric mixes hold together") {
    CHECK(tokenize("Model S85d") == Tokens{"model", "s85d"});
    CHECK(tokenize("I-280 on-ramp") == Tokens{"i", "280", "on", "ramp"});
}
