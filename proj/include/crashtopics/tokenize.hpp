#pragma once

#include <string>
#include <vector>

namespace crashtopics {

// Splits on runs of non-alphanumeric bytes and lowercases ASCII letters.
// Digit runs stay ("3rd" survives as one token), hyphenated words split,
// bytes >= 0x80 (UTF-8 continuations) are kept inside tokens untouched.
std::vector<std::string> tokenize(const std::string& text);

}  // namespace crashtopics
