#pragma once

namespace crashtopics {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace crashtopics
