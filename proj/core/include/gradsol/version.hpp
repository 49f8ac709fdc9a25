#pragma once

namespace gradsol {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace gradsol
