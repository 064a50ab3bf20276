#pragma once

namespace d2d {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace d2d
