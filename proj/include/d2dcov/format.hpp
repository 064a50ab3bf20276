#pragma once

#include <string>

namespace d2d {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

}  // namespace d2d
