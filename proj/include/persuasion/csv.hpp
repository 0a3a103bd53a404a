#pragma once
#include <charconv>
#include <string>

namespace persuasion {

// Shortest decimal representation that round-trips to the same double, so CSV
// diffs are reproducible and re-parsed values are exact.
inline std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace persuasion
