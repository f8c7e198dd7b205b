#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace lasernoise::detail {

// Shortest decimal form that round-trips the double exactly.
[[nodiscard]] inline std::string format_shortest(double value) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        return "nan";
    }
    return std::string(buf, ptr);
}

}  // namespace lasernoise::detail
