#pragma once

#include <charconv>
#include <ostream>
#include <string>
#include <system_error>
#include <type_traits>

namespace swarmlab {

// Shortest round-trip decimal form, always with '.' as the decimal
// separator. Locale settings never touch this path, which keeps report
// bytes identical across machines.
[[nodiscard]] inline std::string format_double(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline void csv_row(std::ostream& os) { os << '\n'; }

template <typename First, typename... Rest>
void csv_row(std::ostream& os, const First& first, const Rest&... rest) {
    if constexpr (std::is_same_v<First, double>) {
        os << format_double(first);
    } else {
        os << first;
    }
    if constexpr (sizeof...(rest) > 0) {
        os << ',';
    }
    csv_row(os, rest...);
}

} // namespace swarmlab
