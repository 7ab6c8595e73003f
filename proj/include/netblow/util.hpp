#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace netblow {

/// Error type used for every validation, parse, and numerical failure.
/// Messages name the offending line, vertex, or quantity.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Formats a double with 17 significant digits (round-trip exact).
inline std::string g17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace netblow
