#pragma once

#include <charconv>
#include <cstdio>
#include <string>

namespace spotsim {

// Shortest decimal form that parses back to exactly the same double.
inline std::string format_roundtrip(double value) {
    char buf[40];
    for (const int prec : {15, 16, 17}) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        double back = 0.0;
        const auto [ptr, ec] = std::from_chars(buf, buf + sizeof buf, back);
        (void)ptr;
        if (ec == std::errc() && back == value) break;
    }
    return buf;
}

// Fixed presentation precision for emitted time series: 6 significant
// digits, trailing zeros stripped.
inline std::string format_sig6(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

}  // namespace spotsim
