#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <string>

namespace slspec {

/// Shortest round-trippable decimal at 17 significant digits; the CSV
/// number format project-wide.
inline std::string format_g17(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// Optional first line of every CSV: emission timestamp as a comment.
/// Suppressed by --no-header-timestamp so identical runs stay
/// byte-identical.
inline void write_timestamp_comment(std::ostream& os, const std::string& subcommand) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    os << "# slspec " << subcommand << " " << buf << "\n";
}

} // namespace slspec
