#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "singsys/cli/scenario.hpp"

namespace singsys::cli {

inline constexpr std::string_view kCsvHeader = "k,T,C,I,G";

/// One year of output. C is undefined at k = 0 and I at k < 2.
struct CsvRow {
    std::int64_t k = 0;
    double T = 0.0;
    std::optional<double> C;
    std::optional<double> I;
    double G = 0.0;

    bool operator==(const CsvRow&) const = default;
};

/// Shortest representation that parses back to the same double.
inline std::string format_shortest(double x) {
    if (x == 0.0) {
        x = 0.0;  // drop the sign of negative zero
    }
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

inline std::string write_csv(const std::vector<CsvRow>& rows) {
    std::string out(kCsvHeader);
    out += '\n';
    for (const auto& r : rows) {
        out += std::to_string(r.k);
        out += ',';
        out += format_shortest(r.T);
        out += ',';
        if (r.C) out += format_shortest(*r.C);
        out += ',';
        if (r.I) out += format_shortest(*r.I);
        out += ',';
        out += format_shortest(r.G);
        out += '\n';
    }
    return out;
}

inline std::vector<CsvRow> parse_csv(std::string_view text) {
    auto next_line = [&text]() {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
        return line;
    };
    if (next_line() != kCsvHeader) {
        throw ConfigError("CSV header must be '" + std::string(kCsvHeader) + "'");
    }
    std::vector<CsvRow> rows;
    while (!text.empty()) {
        std::string_view line = next_line();
        std::array<std::string_view, 5> fields;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const auto comma = line.find(',');
            if ((comma == std::string_view::npos) != (i + 1 == fields.size())) {
                throw ConfigError("CSV row must have 5 fields");
            }
            fields[i] = line.substr(0, comma);
            line.remove_prefix(comma == std::string_view::npos ? line.size() : comma + 1);
        }
        CsvRow row;
        row.k = detail::parse_integer("k", fields[0]);
        row.T = detail::parse_real("T", fields[1]);
        if (!fields[2].empty()) row.C = detail::parse_real("C", fields[2]);
        if (!fields[3].empty()) row.I = detail::parse_real("I", fields[3]);
        row.G = detail::parse_real("G", fields[4]);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace singsys::cli
