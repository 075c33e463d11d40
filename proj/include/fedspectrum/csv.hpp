#ifndef FEDSPECTRUM_CSV_HPP
#define FEDSPECTRUM_CSV_HPP
#pragma once

#include <algorithm>
#include <charconv>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bytes.hpp"
#include "federation.hpp"

namespace fedspectrum {

/// Shortest text that reads back to the same double.
inline std::string format_real(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline std::string format_optional(const std::optional<double>& v) { return v ? format_real(*v) : std::string{}; }

/// round,node,p_d,p_fa,accepted_count; rows sorted by (round, node).
inline std::string to_csv(const metrics_series& series) {
    auto rows = series.rows;
    std::stable_sort(rows.begin(), rows.end(), [](const metrics_row& a, const metrics_row& b) {
        return std::pair{a.round, a.node} < std::pair{b.round, b.node};
    });
    std::string out = "round,node,p_d,p_fa,accepted_count\n";
    for (const auto& r : rows) {
        out += std::to_string(r.round) + "," + std::to_string(r.node) + "," + format_optional(r.p_d) + "," +
               format_optional(r.p_fa) + "," + std::to_string(r.accepted_count) + "\n";
    }
    return out;
}

/// round,node_id,mean_accordance,accepted_flag; one row per submitted update.
inline std::string filter_csv(std::span<const round_report> reports) {
    std::string out = "round,node_id,mean_accordance,accepted_flag\n";
    for (const auto& rep : reports) {
        for (std::size_t i = 0; i < rep.submitted.size(); ++i) {
            const auto id = rep.submitted[i];
            const bool ok = std::find(rep.accepted.begin(), rep.accepted.end(), id) != rep.accepted.end();
            const auto acc = i < rep.mean_accordance.size() ? format_real(rep.mean_accordance[i]) : std::string{};
            out += std::to_string(rep.round_index) + "," + std::to_string(id) + "," + acc + "," +
                   (ok ? "1" : "0") + "\n";
        }
    }
    return out;
}

/// Two whitespace-separated columns, one point per line.
inline std::string plot_data(std::span<const std::pair<double, double>> points) {
    std::string out;
    for (const auto& [x, y] : points) out += format_real(x) + " " + format_real(y) + "\n";
    return out;
}

inline void write_text(const std::string& path, const std::string& text) {
    bytes::write_file(path, bytes::buffer(text.begin(), text.end()));
}

inline void emit_csv(const metrics_series& series, const std::string& path) { write_text(path, to_csv(series)); }

}  // namespace fedspectrum

#endif  // FEDSPECTRUM_CSV_HPP
