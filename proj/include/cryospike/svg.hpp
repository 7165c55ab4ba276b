#pragma once

#include <string>
#include <vector>

namespace cryospike {

/// Rectangular CSV with a header row; cells stay strings until a plot
/// routine interprets them.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index, or -1 when the header lacks the name.
    [[nodiscard]] int column(const std::string& name) const;
};

/// Split CSV text; every data row must have exactly as many cells as the
/// header. Throws ConfigError on ragged rows or a missing header.
[[nodiscard]] CsvTable parse_csv(const std::string& text);

/// Waveform plot: x from the time column, one polyline per voltage column
/// (header names ending in "_V"). Throws ConfigError when the time column
/// is absent, no voltage column exists, or there are no data rows.
[[nodiscard]] std::string svg_trace(const CsvTable& table, const std::string& time_column = "t_s");

/// Per-group line plot: rows sharing a group label become one polyline over
/// (x, y); rows whose optional "ok" column reads 0 are skipped.
[[nodiscard]] std::string svg_sweep(const CsvTable& table, const std::string& x_column,
                                    const std::string& y_column,
                                    const std::string& group_column = "combo");

/// Per-group marker plot over (x, y); one <g> element per group label.
[[nodiscard]] std::string svg_scatter(const CsvTable& table, const std::string& x_column,
                                      const std::string& y_column,
                                      const std::string& group_column = "combo");

/// Binned counts of one numeric column as rectangles.
[[nodiscard]] std::string svg_histogram(const CsvTable& table, const std::string& column,
                                        int bins = 50);

} // namespace cryospike
