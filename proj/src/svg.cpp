#include "cryospike/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <sstream>

#include "cryospike/errors.hpp"

namespace cryospike {
namespace {

constexpr double kWidth = 800.0, kHeight = 500.0;
constexpr double kLeft = 72.0, kRight = 24.0, kTop = 24.0, kBottom = 56.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr int kPaletteSize = 8;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

double cell_number(const CsvTable& t, std::size_t row, int col, const std::string& name) {
    const std::string& s = t.rows[row][static_cast<std::size_t>(col)];
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw ConfigError("column \"" + name + "\" holds a non-numeric cell \"" + s + "\"");
    return v;
}

int require_column(const CsvTable& t, const std::string& name) {
    const int c = t.column(name);
    if (c < 0) {
        std::string have;
        for (const std::string& h : t.header) {
            if (!have.empty()) have += ", ";
            have += h;
        }
        throw ConfigError("plot input lacks column \"" + name + "\" (columns: " + have + ")");
    }
    return c;
}

void require_rows(const CsvTable& t) {
    if (t.rows.empty()) throw ConfigError("plot input has no data rows");
}

/// Widen a degenerate range so a flat series still spans the plot box.
void pad_range(double& lo, double& hi) {
    if (hi > lo) return;
    const double pad = std::abs(lo) > 0.0 ? std::abs(lo) * 0.05 : 0.5;
    lo -= pad;
    hi += pad;
}

struct Frame {
    double xlo, xhi, ylo, yhi;

    [[nodiscard]] double px(double x) const {
        return kLeft + (x - xlo) / (xhi - xlo) * (kWidth - kLeft - kRight);
    }
    [[nodiscard]] double py(double y) const {
        return kHeight - kBottom - (y - ylo) / (yhi - ylo) * (kHeight - kTop - kBottom);
    }
};

void open_svg(std::ostringstream& out) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << " " << kHeight << "\">\n"
        << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
}

void draw_axes(std::ostringstream& out, const Frame& f, const std::string& xlabel,
               const std::string& ylabel) {
    const double x0 = kLeft, x1 = kWidth - kRight;
    const double y0 = kHeight - kBottom, y1 = kTop;
    out << "<g stroke=\"black\" fill=\"none\">\n"
        << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x1)
        << "\" y2=\"" << fmt(y0) << "\"/>\n"
        << "<line x1=\"" << fmt(x0) << "\" y1=\"" << fmt(y0) << "\" x2=\"" << fmt(x0)
        << "\" y2=\"" << fmt(y1) << "\"/>\n</g>\n";
    out << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = f.xlo + (f.xhi - f.xlo) * i / 4.0;
        const double yv = f.ylo + (f.yhi - f.ylo) * i / 4.0;
        out << "<text x=\"" << fmt(f.px(xv)) << "\" y=\"" << fmt(y0 + 18.0)
            << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        out << "<text x=\"" << fmt(x0 - 6.0) << "\" y=\"" << fmt(f.py(yv) + 4.0)
            << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    out << "<text x=\"" << fmt((x0 + x1) / 2.0) << "\" y=\"" << fmt(kHeight - 12.0)
        << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
    out << "<text x=\"16\" y=\"" << fmt((y0 + y1) / 2.0)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " << fmt((y0 + y1) / 2.0)
        << ")\">" << ylabel << "</text>\n</g>\n";
}

void legend(std::ostringstream& out, const std::vector<std::string>& names) {
    out << "<g font-family=\"sans-serif\" font-size=\"12\">\n";
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double y = kTop + 16.0 * static_cast<double>(i) + 8.0;
        const char* color = kPalette[i % kPaletteSize];
        out << "<rect x=\"" << fmt(kWidth - kRight - 130.0) << "\" y=\"" << fmt(y - 8.0)
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
            << "<text x=\"" << fmt(kWidth - kRight - 116.0) << "\" y=\"" << fmt(y + 1.0)
            << "\" fill=\"black\">" << names[i] << "</text>\n";
    }
    out << "</g>\n";
}

std::string close_svg(std::ostringstream& out) {
    out << "</svg>\n";
    return out.str();
}

struct Series {
    std::string name;
    std::vector<double> x, y;
};

std::string line_plot(const std::vector<Series>& series, const std::string& xlabel,
                      const std::string& ylabel, bool markers) {
    double xlo = series[0].x[0], xhi = xlo, ylo = series[0].y[0], yhi = ylo;
    for (const Series& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    pad_range(xlo, xhi);
    pad_range(ylo, yhi);
    const Frame f{xlo, xhi, ylo, yhi};
    std::ostringstream out;
    open_svg(out);
    draw_axes(out, f, xlabel, ylabel);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const Series& s = series[si];
        const char* color = kPalette[si % kPaletteSize];
        if (markers) {
            out << "<g fill=\"" << color << "\">\n";
            for (std::size_t i = 0; i < s.x.size(); ++i)
                out << "<circle cx=\"" << fmt(f.px(s.x[i])) << "\" cy=\"" << fmt(f.py(s.y[i]))
                    << "\" r=\"2.2\"/>\n";
            out << "</g>\n";
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                if (i) out << ' ';
                out << fmt(f.px(s.x[i])) << ',' << fmt(f.py(s.y[i]));
            }
            out << "\"/>\n";
        }
    }
    if (series.size() > 1 || markers) {
        std::vector<std::string> names;
        for (const Series& s : series) names.push_back(s.name);
        legend(out, names);
    }
    return close_svg(out);
}

/// Rows bucketed by a label column, buckets ordered by first appearance.
std::vector<Series> group_rows(const CsvTable& t, int xc, int yc, int gc,
                               const std::string& x_name, const std::string& y_name) {
    std::vector<Series> series;
    const int ok_col = t.column("ok");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        if (ok_col >= 0 && t.rows[r][static_cast<std::size_t>(ok_col)] == "0") continue;
        const std::string& label = t.rows[r][static_cast<std::size_t>(gc)];
        Series* dst = nullptr;
        for (Series& s : series)
            if (s.name == label) dst = &s;
        if (!dst) {
            series.push_back({label, {}, {}});
            dst = &series.back();
        }
        dst->x.push_back(cell_number(t, r, xc, x_name));
        dst->y.push_back(cell_number(t, r, yc, y_name));
    }
    if (series.empty()) throw ConfigError("plot input has no usable data rows");
    return series;
}

} // namespace

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

CsvTable parse_csv(const std::string& text) {
    CsvTable t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (line.back() == ',') cells.push_back("");
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            if (cells.size() != t.header.size())
                throw ConfigError("csv row has " + std::to_string(cells.size()) +
                                  " cells, header has " + std::to_string(t.header.size()));
            t.rows.push_back(std::move(cells));
        }
    }
    if (t.header.empty()) throw ConfigError("csv input has no header row");
    return t;
}

std::string svg_trace(const CsvTable& table, const std::string& time_column) {
    require_rows(table);
    const int tc = require_column(table, time_column);
    std::vector<Series> series;
    for (const std::string& name : table.header)
        if (name.size() > 2 && name.compare(name.size() - 2, 2, "_V") == 0)
            series.push_back({name, {}, {}});
    if (series.empty()) throw ConfigError("trace plot needs at least one \"_V\" voltage column");
    for (Series& s : series) {
        const int vc = require_column(table, s.name);
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            s.x.push_back(cell_number(table, r, tc, time_column));
            s.y.push_back(cell_number(table, r, vc, s.name));
        }
    }
    return line_plot(series, time_column, "voltage [V]", false);
}

std::string svg_sweep(const CsvTable& table, const std::string& x_column,
                      const std::string& y_column, const std::string& group_column) {
    require_rows(table);
    const int xc = require_column(table, x_column);
    const int yc = require_column(table, y_column);
    const int gc = require_column(table, group_column);
    return line_plot(group_rows(table, xc, yc, gc, x_column, y_column), x_column, y_column,
                     false);
}

std::string svg_scatter(const CsvTable& table, const std::string& x_column,
                        const std::string& y_column, const std::string& group_column) {
    require_rows(table);
    const int xc = require_column(table, x_column);
    const int yc = require_column(table, y_column);
    const int gc = require_column(table, group_column);
    return line_plot(group_rows(table, xc, yc, gc, x_column, y_column), x_column, y_column,
                     true);
}

std::string svg_histogram(const CsvTable& table, const std::string& column, int bins) {
    require_rows(table);
    if (bins < 1) throw ConfigError("histogram needs at least one bin");
    const int c = require_column(table, column);
    std::vector<double> xs;
    xs.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        xs.push_back(cell_number(table, r, c, column));
    double lo = xs[0], hi = xs[0];
    for (double x : xs) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    pad_range(lo, hi);
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (double x : xs) {
        int b = static_cast<int>((x - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        ++counts[static_cast<std::size_t>(b)];
    }
    const int peak = *std::max_element(counts.begin(), counts.end());
    const Frame f{lo, hi, 0.0, static_cast<double>(peak)};
    std::ostringstream out;
    open_svg(out);
    draw_axes(out, f, column, "count");
    out << "<g fill=\"" << kPalette[0] << "\" stroke=\"white\" stroke-width=\"0.5\">\n";
    for (int b = 0; b < bins; ++b) {
        const double bx0 = lo + (hi - lo) * b / bins;
        const double bx1 = lo + (hi - lo) * (b + 1) / bins;
        const double top = f.py(counts[static_cast<std::size_t>(b)]);
        out << "<rect x=\"" << fmt(f.px(bx0)) << "\" y=\"" << fmt(top) << "\" width=\""
            << fmt(f.px(bx1) - f.px(bx0)) << "\" height=\""
            << fmt(f.py(0.0) - top) << "\"/>\n";
    }
    out << "</g>\n";
    return close_svg(out);
}

} // namespace cryospike
