#pragma once

// CSV output with round-trip exact doubles (17 significant digits).

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace eotrans::csv {

inline std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// A cell is either a number or a bare label.
struct Cell {
    Cell(double v) : text(format_double(v)) {}
    Cell(std::string_view s) : text(s) {}
    Cell(const char* s) : text(s) {}
    Cell(const std::string& s) : text(s) {}
    std::string text;
};

inline void write_row(std::ostream& out, std::initializer_list<Cell> cells)
{
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out << ',';
        out << c.text;
        first = false;
    }
    out << '\n';
}

inline void write_row(std::ostream& out, const std::vector<Cell>& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out << ',';
        out << cells[i].text;
    }
    out << '\n';
}

} // namespace eotrans::csv
