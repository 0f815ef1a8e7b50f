#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "polypair/complex.hpp"
#include "polypair/errors.hpp"
#include "polypair/polynomial.hpp"

namespace polypair {

/// Shortest round-trippable decimal rendering (17 significant digits).  All
/// file output funnels through this so that identical runs produce
/// byte-identical files.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && (s[a] == ' ' || s[a] == '\t')) ++a;
    while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
    return s.substr(a, b - a);
}

inline double parse_double_field(const std::string& field, std::size_t row) {
    const std::string t = trim(field);
    if (t.empty()) throw ParseError("empty numeric field", row);
    const char* begin = t.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end != begin + t.size())
        throw ParseError("malformed numeric field '" + t + "'", row);
    if (!std::isfinite(v))
        throw ParseError("non-finite value '" + t + "' rejected", row);
    return v;
}

} // namespace detail

/// Parses one "re,im" pair.  `row` is forwarded into any ParseError so file
/// readers can cite the offending line (0 for non-file contexts such as
/// command-line flags).
inline Complex parse_complex_pair(const std::string& text, std::size_t row = 0) {
    const std::size_t comma = text.find(',');
    if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
        throw ParseError("expected exactly one comma in 're,im' pair, got '" + text + "'", row);
    return Complex{detail::parse_double_field(text.substr(0, comma), row),
                   detail::parse_double_field(text.substr(comma + 1), row)};
}

/// Reads a root CSV: header "re,im" on line 1, one decimal "re,im" pair per
/// subsequent line.  Rows are cited 1-based counting the header; blank lines
/// (e.g. a trailing newline) are skipped.  NaN/Inf entries are rejected.
inline RootSet ingest_roots(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("ingest_roots: cannot open '" + path + "'");
    std::string line;
    std::size_t row = 0;
    std::vector<Complex> pts;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++row;
        const std::string t = detail::trim(line);
        if (!saw_header) {
            if (t != "re,im")
                throw ParseError("expected header 're,im', got '" + t + "'", row);
            saw_header = true;
            continue;
        }
        if (t.empty()) continue;
        pts.push_back(parse_complex_pair(t, row));
    }
    if (in.bad()) throw IoError("ingest_roots: read failure on '" + path + "'");
    if (!saw_header) throw ParseError("empty file: expected header 're,im'", 1);
    if (pts.size() < 2)
        throw ParseError("need at least 2 root rows, found " + std::to_string(pts.size()), row);
    return make_root_set(std::move(pts));
}

/// Writes a point cloud as CSV with header "re,im" (LF endings, 17-digit
/// round-trippable floats, re-ingestable by ingest_roots).
inline void write_points_csv(const std::string& path, const std::vector<Complex>& points) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_points_csv: cannot open '" + path + "' for writing");
    out << "re,im\n";
    for (const Complex& p : points)
        out << format_double(p.real()) << ',' << format_double(p.imag()) << '\n';
    out.flush();
    if (!out) throw IoError("write_points_csv: write failure on '" + path + "'");
}

/// One labeled point series for plot emission ("roots", "cps", "predicted",
/// "clump_<id>", ...).
using PlotSeries = std::pair<std::string, std::vector<Complex>>;

/// Writes labeled point sets as CSV with header "series,re,im" — directly
/// consumable by any plotting tool.  Empty series contribute no rows.
inline void emit_plot_data(const std::vector<PlotSeries>& series, const std::string& path) {
    for (const PlotSeries& s : series) {
        if (s.first.empty() || s.first.find(',') != std::string::npos ||
            s.first.find('\n') != std::string::npos)
            throw ArgumentError("emit_plot_data: series label '" + s.first +
                                "' must be nonempty and comma/newline free");
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("emit_plot_data: cannot open '" + path + "' for writing");
    out << "series,re,im\n";
    for (const PlotSeries& s : series)
        for (const Complex& p : s.second)
            out << s.first << ',' << format_double(p.real()) << ','
                << format_double(p.imag()) << '\n';
    out.flush();
    if (!out) throw IoError("emit_plot_data: write failure on '" + path + "'");
}

/// Writes pre-rendered lines (JSONL records) with LF endings.
inline void write_lines(const std::string& path, const std::vector<std::string>& lines) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("write_lines: cannot open '" + path + "' for writing");
    for (const std::string& l : lines) out << l << '\n';
    out.flush();
    if (!out) throw IoError("write_lines: write failure on '" + path + "'");
}

} // namespace polypair
