#pragma once

// CSV ingestion and emission for minute-sampled frames. Input needs a header
// row and a timestamp column (RFC 3339 or epoch seconds); remaining columns
// are mapped to roles by name. Holes in the timestamp grid shorter than the
// split threshold are materialized as missing rows for interpolate_gaps;
// longer holes break the file into separate frames.

#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "wavecast/errors.hpp"
#include "wavecast/time_series.hpp"

namespace wavecast::ts {

struct CsvSchema {
    std::string timestamp_column = "timestamp";
    std::string target_column = "intake_level";
    std::vector<std::string> past_columns = {"sea_level", "temperature"};
    std::vector<std::string> future_columns = {"pump_effect"};
};

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

inline std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

// Days since 1970-01-01 for a proleptic Gregorian civil date.
inline std::int64_t days_from_civil(std::int64_t y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const auto yoe = static_cast<unsigned>(y - era * 400);
    const auto doy = static_cast<unsigned>((153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1);
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline std::int64_t parse_timestamp(const std::string& raw, std::size_t line_no) {
    const std::string s = trim(raw);
    if (s.empty()) throw parse_error("empty timestamp", line_no);
    const bool looks_like_date = s.find('-', 1) != std::string::npos &&
                                 (s.find('T') != std::string::npos ||
                                  s.find(' ') != std::string::npos);
    if (!looks_like_date) {
        char* end = nullptr;
        const long long v = std::strtoll(s.c_str(), &end, 10);
        if (end == s.c_str() || *end != '\0')
            throw parse_error("unparseable timestamp '" + s + "'", line_no);
        return v;
    }
    int year = 0, mon = 0, day = 0, hh = 0, mm = 0;
    double sec = 0.0;
    int consumed = 0;
    if (std::sscanf(s.c_str(), "%4d-%2d-%2d%*1[T ]%2d:%2d:%lf%n", &year, &mon, &day, &hh,
                    &mm, &sec, &consumed) != 6)
        throw parse_error("unparseable timestamp '" + s + "'", line_no);
    std::int64_t offset_s = 0;
    std::string zone = trim(s.substr(static_cast<std::size_t>(consumed)));
    if (!zone.empty() && zone != "Z") {
        int zh = 0, zm = 0;
        char sign = zone[0];
        if ((sign != '+' && sign != '-') ||
            std::sscanf(zone.c_str() + 1, "%2d:%2d", &zh, &zm) != 2)
            throw parse_error("unparseable timestamp zone '" + zone + "'", line_no);
        offset_s = (sign == '-' ? -1 : 1) * (zh * 3600 + zm * 60);
    }
    const std::int64_t days = days_from_civil(year, mon, day);
    return days * 86400 + hh * 3600 + mm * 60 + static_cast<std::int64_t>(sec) - offset_s;
}

inline double parse_value(const std::string& raw, std::size_t line_no) {
    const std::string s = trim(raw);
    if (s.empty() || s == "nan" || s == "NaN" || s == "NA")
        return std::numeric_limits<double>::quiet_NaN();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw parse_error("unparseable value '" + s + "'", line_no);
    return v;
}

}  // namespace detail

// Reads one CSV file into frames: one frame per contiguous run of the
// timestamp grid, runs broken where the hole between observations spans
// split_gap_minutes or more. Shorter holes become missing rows (every
// variable set to NaN) to be repaired by interpolate_gaps.
inline std::vector<TimeSeriesFrame> ingest_csv(const std::string& path,
                                               const CsvSchema& schema,
                                               int split_gap_minutes = 60) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");

    std::string line;
    if (!std::getline(in, line)) throw data_error("'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto header = detail::split_csv_row(line);

    auto column_of = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        throw data_error("'" + path + "' has no column '" + name + "'");
    };
    const std::size_t ts_col = column_of(schema.timestamp_column);
    std::vector<std::size_t> var_cols{column_of(schema.target_column)};
    for (const auto& c : schema.past_columns) var_cols.push_back(column_of(c));
    for (const auto& c : schema.future_columns) var_cols.push_back(column_of(c));
    const std::size_t n_vars = var_cols.size();

    std::vector<std::int64_t> stamps;
    std::vector<std::vector<double>> values(n_vars);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        const auto cells = detail::split_csv_row(line);
        if (cells.size() != header.size())
            throw parse_error("expected " + std::to_string(header.size()) +
                                  " fields, got " + std::to_string(cells.size()),
                              line_no);
        const std::int64_t t = detail::parse_timestamp(cells[ts_col], line_no);
        if (!stamps.empty() && t <= stamps.back())
            throw data_error("timestamps not strictly increasing at line " +
                             std::to_string(line_no));
        stamps.push_back(t);
        bool any_nan = false;
        std::vector<double> row(n_vars);
        for (std::size_t v = 0; v < n_vars; ++v) {
            row[v] = detail::parse_value(cells[var_cols[v]], line_no);
            any_nan = any_nan || std::isnan(row[v]);
        }
        // A row missing any variable is missing entirely; sequences stay aligned.
        for (std::size_t v = 0; v < n_vars; ++v)
            values[v].push_back(any_nan ? std::numeric_limits<double>::quiet_NaN()
                                        : row[v]);
    }
    if (stamps.empty()) throw data_error("'" + path + "' has no data rows");

    // Nominal step: the smallest observed spacing. Every other spacing must
    // sit on that grid.
    std::int64_t step = 0;
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        const std::int64_t d = stamps[i] - stamps[i - 1];
        if (step == 0 || d < step) step = d;
    }
    if (step == 0) step = 60;
    for (std::size_t i = 1; i < stamps.size(); ++i)
        if ((stamps[i] - stamps[i - 1]) % step != 0)
            throw data_error("timestamp off the nominal " + std::to_string(step) +
                             "s grid near line " + std::to_string(i + 2));

    auto base_name = path;
    if (const auto slash = base_name.find_last_of('/'); slash != std::string::npos)
        base_name = base_name.substr(slash + 1);

    std::vector<TimeSeriesFrame> out;
    auto new_frame = [&](std::int64_t start) {
        TimeSeriesFrame f;
        f.name = base_name + "/r" + std::to_string(out.size());
        f.start_epoch_s = start;
        f.step_seconds = step;
        f.target_name = schema.target_column;
        f.past_names = schema.past_columns;
        f.future_names = schema.future_columns;
        f.past.assign(schema.past_columns.size(), {});
        f.future.assign(schema.future_columns.size(), {});
        return f;
    };
    auto push_row = [&](TimeSeriesFrame& f, std::size_t i, bool missing) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        f.target.push_back(missing ? nan : values[0][i]);
        for (std::size_t p = 0; p < f.past.size(); ++p)
            f.past[p].push_back(missing ? nan : values[1 + p][i]);
        for (std::size_t q = 0; q < f.future.size(); ++q)
            f.future[q].push_back(missing ? nan : values[1 + f.past.size() + q][i]);
    };

    TimeSeriesFrame cur = new_frame(stamps[0]);
    push_row(cur, 0, false);
    for (std::size_t i = 1; i < stamps.size(); ++i) {
        const std::int64_t hole = stamps[i] - stamps[i - 1] - step;  // missing span, s
        if (hole >= static_cast<std::int64_t>(split_gap_minutes) * 60) {
            out.push_back(std::move(cur));
            cur = new_frame(stamps[i]);
        } else {
            for (std::int64_t m = 0; m < hole / step; ++m) push_row(cur, i, true);
        }
        push_row(cur, i, false);
    }
    out.push_back(std::move(cur));
    for (auto& f : out) f.check_shape();
    return out;
}

// Writes frames back-to-back; holes between frames reappear as grid jumps, so
// ingest_csv of the output reproduces the frame boundaries.
inline void write_csv(const std::vector<TimeSeriesFrame>& frames, const std::string& path) {
    std::ofstream outf(path);
    if (!outf) throw data_error("cannot write '" + path + "'");
    if (frames.empty()) throw usage_error("write_csv: no frames");
    outf << "timestamp";
    outf << ',' << frames[0].target_name;
    for (const auto& n : frames[0].past_names) outf << ',' << n;
    for (const auto& n : frames[0].future_names) outf << ',' << n;
    outf << '\n';
    char buf[32];
    for (const auto& f : frames) {
        f.check_shape();
        for (std::size_t i = 0; i < f.size(); ++i) {
            outf << f.timestamp(i);
            for (std::size_t v = 0; v < f.variable_count(); ++v) {
                const double x = f.variable(v)[i];
                if (std::isnan(x)) {
                    outf << ',';
                } else {
                    std::snprintf(buf, sizeof buf, "%.17g", x);
                    outf << ',' << buf;
                }
            }
            outf << '\n';
        }
    }
    if (!outf) throw data_error("write failed for '" + path + "'");
}

}  // namespace wavecast::ts
