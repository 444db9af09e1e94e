#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace bbfem {

using ReportValue = std::variant<std::int64_t, double, std::string>;

/// Tabular experiment output. CSV layout:
///   # experiment=<name>
///   # <key>=<value>        (one line per metadata entry, sorted by key)
///   col1,col2,...
///   v11,v12,...
/// Doubles are written with 17 significant digits and always carry a '.',
/// an exponent, or are inf/nan, so integer and floating cells are told apart
/// on reading. Strings must not contain commas, quotes or newlines.
struct ExperimentReport {
    std::string name;
    std::map<std::string, std::string> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<ReportValue>> rows;

    void add_row(std::vector<ReportValue> row);
    /// Index of a column; throws std::out_of_range if absent.
    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& col) const;

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

std::string format_value(const ReportValue& v);
ReportValue parse_value(const std::string& text);

void write_csv(std::ostream& out, const ExperimentReport& r);
ExperimentReport read_csv(std::istream& in);

void write_csv_file(const std::string& path, const ExperimentReport& r);
ExperimentReport read_csv_file(const std::string& path);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

} // namespace bbfem
