#include "bbfem/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bbfem {

void ExperimentReport::add_row(std::vector<ReportValue> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument("ExperimentReport: row has " + std::to_string(row.size()) + " cells, expected " +
                                    std::to_string(columns.size()));
    rows.push_back(std::move(row));
}

std::size_t ExperimentReport::column(const std::string& col) const
{
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == col)
            return i;
    throw std::out_of_range("ExperimentReport: no column '" + col + "'");
}

double ExperimentReport::number(std::size_t row, const std::string& col) const
{
    const ReportValue& v = rows.at(row).at(column(col));
    if (const auto* i = std::get_if<std::int64_t>(&v))
        return static_cast<double>(*i);
    if (const auto* d = std::get_if<double>(&v))
        return *d;
    throw std::invalid_argument("ExperimentReport: column '" + col + "' is not numeric");
}

std::string format_value(const ReportValue& v)
{
    if (const auto* i = std::get_if<std::int64_t>(&v))
        return std::to_string(*i);
    if (const auto* s = std::get_if<std::string>(&v))
        return *s;
    const double x = std::get<double>(v);
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    std::string s(buf);
    if (s.find_first_of(".e") == std::string::npos)
        s += ".0";
    return s;
}

ReportValue parse_value(const std::string& text)
{
    if (text == "nan")
        return std::nan("");
    if (text == "inf")
        return HUGE_VAL;
    if (text == "-inf")
        return -HUGE_VAL;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && text.find_first_of(".eE") == std::string::npos) {
        std::int64_t i = 0;
        const auto [p, ec] = std::from_chars(first, last, i);
        if (ec == std::errc() && p == last)
            return i;
    } else if (!text.empty()) {
        double d = 0.0;
        const auto [p, ec] = std::from_chars(first, last, d);
        if (ec == std::errc() && p == last)
            return d;
    }
    return text;
}

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

void check_text(const std::string& s)
{
    if (s.find_first_of(",\"\n\r") != std::string::npos)
        throw std::invalid_argument("ExperimentReport: text '" + s + "' cannot be written as a CSV cell");
}

} // namespace

void write_csv(std::ostream& out, const ExperimentReport& r)
{
    out << "# experiment=" << r.name << '\n';
    for (const auto& [k, v] : r.metadata) {
        if (k.find('=') != std::string::npos || v.find('\n') != std::string::npos)
            throw std::invalid_argument("ExperimentReport: bad metadata entry '" + k + "'");
        out << "# " << k << '=' << v << '\n';
    }
    for (std::size_t i = 0; i < r.columns.size(); ++i) {
        check_text(r.columns[i]);
        out << (i ? "," : "") << r.columns[i];
    }
    out << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            const std::string s = format_value(row[i]);
            check_text(s);
            out << (i ? "," : "") << s;
        }
        out << '\n';
    }
}

ExperimentReport read_csv(std::istream& in)
{
    ExperimentReport r;
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (!header && line.rfind("# ", 0) == 0) {
            const auto eq = line.find('=');
            if (eq == std::string::npos)
                throw std::runtime_error("read_csv: malformed metadata line '" + line + "'");
            const std::string key = line.substr(2, eq - 2), value = line.substr(eq + 1);
            if (key == "experiment")
                r.name = value;
            else
                r.metadata[key] = value;
            continue;
        }
        if (!header) {
            r.columns = split(line);
            header = true;
            continue;
        }
        if (line.empty())
            continue;
        std::vector<ReportValue> row;
        for (const auto& cell : split(line))
            row.push_back(parse_value(cell));
        if (row.size() != r.columns.size())
            throw std::runtime_error("read_csv: row width does not match the header");
        r.rows.push_back(std::move(row));
    }
    if (!header)
        throw std::runtime_error("read_csv: missing header row");
    return r;
}

void write_csv_file(const std::string& path, const ExperimentReport& r)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    write_csv(out, r);
}

ExperimentReport read_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return read_csv(in);
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("loglog_slope: need at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double k = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

} // namespace bbfem
