#include "csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace secrecy::cli {

std::string format_double(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

std::string quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string render(const Cell& c)
{
    if (auto d = std::get_if<double>(&c)) return format_double(*d);
    if (auto i = std::get_if<long long>(&c)) return std::to_string(*i);
    return quote(std::get<std::string>(c));
}

} // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

void CsvTable::add_row(std::vector<Cell> row)
{
    if (row.size() != header_.size()) throw std::logic_error("CsvTable: row width does not match header");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& os) const
{
    for (std::size_t i = 0; i < header_.size(); ++i) os << (i ? "," : "") << quote(header_[i]);
    os << '\n';
    for (const auto& r : rows_) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << render(r[i]);
        os << '\n';
    }
}

} // namespace secrecy::cli
