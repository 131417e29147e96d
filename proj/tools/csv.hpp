#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace secrecy::cli {

using Cell = std::variant<double, long long, std::string>;

// 9 significant digits; non-finite values print as nan / inf / -inf.
std::string format_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(std::vector<Cell> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    void write(std::ostream& os) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

} // namespace secrecy::cli
