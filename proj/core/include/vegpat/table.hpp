#ifndef VEGPAT_TABLE_HPP
#define VEGPAT_TABLE_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

namespace vegpat {

using Cell = std::variant<double, std::string>;

/// Columnar result table with `#`-prefixed metadata, written as CSV.
/// Numeric cells are formatted with 9 significant digits; the writer and
/// reader round-trip (modulo that formatting).
struct ResultTable {
    std::map<std::string, std::string> metadata;  // sorted, deterministic
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add_row(std::vector<Cell> row);  // throws on column-count mismatch
    std::string to_csv() const;
};

ResultTable parse_csv(const std::string& text);

std::string format_double(double v);  // 9 significant digits

}  // namespace vegpat

#endif
