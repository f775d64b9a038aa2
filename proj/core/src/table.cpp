#include "vegpat/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace vegpat {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns.size())
        throw std::invalid_argument("ResultTable: row width does not match schema");
    rows.push_back(std::move(row));
}

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    for (const auto& [k, v] : metadata) os << "# " << k << ": " << v << "\n";
    for (size_t i = 0; i < columns.size(); ++i)
        os << (i ? "," : "") << columns[i];
    os << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ",";
            if (std::holds_alternative<double>(row[i]))
                os << format_double(std::get<double>(row[i]));
            else
                os << std::get<std::string>(row[i]);
        }
        os << "\n";
    }
    return os.str();
}

namespace {

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace

ResultTable parse_csv(const std::string& text) {
    ResultTable t;
    std::istringstream is(text);
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            const size_t start = body.find_first_not_of(' ');
            const size_t colon = body.find(':', start);
            if (colon == std::string::npos)
                throw std::invalid_argument("parse_csv: malformed metadata line: " + line);
            std::string key = body.substr(start, colon - start);
            std::string val = body.substr(colon + 1);
            if (!val.empty() && val.front() == ' ') val.erase(0, 1);
            t.metadata[key] = val;
            continue;
        }
        const auto fields = split_commas(line);
        if (!have_header) {
            t.columns = fields;
            have_header = true;
            continue;
        }
        if (fields.size() != t.columns.size())
            throw std::invalid_argument("parse_csv: row width mismatch: " + line);
        std::vector<Cell> row;
        for (const auto& f : fields) {
            char* end = nullptr;
            const double v = std::strtod(f.c_str(), &end);
            if (end == f.c_str() + f.size() && !f.empty())
                row.emplace_back(v);
            else
                row.emplace_back(f);
        }
        t.rows.push_back(std::move(row));
    }
    if (!have_header)
        throw std::invalid_argument("parse_csv: no header row");
    return t;
}

}  // namespace vegpat
