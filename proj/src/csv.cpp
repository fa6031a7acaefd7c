#include "d2dcache/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace d2dcache {

std::string format_double(double x)
{
    if (!std::isfinite(x)) {
        throw std::invalid_argument("refusing to write a non-finite value to CSV");
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

void write_csv(std::ostream& out, const CsvTable& table)
{
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) {
                out << ',';
            }
            out << cells[i];
        }
        out << '\n';
    };
    line(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) {
            throw std::logic_error("CSV row width does not match the header");
        }
        line(row);
    }
}

void write_csv_file(const std::string& path, const CsvTable& table)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    write_csv(out, table);
    if (!out) {
        throw std::runtime_error("error writing " + path);
    }
}

CsvTable read_csv(std::istream& in)
{
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            cells.push_back(cell);
        }
        if (line.back() == ',') {
            cells.emplace_back();
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

}  // namespace d2dcache
