#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace d2dcache {

inline constexpr const char* unstable_sentinel = "unstable";

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// Shortest text that round-trips the double, `.` decimal separator.
std::string format_double(double x);

void write_csv(std::ostream& out, const CsvTable& table);
void write_csv_file(const std::string& path, const CsvTable& table);

/// Minimal reader for files written by write_csv (no quoting).
CsvTable read_csv(std::istream& in);

}  // namespace d2dcache
