#pragma once

#include <string>
#include <vector>

namespace stlshield::io {

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const;  // -1 when absent
};

CsvTable read_csv(const std::string& path);

// Shortest round-trip formatting so re-reading reproduces identical doubles.
std::string format_double(double v);

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

}  // namespace stlshield::io
