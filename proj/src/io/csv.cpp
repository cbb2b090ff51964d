#include "io/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/error.hpp"

namespace stlshield::io {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return static_cast<int>(i);
    }
    return -1;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::Io, "'" + path + "' is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) table.header.push_back(cell);

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(table.header.size());
        const char* p = line.data();
        const char* end = p + line.size();
        while (p <= end) {
            const char* comma = p;
            while (comma < end && *comma != ',') ++comma;
            if (comma == p) {
                row.push_back(std::nan(""));
            } else {
                double v = 0.0;
                auto res = std::from_chars(p, comma, v);
                if (res.ec != std::errc{}) {
                    throw Error(ErrorCode::Io, "'" + path + "' line " + std::to_string(line_no) +
                                                   ": malformed number");
                }
                row.push_back(v);
            }
            if (comma == end) break;
            p = comma + 1;
        }
        if (row.size() != table.header.size()) {
            throw Error(ErrorCode::Io, "'" + path + "' line " + std::to_string(line_no) +
                                           ": expected " + std::to_string(table.header.size()) +
                                           " cells, got " + std::to_string(row.size()));
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_double(double v) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out << ',';
        out << header[i];
    }
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace stlshield::io
