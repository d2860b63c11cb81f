#include "tensorlab/experiments.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace tensorlab {

int RecordTable::column(const std::string& name) const {
    for (std::size_t j = 0; j < columns.size(); ++j) {
        if (columns[j] == name) return static_cast<int>(j);
    }
    return -1;
}

const Cell& RecordTable::at(std::size_t row, const std::string& name) const {
    const int j = column(name);
    if (j < 0) throw std::out_of_range("no column named '" + name + "'");
    return rows.at(row).at(static_cast<std::size_t>(j));
}

namespace {

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string quote_if_needed(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

void write_csv(const RecordTable& table, std::ostream& os) {
    for (std::size_t j = 0; j < table.columns.size(); ++j) {
        if (j > 0) os << ',';
        os << quote_if_needed(table.columns[j]);
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j > 0) os << ',';
            switch (row[j].kind) {
                case Cell::Kind::number:
                    os << format_number(row[j].num);
                    break;
                case Cell::Kind::text:
                    os << quote_if_needed(row[j].text);
                    break;
                case Cell::Kind::na:
                    os << "n/a";
                    break;
            }
        }
        os << '\n';
    }
}

void write_csv_file(const RecordTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    write_csv(table, out);
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace tensorlab
