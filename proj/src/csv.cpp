#include "wecsat/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "wecsat/errors.hpp"

namespace wecsat {

std::string format_number(double value) {
    if (value == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

CsvRow& CsvRow::operator<<(double value) {
    fields_.push_back(format_number(value));
    return *this;
}

CsvRow& CsvRow::operator<<(int value) {
    fields_.push_back(std::to_string(value));
    return *this;
}

CsvRow& CsvRow::operator<<(std::size_t value) {
    fields_.push_back(std::to_string(value));
    return *this;
}

CsvRow& CsvRow::operator<<(bool value) {
    fields_.emplace_back(value ? "1" : "0");
    return *this;
}

CsvRow& CsvRow::operator<<(std::string_view value) {
    fields_.emplace_back(value);
    return *this;
}

namespace {

void write_fields(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) out << ',';
        out << fields[k];
    }
    out << '\n';
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

void write_csv_header(std::ostream& out, const std::vector<std::string>& columns) { write_fields(out, columns); }

void write_csv_row(std::ostream& out, const CsvRow& row) { write_fields(out, row.fields()); }

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == name) return k;
    }
    throw Error("CSV has no column '" + std::string(name) + "'");
}

double CsvTable::number(std::size_t row, std::string_view name) const {
    const std::string& cell = rows.at(row).at(column(name));
    char* end = nullptr;
    const double value = std::strtod(cell.c_str(), &end);
    if (end == cell.c_str() || *end != '\0') throw Error("CSV cell '" + cell + "' is not a number");
    return value;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw Error("empty CSV");
    table.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != table.header.size()) throw Error("CSV row width does not match header");
        table.rows.push_back(std::move(cells));
    }
    return table;
}

}  // namespace wecsat
