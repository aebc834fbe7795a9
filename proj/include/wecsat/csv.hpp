#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace wecsat {

/// Fixed 12 significant digit rendering used for every emitted number.
/// Negative zero prints as 0 so output does not depend on rounding noise.
std::string format_number(double value);

/// Accumulates one CSV row.
class CsvRow {
public:
    CsvRow& operator<<(double value);
    CsvRow& operator<<(int value);
    CsvRow& operator<<(std::size_t value);
    CsvRow& operator<<(bool value);
    CsvRow& operator<<(std::string_view value);

    const std::vector<std::string>& fields() const { return fields_; }

private:
    std::vector<std::string> fields_;
};

void write_csv_header(std::ostream& out, const std::vector<std::string>& columns);
void write_csv_row(std::ostream& out, const CsvRow& row);

/// Parsed CSV file: header plus string cells.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws Error when absent.
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view name) const;
};

CsvTable read_csv(std::istream& in);

}  // namespace wecsat
