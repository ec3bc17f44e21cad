#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace wrcast::csv {

/// Splits one record. Double-quoted fields may contain the separator; `""` is a literal quote.
std::vector<std::string> split_line(std::string_view line, char sep = ',');

/// Formats a double with round-trip precision.
std::string format_number(double value);

/// Writes one record, quoting fields that contain the separator or quotes.
void write_row(std::ostream& out, const std::vector<std::string>& fields, char sep = ',');

}  // namespace wrcast::csv
