#include "wrcast/core/csv.hpp"

#include <charconv>
#include <cmath>

namespace wrcast::csv {

std::vector<std::string> split_line(std::string_view line, char sep) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == sep) {
            fields.push_back(std::move(current));
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string format_number(double value) {
    if (std::isnan(value)) return "";
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, ptr);
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char sep) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << sep;
        const auto& f = fields[i];
        if (f.find(sep) != std::string::npos || f.find('"') != std::string::npos) {
            out << '"';
            for (char c : f) {
                if (c == '"') out << '"';
                out << c;
            }
            out << '"';
        } else {
            out << f;
        }
    }
    out << '\n';
}

}  // namespace wrcast::csv
