#include "psewer/csv.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <stdexcept>
#include <system_error>

namespace psewer {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    if (res.ec != std::errc{}) throw std::runtime_error("format_double: buffer too small");
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r'))
        text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty number");
    if (text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::out_of_range("missing column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header.begin());
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

}  // namespace

CsvTable read_csv(std::istream& in, const std::string& name_for_errors) {
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line_no == 1) {
            if (line.empty()) throw CsvError(name_for_errors, line_no, "missing header row");
            table.header = split_fields(line);
            continue;
        }
        if (line.empty()) continue;
        auto fields = split_fields(line);
        if (fields.size() != table.header.size())
            throw CsvError(name_for_errors, line_no,
                           "expected " + std::to_string(table.header.size()) + " fields, got " +
                               std::to_string(fields.size()));
        table.rows.push_back(std::move(fields));
    }
    if (line_no == 0) throw CsvError(name_for_errors, 1, "empty file");
    return table;
}

}  // namespace psewer
