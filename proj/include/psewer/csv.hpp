#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psewer {

/// Shortest decimal text that parses back to the identical double.
/// Locale-independent ('.' separator).
std::string format_double(double value);

/// Strict, locale-independent parse of the whole of `text`. Throws
/// std::invalid_argument on trailing garbage or an empty field.
double parse_double(std::string_view text);

/// Header plus rows of string fields. No quoting: the files written here
/// never contain commas inside a field.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    /// Column index by name; throws std::out_of_range when missing.
    std::size_t column(std::string_view name) const;
};

/// Error naming the 1-based line of a malformed CSV file.
class CsvError : public std::runtime_error {
public:
    CsvError(std::string path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what),
          path_(std::move(path)),
          line_(line) {}

    const std::string& path() const noexcept { return path_; }
    std::size_t line() const noexcept { return line_; }

private:
    std::string path_;
    std::size_t line_;
};

/// Reads a header-first CSV; every row must have as many fields as the header.
CsvTable read_csv(std::istream& in, const std::string& name_for_errors);

}  // namespace psewer
