#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace spinlab::csv {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// 17 significant digits, so the text parses back to the same double.
std::string format_number(double value);
std::string format_number(long long value);

/// RFC 4180 quoting for fields containing separators, quotes or line breaks.
std::string escape(const std::string& field);

/// LF line endings; throws ShapeError on ragged rows.
void write(std::ostream& out, const Table& table);
std::string to_string(const Table& table);
/// Throws spinlab::Error with the path on I/O failure.
void emit_csv(const std::filesystem::path& path, const Table& table);

}  // namespace spinlab::csv
