#include "spinlab/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "spinlab/errors.hpp"

namespace spinlab::csv {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::string format_number(long long value) { return std::to_string(value); }

std::string escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  out += '"';
  return out;
}

void write(std::ostream& out, const Table& table) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out << ',';
      out << escape(cells[i]);
    }
    out << '\n';
  };
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) throw ShapeError("csv: row width does not match the header");
  }
  line(table.header);
  for (const auto& row : table.rows) line(row);
}

std::string to_string(const Table& table) {
  std::ostringstream out;
  write(out, table);
  return out.str();
}

void emit_csv(const std::filesystem::path& path, const Table& table) {
  const std::string text = to_string(table);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw Error("csv: cannot open '" + path.string() + "' for writing");
  file << text;
  file.flush();
  if (!file) throw Error("csv: write to '" + path.string() + "' failed");
}

}  // namespace spinlab::csv
