#pragma once

// Tabular output: CSV with a '#' metadata header, or a JSON document.

#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cohprobe::cli {

inline constexpr int kFormatVersion = 1;

using Cell = std::variant<double, long long, bool, std::string>;
using Metadata = std::vector<std::pair<std::string, std::string>>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Shortest text that parses back to the same double.
std::string format_double(double v);
std::string format_cell(const Cell& c);

/// RFC-4180 quoting when the field needs it.
std::string csv_field(const std::string& s);

void write_csv(std::ostream& os, const Metadata& meta, const Table& table);
void write_json(std::ostream& os, const Metadata& meta, const Table& table);

}  // namespace cohprobe::cli
