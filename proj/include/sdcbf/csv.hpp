#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace sdcbf {

/// Numeric CSV with a single header line.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;
};

/// Shortest round-trip decimal representation (std::to_chars).
std::string format_double(double v);

void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);
void write_csv_row(std::ostream& out, const std::vector<double>& cells);

/// Throws ParseError on an empty file, ragged rows, or non-numeric cells.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace sdcbf
