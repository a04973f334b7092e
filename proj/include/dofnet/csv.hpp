#pragma once

#include <string>
#include <vector>

namespace dofnet {

// Minimal CSV table: UTF-8, comma separated, one header row, '.' decimal.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column_index(const std::string& name) const;  // throws if missing
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvTable& table);

// Fixed-width decimal formatting so result files are reproducible bytes.
std::string format_number(double v);

}  // namespace dofnet
