#pragma once

#include <string>
#include <vector>

namespace gct {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  int column(const std::string& name) const;  // -1 when absent
  double number(std::size_t row, const std::string& name) const;
  std::string to_string() const;
};

CsvTable read_csv(const std::string& path);

// Writes to path.tmp and renames over path.
void write_atomic(const std::string& path, const std::string& contents);

}  // namespace gct
