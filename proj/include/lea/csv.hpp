#pragma once

// Long-format CSV tables: '#' comment lines, one header row, comma-separated
// cells, numbers printed with 12 significant digits.

#include <iosfwd>
#include <string>
#include <vector>

namespace lea {

inline constexpr const char* kVersion = "0.1.0";

std::string format_number(double x);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void comment(std::string line);
  void add_row(std::vector<std::string> cells);

  const std::vector<std::string>& header() const noexcept { return header_; }
  const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

  // First line is "# lea <version>", then the comments, header and rows.
  void write(std::ostream& os) const;
  // Header and rows only.
  std::string body() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::string> comments_;
  std::vector<std::vector<std::string>> rows_;
};

// Writes to `path`, or stdout when path is empty or "-".
void write_table(const CsvTable& table, const std::string& path);

}  // namespace lea
