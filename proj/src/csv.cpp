#include "lea/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

namespace lea {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
  if (header_.empty()) throw std::invalid_argument("CsvTable: empty header");
}

void CsvTable::comment(std::string line) { comments_.push_back(std::move(line)); }

void CsvTable::add_row(std::vector<std::string> cells) {
  if (cells.size() != header_.size()) {
    throw std::invalid_argument("CsvTable: row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(header_.size()));
  }
  rows_.push_back(std::move(cells));
}

namespace {

void write_line(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

}  // namespace

std::string CsvTable::body() const {
  std::ostringstream os;
  write_line(os, header_);
  for (const auto& r : rows_) write_line(os, r);
  return os.str();
}

void CsvTable::write(std::ostream& os) const {
  os << "# lea " << kVersion << '\n';
  for (const auto& c : comments_) os << "# " << c << '\n';
  os << body();
}

void write_table(const CsvTable& table, const std::string& path) {
  if (path.empty() || path == "-") {
    table.write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
  table.write(out);
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace lea
