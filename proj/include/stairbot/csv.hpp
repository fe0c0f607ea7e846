#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace stairbot::io {

/// Fixed 9-significant-digit rendering used by every numeric output.
std::string fmt_num(double v);

/// Minimal CSV writer: header first, then rows of already-formatted cells.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::vector<std::string>& header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream& os_;
  std::size_t columns_;
};

/// Splits one CSV line on commas; no quoting support.
std::vector<std::string> split_csv_line(const std::string& line);

}  // namespace stairbot::io
