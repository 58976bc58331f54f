#pragma once

#include <string>
#include <vector>

namespace jcr {

/// Deterministic number formatting for CSV cells: plain decimal inside
/// [1e-4, 1e4), exponent notation outside, NaN/inf spelled out.
std::string format_number(double v);

/// One CSV document: '#'-prefixed header lines followed by a fixed column
/// schema and data rows. Cells are joined with commas; callers must not pass
/// cells containing commas or newlines.
class CsvWriter {
 public:
  void comment(const std::string& line);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  std::string str() const;

 private:
  std::vector<std::string> lines_;
  std::size_t columns_ = 0;
};

/// Write text to a file, creating parent directories as needed.
void write_file(const std::string& path, const std::string& text);

}  // namespace jcr
