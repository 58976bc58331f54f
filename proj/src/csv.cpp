#include "jcr/csv.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "jcr/errors.hpp"

namespace jcr {

namespace {

std::string trim_fixed(std::string s) {
  if (s.find('.') == std::string::npos) return s;
  std::size_t end = s.size();
  while (end > 0 && s[end - 1] == '0') --end;
  if (end > 0 && s[end - 1] == '.') --end;
  s.resize(end);
  return s.empty() || s == "-" ? "0" : s;
}

std::string trim_exponent(const std::string& s) {
  // Inputs look like "1.234500000000e-07"; compress the mantissa and strip
  // leading zeros from the exponent.
  std::size_t epos = s.find('e');
  std::string mant = trim_fixed(s.substr(0, epos));
  std::string exp = s.substr(epos + 1);
  bool neg = !exp.empty() && exp[0] == '-';
  std::size_t i = (exp.empty() || (exp[0] != '-' && exp[0] != '+')) ? 0 : 1;
  while (i + 1 < exp.size() && exp[i] == '0') ++i;
  return mant + "e" + (neg ? "-" : "") + exp.substr(i);
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  double a = std::fabs(v);
  char buf[64];
  if (a >= 1e4 || a < 1e-4) {
    std::snprintf(buf, sizeof buf, "%.12e", v);
    return trim_exponent(buf);
  }
  std::snprintf(buf, sizeof buf, "%.12f", v);
  return trim_fixed(buf);
}

void CsvWriter::comment(const std::string& line) {
  lines_.push_back("# " + line);
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  lines_.push_back(out);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (columns_ == 0) throw Error("CSV row before header");
  if (cells.size() != columns_) throw Error("CSV row width does not match header");
  std::string out;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += cells[i];
  }
  lines_.push_back(out);
}

std::string CsvWriter::str() const {
  std::string out;
  for (const auto& l : lines_) {
    out += l;
    out += '\n';
  }
  return out;
}

void write_file(const std::string& path, const std::string& text) {
  std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw Error("write failed for " + path);
}

}  // namespace jcr
