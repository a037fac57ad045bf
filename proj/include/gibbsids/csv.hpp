// Deterministic CSV assembly: header row, comma separator, '.' decimal point,
// LF line endings, numbers rendered with %.12g in the C locale so identical
// inputs always produce byte-identical bodies.
#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace gibbsids {

// shortest-round-trip-style fixed rendering; -0, inf, nan normalized
std::string csv_number(double v);

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(long long v);
  CsvWriter& cell(int v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(std::size_t v) { return cell(static_cast<long long>(v)); }
  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(const char* text) { return cell(std::string(text)); }
  void end_row();

  std::size_t rows() const { return rows_; }
  const std::string& body() const;  // complete file content, header included

  // writes body() to path, creating parent directories is the caller's job
  void write_file(const std::string& path) const;

 private:
  void separator();
  std::size_t columns_ = 0;
  std::size_t in_row_ = 0;
  std::size_t rows_ = 0;
  std::string buf_;
};

}  // namespace gibbsids
