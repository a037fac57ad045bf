#include "gibbsids/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gibbsids {

std::string csv_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // merges -0
  char out[40];
  std::snprintf(out, sizeof(out), "%.12g", v);
  return out;
}

CsvWriter::CsvWriter(const std::vector<std::string>& header)
    : columns_(header.size()) {
  if (header.empty()) throw std::invalid_argument("CsvWriter: no columns");
  for (const auto& name : header) {
    cell(name);
  }
  end_row();
  rows_ = 0;  // the header is not a data row
}

void CsvWriter::separator() {
  if (in_row_ >= columns_)
    throw std::logic_error("CsvWriter: row has too many cells");
  if (in_row_ > 0) buf_ += ',';
  ++in_row_;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  buf_ += csv_number(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  buf_ += std::to_string(v);
  return *this;
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  separator();
  if (text.find_first_of(",\"\n") != std::string::npos) {
    buf_ += '"';
    for (char c : text) {
      if (c == '"') buf_ += '"';
      buf_ += c;
    }
    buf_ += '"';
  } else {
    buf_ += text;
  }
  return *this;
}

void CsvWriter::end_row() {
  if (in_row_ != columns_)
    throw std::logic_error("CsvWriter: row is missing cells");
  buf_ += '\n';
  in_row_ = 0;
  ++rows_;
}

const std::string& CsvWriter::body() const {
  if (in_row_ != 0) throw std::logic_error("CsvWriter: unfinished row");
  return buf_;
}

void CsvWriter::write_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("CsvWriter: cannot open " + path);
  out << body();
  if (!out) throw std::runtime_error("CsvWriter: write failed for " + path);
}

}  // namespace gibbsids
