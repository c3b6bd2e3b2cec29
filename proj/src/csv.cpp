#include "gbwave/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace gbwave {

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  if (res.ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> columns)
    : CsvWriter(out, std::vector<std::string>(columns.begin(), columns.end())) {}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& columns)
    : out_(out), columns_(columns.size()) {
  for (const auto& c : columns) *this << std::string_view(c);
  end_row();
}

void CsvWriter::separator() {
  if (filled_ == columns_) throw std::logic_error("csv row has too many fields");
  if (filled_++ > 0) out_ << ',';
}

CsvWriter& CsvWriter::operator<<(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::operator<<(long long value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::operator<<(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv row has too few fields");
  out_ << '\n';
  filled_ = 0;
}

void write_field_csv(std::ostream& out, const ComplexField& f) {
  const int d = f.grid.dim();
  std::vector<std::string> cols;
  for (int a = 0; a < d; ++a) cols.push_back(d == 1 ? "i" : "i" + std::to_string(a));
  for (int a = 0; a < d; ++a) cols.push_back(d == 1 ? "x" : "x" + std::to_string(a));
  cols.insert(cols.end(), {"re", "im"});
  CsvWriter csv(out, cols);
  for (std::size_t j = 0; j < f.size(); ++j) {
    const auto idx = f.grid.unravel(j);
    for (int a = 0; a < d; ++a) csv << static_cast<long long>(idx[a]);
    for (int a = 0; a < d; ++a) csv << f.grid.coord(a, idx[a]);
    csv << f[j].real() << f[j].imag();
    csv.end_row();
  }
}

}  // namespace gbwave
