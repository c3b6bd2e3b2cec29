#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gbwave/lattice.hpp"

namespace gbwave {

/// Shortest decimal text that reads back to the same double. Never
/// depends on the global locale.
std::string format_number(double value);

/// Comma-separated writer; the header is written on construction.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> columns);
  CsvWriter(std::ostream& out, const std::vector<std::string>& columns);

  CsvWriter& operator<<(double value);
  CsvWriter& operator<<(long long value);
  CsvWriter& operator<<(std::string_view text);
  void end_row();

  std::size_t columns() const { return columns_; }

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

/// One row per node: index columns, coordinate columns, re, im.
void write_field_csv(std::ostream& out, const ComplexField& f);

}  // namespace gbwave
