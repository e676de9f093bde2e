#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/contour.hpp"

namespace instanton::cli {

// %.17g, so CSV round-trips and is byte-stable across runs.
std::string num(double value);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, std::vector<std::string> header);

  CsvWriter& cell(double value);
  CsvWriter& cell(const std::string& text);
  CsvWriter& cell(long value);
  void end_row();

 private:
  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

std::string render_svg(const std::vector<Polyline>& lines, double window, bool include_negative_quadrants);

}  // namespace instanton::cli
