#include "cli/output.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace instanton::cli {

std::string num(double value) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

CsvWriter::CsvWriter(std::ostream& out, std::vector<std::string> header) : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

CsvWriter& CsvWriter::cell(const std::string& text) {
  if (filled_ == columns_) throw std::logic_error("CSV row has too many cells");
  out_ << (filled_++ ? "," : "");
  if (text.find_first_of(",\"\n") == std::string::npos) {
    out_ << text;
    return *this;
  }
  out_ << '"';
  for (char ch : text) out_ << (ch == '"' ? "\"\"" : std::string(1, ch));
  out_ << '"';
  return *this;
}

CsvWriter& CsvWriter::cell(double value) { return cell(num(value)); }

CsvWriter& CsvWriter::cell(long value) { return cell(std::to_string(value)); }

void CsvWriter::end_row() {
  if (filled_ != columns_) throw std::logic_error("CSV row has too few cells");
  out_ << '\n';
  filled_ = 0;
}

std::string render_svg(const std::vector<Polyline>& lines, double window, bool include_negative_quadrants) {
  constexpr double size = 600.0;
  constexpr double margin = 20.0;
  const double lo = include_negative_quadrants ? -window : 0.0;
  const double scale = (size - 2 * margin) / (window - lo);
  auto px = [&](double u) { return margin + (u - lo) * scale; };
  auto py = [&](double v) { return size - margin - (v - lo) * scale; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << px(lo) << "\" y1=\"" << py(0) << "\" x2=\"" << px(window) << "\" y2=\"" << py(0)
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << px(0) << "\" y1=\"" << py(lo) << "\" x2=\"" << px(0) << "\" y2=\"" << py(window)
      << "\" stroke=\"black\"/>\n";
  for (const Polyline& line : lines) {
    const char* colour = line.kind == "level" ? "#1f77b4" : line.kind == "radial" ? "#d62728" : "#2ca02c";
    svg << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < line.points.size(); ++i) {
      const double u = std::clamp(line.points[i].u, lo, window);
      const double v = std::clamp(line.points[i].v, lo, window);
      svg << (i ? " " : "") << num(px(u)) << ',' << num(py(v));
    }
    svg << "\"><title>" << line.kind << ' ' << num(line.level) << "</title></polyline>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace instanton::cli
