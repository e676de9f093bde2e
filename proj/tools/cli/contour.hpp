#pragma once

#include <string>
#include <vector>

#include "instanton/family.hpp"

namespace instanton::cli {

struct Polyline {
  std::string kind;  // "level", "radial" or "circle"
  int id;
  double level;  // S value, eta or R depending on kind
  std::vector<UV> points;
};

struct ContourOptions {
  double eta = 0.0;
  int levels = 8;
  double R = 3.0;  // largest level and geodesic radius drawn
  int samples = 241;
  int rays = 9;
  int circles = 6;
};

// Level sets of S_eta over the square window [-W, W]^2 of the quadratic chart
// (S extends oddly past the axes), plus the geodesic polar grid in the chart domain.
std::vector<Polyline> contour_polylines(const InstantonParams& params, const ContourOptions& options);

double contour_window(const InstantonParams& params, double R);

}  // namespace instanton::cli
