#include "cli/contour.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>

#include "instanton/error.hpp"
#include "instanton/geodesics.hpp"
#include "instanton/numerics.hpp"

namespace instanton::cli {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

double eta_lower(const InstantonParams& params) { return params.uses_xy_chart() ? -kHalfPi : 0.0; }

// Root of the monotone g on [lo, hi], or nothing when g keeps one sign.
std::optional<double> level_root(const std::function<double(double)>& g, double lo, double hi) {
  const double glo = g(lo), ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0.0) == (ghi > 0.0)) return std::nullopt;
  return find_root_monotone(g, lo, hi, {1e-14 * (hi - lo), 1e-14, 400});
}

void flush(std::vector<Polyline>& out, Polyline& current, int& next_id) {
  if (current.points.size() >= 2 || (!current.points.empty() && current.level == 0.0)) {
    current.id = next_id++;
    out.push_back(current);
  }
  current.points.clear();
}

void level_curves(const InstantonParams& params, const ContourOptions& o, double W, std::vector<Polyline>& out,
                  int& next_id) {
  auto S = [&](double u, double v) { return eikonal_S(params, o.eta, u, v); };
  // With sin(eta) = 0 and b = 0 the function ignores v; walk along v then.
  const bool along_v = S(0.5 * W, -W) == S(0.5 * W, W);
  for (int j = 0; j < o.levels; ++j) {
    const double L = o.levels == 1 ? 0.0 : o.R * j / (o.levels - 1);
    Polyline current{"level", 0, L, {}};
    for (int i = 0; i < o.samples; ++i) {
      const double t = -W + 2.0 * W * i / (o.samples - 1);
      const std::optional<double> r =
          along_v ? level_root([&](double u) { return S(u, t) - L; }, -W, W)
                  : level_root([&](double v) { return S(t, v) - L; }, -W, W);
      if (!r) {
        flush(out, current, next_id);
        continue;
      }
      current.points.push_back(along_v ? UV{*r, t} : UV{t, *r});
    }
    flush(out, current, next_id);
  }
}

void polar_grid(const InstantonParams& params, const ContourOptions& o, std::vector<Polyline>& out, int& next_id) {
  const double lo = eta_lower(params);
  const int steps = std::max(2, o.samples / 4);
  for (int j = 0; j < o.rays; ++j) {
    const double eta = o.rays == 1 ? lo : lo + (kHalfPi - lo) * j / (o.rays - 1);
    Polyline ray{"radial", next_id++, eta, {}};
    for (int i = 0; i < steps; ++i) {
      const GeodesicRecord g = point_from_polar(params, o.R * i / (steps - 1), eta);
      ray.points.push_back({g.u, g.v});
    }
    out.push_back(std::move(ray));
  }
  for (int j = 1; j <= o.circles; ++j) {
    const double R = o.R * j / o.circles;
    Polyline circle{"circle", next_id++, R, {}};
    for (int i = 0; i < steps; ++i) {
      const GeodesicRecord g = point_from_polar(params, R, lo + (kHalfPi - lo) * i / (steps - 1));
      circle.points.push_back({g.u, g.v});
    }
    out.push_back(std::move(circle));
  }
}

}  // namespace

double contour_window(const InstantonParams& params, double R) {
  double W = 0.0;
  const double lo = eta_lower(params);
  for (int i = 0; i <= 16; ++i) {
    const GeodesicRecord g = point_from_polar(params, R, lo + (kHalfPi - lo) * i / 16.0);
    W = std::max({W, std::abs(g.u), std::abs(g.v)});
  }
  return 1.1 * W;
}

std::vector<Polyline> contour_polylines(const InstantonParams& params, const ContourOptions& o) {
  if (o.levels < 1 || o.samples < 3 || o.rays < 1 || o.circles < 0) {
    throw Error(ErrorCode::InvalidArgument, "contour needs levels >= 1, samples >= 3, rays >= 1");
  }
  if (!(o.R > 0.0) || !std::isfinite(o.R)) throw Error(ErrorCode::InvalidArgument, "R must be positive");
  const double W = contour_window(params, o.R);
  std::vector<Polyline> out;
  int next_id = 0;
  level_curves(params, o, W, out, next_id);
  polar_grid(params, o, out, next_id);
  return out;
}

}  // namespace instanton::cli
