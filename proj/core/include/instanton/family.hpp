#pragma once

#include <string>
#include <string_view>

namespace instanton {

enum class Family { GeneralizedTN, ExceptionalTN, ExceptionalHalfPlane, Flat };

std::string_view to_string(Family family) noexcept;
Family parse_family(std::string_view name);

// Which metric is meant. GeneralizedTN carries (M, k) with |k| < 1; the other
// families have fixed normalizations and report their constant M.
class InstantonParams {
 public:
  static InstantonParams generalized(double k, double M = kStandardScale);
  static InstantonParams exceptional_taub_nut();
  static InstantonParams half_plane();
  static InstantonParams flat();

  static constexpr double kStandardScale = 1.4142135623730950488;  // sqrt(2)

  Family family() const noexcept { return family_; }
  double M() const noexcept { return M_; }
  double k() const noexcept { return k_; }
  double alpha() const noexcept { return M_ * (1.0 + k_); }
  double beta() const noexcept { return M_ * (1.0 - k_); }

  bool is_generalized() const noexcept { return family_ == Family::GeneralizedTN; }
  // ExceptionalHalfPlane and Flat use (x, y) itself as the quadratic chart.
  bool uses_xy_chart() const noexcept {
    return family_ == Family::ExceptionalHalfPlane || family_ == Family::Flat;
  }

  std::string to_json() const;
  static InstantonParams from_json(std::string_view text);

  friend bool operator==(const InstantonParams&, const InstantonParams&) = default;

 private:
  InstantonParams(Family family, double M, double k) : family_(family), M_(M), k_(k) {}

  Family family_;
  double M_;
  double k_;
};

enum class Chart { XY, UV, MomentPhi, GeodesicPolar, AlmostPolar };

std::string_view to_string(Chart chart) noexcept;
Chart parse_chart(std::string_view name);

struct ChartPoint {
  Chart chart;
  double c1;
  double c2;
};

struct UV {
  double u;
  double v;
};

struct XY {
  double x;
  double y;
};

struct MomentPair {
  double phi1;
  double phi2;
};

struct AlmostPolar {
  double R_tilde;
  double psi;
};

// Polytope metric lambda * (du^2 + dv^2) with lambda = c * (1 + a^2 u^2 + b^2 v^2).
// Every family in scope has this separated shape in its quadratic chart.
struct SeparatedProfile {
  double c;
  double a;
  double b;
};

SeparatedProfile separated_profile(const InstantonParams& params);

void validate_chart_point(const InstantonParams& params, const ChartPoint& point);

UV xy_to_uv(const InstantonParams& params, double x, double y);
XY uv_to_xy(const InstantonParams& params, double u, double v);

// The parallelogram volume x of the Killing pair, from quadratic coordinates.
double volumetric_x(const InstantonParams& params, double u, double v);

MomentPair moment_map_uv(const InstantonParams& params, double u, double v);
MomentPair moment_map_xy(const InstantonParams& params, double x, double y);
MomentPair moment_map(const InstantonParams& params, const ChartPoint& point);
UV uv_from_moment(const InstantonParams& params, const MomentPair& moment);

struct MomentPdeResidual {
  double res1;
  double res2;
};

MomentPdeResidual moment_pde_residual(const InstantonParams& params, double x, double y, double step);

AlmostPolar almost_polar_from_uv(const InstantonParams& params, double u, double v);
UV uv_from_almost_polar(const InstantonParams& params, double R_tilde, double psi);

// Sign of det d(phi1, phi2)/d(chart) on the open quadrant: -1 for the (u,v)
// charts of the Taub-NUT families, +1 for (x,y) charts.
double chart_orientation(const InstantonParams& params);

}  // namespace instanton
