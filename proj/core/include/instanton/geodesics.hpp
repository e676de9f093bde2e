#pragma once

#include <vector>

#include "instanton/family.hpp"
#include "instanton/numerics.hpp"

namespace instanton {

// Root solves inside this module run to machine precision; the Tolerance only
// bounds iteration counts.

double eikonal_S(const InstantonParams& params, double eta, double u, double v);
Gradient2 eikonal_gradient(const InstantonParams& params, double eta, double u, double v);

// |(S_u^2 + S_v^2) / lambda - 1| with centered differences.
double eikonal_residual(const InstantonParams& params, double eta, double u, double v, double step);

double unparam_geodesic_v_of_u(const InstantonParams& params, double eta, double u);

double solve_eta(const InstantonParams& params, double u, double v, const Tolerance& tol = {});

// log F solves the implicit F equation; F itself overflows for long geodesics
// of the exceptional families, so the log is the primary quantity.
double solve_log_F(const InstantonParams& params, double R, double eta, const Tolerance& tol = {});
double solve_F(const InstantonParams& params, double R, double eta, const Tolerance& tol = {});

// The distance R reached at parameter F on the eta-geodesic.
double radius_from_log_F(const InstantonParams& params, double log_F, double eta);
double radius_from_F(const InstantonParams& params, double F, double eta);

struct GeodesicRecord {
  double eta;
  double R;
  double u;
  double v;
  double F;
  double log_F;
  double eikonal_residual;
  double geodesic_residual;
};

GeodesicRecord point_from_polar(const InstantonParams& params, double R, double eta, const Tolerance& tol = {});

struct PolarLocation {
  double R;
  double eta;
};

PolarLocation polar_from_uv(const InstantonParams& params, double u, double v, const Tolerance& tol = {});

struct ApproxF {
  double value;
  int branch;  // 0 below the arcsin threshold, 1 above
  double threshold_eta;
};

ApproxF approx_F(const InstantonParams& params, double R, double eta);

double distance(const InstantonParams& params, double u, double v, const Tolerance& tol = {});
double almost_distance(const InstantonParams& params, double u, double v);

struct PolarMetricSample {
  double R;
  double eta;
  double A_squared;
};

PolarMetricSample polar_metric_coefficient(const InstantonParams& params, double R, double eta,
                                           const Tolerance& tol = {});

struct ShotSample {
  double t;
  double u;
  double v;
  double distance;
  double geodesic_residual;
};

std::vector<ShotSample> geodesic_shoot(const InstantonParams& params, double eta, double t_end,
                                       const Tolerance& tol = {});

ChartPoint convert(const InstantonParams& params, const ChartPoint& point, Chart target,
                   const Tolerance& tol = {});

}  // namespace instanton
