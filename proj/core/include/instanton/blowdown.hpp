#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "instanton/fd_curvature.hpp"
#include "instanton/metrics.hpp"

namespace instanton {

// ---- 3-conifold ----

// g3 = conformal (du^2 + dv^2) + fiber dtheta^2
struct ConifoldMetric {
  double conformal;
  double fiber;
};

ConifoldMetric conifold_metric(double k, double u, double v);

struct ConifoldCurvatures {
  double K_sigma;
  std::array<double, 3> ric_diag;  // stated closed form; not the Ricci tensor of conifold_metric
};

ConifoldCurvatures conifold_curvatures(double k, double u, double v);
double conifold_curvature_fd(double k, double u, double v, double step);
FdCurvature conifold_ricci_fd(double k, double u, double v, double step = 1e-3);

// ---- second blowdown ----

struct BlowdownMetric4 {
  double conformal;
  FiberMatrix fiber;
};

BlowdownMetric4 second_blowdown_metric(double k, double u, double v);
MomentPair second_blowdown_moments(double k, double u, double v);
XY second_blowdown_xy(double u, double v);
// Conformal factor of the polytope metric written in (x~, y~).
double second_blowdown_conformal_xy(double k, double x, double y);

// ---- limit distance on the blowdown polytope ----

double blowdown_distance(double k, double u, double v);
UV blowdown_geodesic(double k, double c1, double c2, double t);

// ---- exceptional Taub-NUT limits ----

BlowdownMetric4 exceptional_blowdown_metric(double u, double v);
double exceptional_blowdown_curvature(double u, double v);

enum class FiberTopology { Torus, Cylinder };

struct PointedLimitSample {
  double A;
  double conformal;
  FiberMatrix fiber;      // recombined fiber at (u, A + v)
  FiberMatrix limit;      // the half-plane-type limit matrix
  double residual;        // max entrywise |fiber - limit|
  MomentPair moments;     // recombined moment functions
  FiberTopology topology;
};

// Convergent recombination X1~ = (sqrt2 / A)(X1 - A^2 X2), X2~ = sqrt2 X2.
PointedLimitSample pointed_limit_halfplane(double A, double u, double v_shifted);
// The recombination X1~ = (1 / (2A))(X1 - 2 sqrt2 A^2 X2), X2~ = sqrt2 X2.
PointedLimitSample pointed_limit_halfplane_as_stated(double A, double u, double v_shifted);

// ---- measured limits ----

struct ResidualRow {
  double parameter;
  double residual;
};

struct ConvergenceTable {
  std::string name;
  std::vector<ResidualRow> rows;
  double rate = 0.0;  // fitted exponent of residual vs parameter
  bool monotone = false;
  bool converging = false;  // strictly decreasing with rate <= -0.25
};

ConvergenceTable make_table(std::string name, std::vector<ResidualRow> rows);

// Scaled generalized Taub-NUT at scale M, sampled at (u, v) in limit coordinates.
ConvergenceTable conifold_conformal_table(double k, double u, double v, std::span<const double> scales);
// Fiber against the stated quarter coefficient, or against the coefficient given.
ConvergenceTable conifold_fiber_table(double k, double u, double v, std::span<const double> scales,
                                      double coefficient = 0.25);
ConvergenceTable second_blowdown_table(double k, double u, double v, std::span<const double> scales);
ConvergenceTable exceptional_blowdown_table(double u, double v, std::span<const double> scales);
ConvergenceTable pointed_limit_table(double u, double v, std::span<const double> shifts, bool as_stated = false);

std::string_view to_string(FiberTopology topology) noexcept;

}  // namespace instanton
